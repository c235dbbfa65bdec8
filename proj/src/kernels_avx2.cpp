// Compiled with -mavx2 -mfma (see CMakeLists); keep all AVX2 code in this TU.

#include "kernels_impl.hpp"

namespace mimodos::kernels {

const KernelTable* avx2_kernel_table() {
  static const KernelTable table = make_kernel_table<kern::Avx2>();
  return &table;
}

}  // namespace mimodos::kernels
