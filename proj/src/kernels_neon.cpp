// NEON is baseline on aarch64; no special flags needed.

#include "kernels_impl.hpp"

namespace mimodos::kernels {

const KernelTable* neon_kernel_table() {
  static const KernelTable table = make_kernel_table<kern::Neon>();
  return &table;
}

}  // namespace mimodos::kernels
