#pragma once

// Kernel bodies, templated over the lane backend. Included by one translation
// unit per backend so each gets compiled with its own instruction-set flags.
// Tails (n % 4) run through a zero/one-padded 4-lane block, keeping the
// per-element operation sequence identical across backends.

#include <cstddef>

#include "mimodos/kernels/vmath.hpp"

namespace mimodos::kernels {

struct KernelTable {
  void (*exp_pos)(const double*, double*, std::size_t);
  void (*exp_neg)(const double*, double*, std::size_t);
  void (*log1p_scaled)(const double*, double*, std::size_t, double);
  double (*dot)(const double*, const double*, std::size_t);
  double (*sum)(const double*, std::size_t);
};

namespace detail {

template <class B, class F>
inline void map1(const double* x, double* y, std::size_t n, double pad, F f) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) B::store(y + i, f(B::load(x + i)));
  if (i < n) {
    double tx[4] = {pad, pad, pad, pad};
    double ty[4];
    for (std::size_t j = i; j < n; ++j) tx[j - i] = x[j];
    B::store(ty, f(B::load(tx)));
    for (std::size_t j = i; j < n; ++j) y[j] = ty[j - i];
  }
}

template <class B>
void exp_pos_impl(const double* x, double* y, std::size_t n) {
  map1<B>(x, y, n, 0.0, [](typename B::VD v) { return vm::vexp<B>(v); });
}

template <class B>
void exp_neg_impl(const double* x, double* y, std::size_t n) {
  map1<B>(x, y, n, 0.0, [](typename B::VD v) { return vm::vexp<B>(B::neg(v)); });
}

template <class B>
void log1p_scaled_impl(const double* x, double* y, std::size_t n, double scale) {
  const auto s = B::set1(scale);
  map1<B>(x, y, n, 0.0, [s](typename B::VD v) { return vm::vlog1p_scaled<B>(v, s); });
}

template <class B>
double dot_impl(const double* a, const double* b, std::size_t n) {
  auto acc = B::set1(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = B::fmadd(B::load(a + i), B::load(b + i), acc);
  if (i < n) {
    double ta[4] = {0.0, 0.0, 0.0, 0.0};
    double tb[4] = {0.0, 0.0, 0.0, 0.0};
    for (std::size_t j = i; j < n; ++j) {
      ta[j - i] = a[j];
      tb[j - i] = b[j];
    }
    acc = B::fmadd(B::load(ta), B::load(tb), acc);
  }
  double l[4];
  B::store(l, acc);
  return (l[0] + l[1]) + (l[2] + l[3]);
}

template <class B>
double sum_impl(const double* x, std::size_t n) {
  auto acc = B::set1(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = B::add(acc, B::load(x + i));
  if (i < n) {
    double tx[4] = {0.0, 0.0, 0.0, 0.0};
    for (std::size_t j = i; j < n; ++j) tx[j - i] = x[j];
    acc = B::add(acc, B::load(tx));
  }
  double l[4];
  B::store(l, acc);
  return (l[0] + l[1]) + (l[2] + l[3]);
}

}  // namespace detail

template <class B>
constexpr KernelTable make_kernel_table() {
  return KernelTable{&detail::exp_pos_impl<B>, &detail::exp_neg_impl<B>,
                     &detail::log1p_scaled_impl<B>, &detail::dot_impl<B>,
                     &detail::sum_impl<B>};
}

}  // namespace mimodos::kernels
