#pragma once

// exp/log cores shared by every lane backend. The algorithms are the classic
// fdlibm reductions; each step is a plain IEEE operation from the backend's
// set, so the result for a given input is the same bit pattern on every
// backend (including the single-lane scalar one).
//
// Domain contracts (callers keep inputs inside them):
//   vexp:  finite x; x < -708 flushes to 0 (subnormal tail not needed here),
//          x > 709.7 saturates to +inf.
//   vlog:  finite, positive, normal x.
//   vlog1p_scaled: u = scale*x > -1 and 1+u normal or zero-offset (u == 0 ok).

#include <limits>

#include "mimodos/kernels/vec.hpp"

namespace mimodos::vm {

inline constexpr double kExpLo = -708.0;
inline constexpr double kExpHi = 709.7;
inline constexpr double kLog2E = 1.44269504088896338700e+00;
inline constexpr double kLn2Hi = 6.93147180369123816490e-01;
inline constexpr double kLn2Lo = 1.90821492927058770002e-10;
inline constexpr double kMagic = 6755399441055744.0;  // 1.5 * 2^52
inline constexpr double kSqrtHalf = 0.70710678118654752440;

inline constexpr double kExpP1 = 1.66666666666666019037e-01;
inline constexpr double kExpP2 = -2.77777777770155933842e-03;
inline constexpr double kExpP3 = 6.61375632143793436117e-05;
inline constexpr double kExpP4 = -1.65339022054652515390e-06;
inline constexpr double kExpP5 = 4.13813679705723846039e-08;

inline constexpr double kLg1 = 6.666666666666735130e-01;
inline constexpr double kLg2 = 3.999999999940941908e-01;
inline constexpr double kLg3 = 2.857142874366239149e-01;
inline constexpr double kLg4 = 2.222219843214978396e-01;
inline constexpr double kLg5 = 1.818357216161805012e-01;
inline constexpr double kLg6 = 1.531383769920937332e-01;
inline constexpr double kLg7 = 1.479819860511658591e-01;

// Exact for integer-valued v with |v| < 2^51.
template <class B>
inline typename B::VI to_int_small(typename B::VD v) {
  typename B::VD t = B::add(v, B::set1(kMagic));
  return B::sub64(B::dtoi(t), B::set1i(std::bit_cast<std::uint64_t>(kMagic)));
}

// Exact for integer lanes in (-2^51, 2^51).
template <class B>
inline typename B::VD small_int_to_dbl(typename B::VI i) {
  typename B::VI b = B::add64(i, B::set1i(std::bit_cast<std::uint64_t>(kMagic)));
  return B::sub(B::itod(b), B::set1(kMagic));
}

template <class B>
inline typename B::VD vexp(typename B::VD x) {
  using VD = typename B::VD;
  using VI = typename B::VI;
  const VD lo_lim = B::set1(kExpLo);
  const VD hi_lim = B::set1(kExpHi);
  const VI too_lo = B::cmp_lt(x, lo_lim);
  const VI too_hi = B::cmp_lt(hi_lim, x);
  VD xc = B::select(too_lo, lo_lim, x);
  xc = B::select(too_hi, hi_lim, xc);

  const VD k = B::rint(B::mul(xc, B::set1(kLog2E)));
  const VD hi = B::fmadd(k, B::set1(-kLn2Hi), xc);  // exact: ln2_hi has spare bits
  const VD lo = B::mul(k, B::set1(kLn2Lo));
  const VD r = B::sub(hi, lo);

  const VD t = B::mul(r, r);
  VD p = B::fmadd(t, B::set1(kExpP5), B::set1(kExpP4));
  p = B::fmadd(t, p, B::set1(kExpP3));
  p = B::fmadd(t, p, B::set1(kExpP2));
  p = B::fmadd(t, p, B::set1(kExpP1));
  const VD c = B::sub(r, B::mul(t, p));
  const VD q = B::div(B::mul(r, c), B::sub(B::set1(2.0), c));
  VD y = B::sub(B::set1(1.0), B::sub(B::sub(lo, q), hi));

  // scale by 2^k; k in [-1022, 1024] after the clamp, so the biased exponent
  // stays in the normal/inf range and plain bit assembly is enough
  const VI ki = to_int_small<B>(k);
  const VD pow2 = B::itod(B::template sll<52>(B::add64(ki, B::set1i(1023))));
  y = B::mul(y, pow2);

  y = B::select(too_lo, B::set1(0.0), y);
  y = B::select(too_hi, B::set1(std::numeric_limits<double>::infinity()), y);
  return y;
}

template <class B>
inline typename B::VD vlog(typename B::VD x) {
  using VD = typename B::VD;
  using VI = typename B::VI;
  const VI bits = B::dtoi(x);
  const VI ebiased = B::template srl<52>(bits);
  const VI mant = B::or_(B::and_(bits, B::set1i(0x000FFFFFFFFFFFFFULL)),
                         B::set1i(0x3FE0000000000000ULL));  // m in [0.5, 1)
  VD m = B::itod(mant);
  const VD eb = small_int_to_dbl<B>(ebiased);
  const VI lt = B::cmp_lt(m, B::set1(kSqrtHalf));
  m = B::select(lt, B::add(m, m), m);  // m in [sqrt(1/2), sqrt(2))
  const VD e = B::sub(eb, B::select(lt, B::set1(1023.0), B::set1(1022.0)));

  const VD f = B::sub(m, B::set1(1.0));
  const VD s = B::div(f, B::add(B::set1(2.0), f));
  const VD z = B::mul(s, s);
  const VD w = B::mul(z, z);
  const VD t1 =
      B::mul(w, B::fmadd(w, B::fmadd(w, B::set1(kLg6), B::set1(kLg4)), B::set1(kLg2)));
  const VD t2 = B::mul(
      z, B::fmadd(w, B::fmadd(w, B::fmadd(w, B::set1(kLg7), B::set1(kLg5)), B::set1(kLg3)),
                  B::set1(kLg1)));
  const VD R = B::add(t2, t1);
  const VD hfsq = B::mul(B::set1(0.5), B::mul(f, f));
  const VD inner = B::fmadd(e, B::set1(kLn2Lo), B::mul(s, B::add(hfsq, R)));
  return B::sub(B::mul(e, B::set1(kLn2Hi)), B::sub(B::sub(hfsq, inner), f));
}

// ln(1 + scale*x) with the standard w-correction so accuracy holds even when
// scale*x is far below 1 ulp of 1; exact 0 for scale*x == 0.
template <class B>
inline typename B::VD vlog1p_scaled(typename B::VD x, typename B::VD scale) {
  using VD = typename B::VD;
  const VD u = B::mul(scale, x);
  const VD one = B::set1(1.0);
  const VD w = B::add(one, u);
  const VD lg = vlog<B>(w);
  const VD corr = B::div(B::sub(u, B::sub(w, one)), w);
  return B::add(lg, corr);
}

}  // namespace mimodos::vm
