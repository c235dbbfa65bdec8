#pragma once

// Lane backends for the batch kernels. Every backend exposes the same
// operation set with identical per-lane IEEE-754 semantics, and the math in
// vmath.hpp is written once against that set, so a value computed by any
// backend is bit-identical to the generic one. That property is what lets the
// runtime pick AVX2/NEON freely without perturbing simulation output, and it
// is asserted directly by the kernel equivalence tests.

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>

#if defined(__AVX2__) && defined(__FMA__)
#include <immintrin.h>
#endif
#if defined(__aarch64__)
#include <arm_neon.h>
#endif

namespace mimodos::kern {

// Single-lane backend: the scalar math in fastmath.hpp is this backend run
// one value at a time, so scalar call sites agree bitwise with batch kernels.
struct Scalar1 {
  using VD = double;
  using VI = std::uint64_t;
  static constexpr int width = 1;

  static VD load(const double* p) { return *p; }
  static void store(double* p, VD v) { *p = v; }
  static VD set1(double x) { return x; }
  static VI set1i(std::uint64_t x) { return x; }
  static VD add(VD a, VD b) { return a + b; }
  static VD sub(VD a, VD b) { return a - b; }
  static VD mul(VD a, VD b) { return a * b; }
  static VD div(VD a, VD b) { return a / b; }
  static VD fmadd(VD a, VD b, VD c) { return std::fma(a, b, c); }
  static VD neg(VD a) {
    return std::bit_cast<double>(std::bit_cast<std::uint64_t>(a) ^ 0x8000000000000000ULL);
  }
  static VD rint(VD a) { return std::nearbyint(a); }
  static VI cmp_lt(VD a, VD b) { return a < b ? ~0ULL : 0ULL; }
  static VD select(VI m, VD a, VD b) {
    return std::bit_cast<double>((std::bit_cast<std::uint64_t>(a) & m) |
                                 (std::bit_cast<std::uint64_t>(b) & ~m));
  }
  static VI dtoi(VD a) { return std::bit_cast<std::uint64_t>(a); }
  static VD itod(VI a) { return std::bit_cast<double>(a); }
  static VI and_(VI a, VI b) { return a & b; }
  static VI or_(VI a, VI b) { return a | b; }
  static VI add64(VI a, VI b) { return a + b; }
  static VI sub64(VI a, VI b) { return a - b; }
  template <int K>
  static VI srl(VI a) { return a >> K; }
  template <int K>
  static VI sll(VI a) { return a << K; }
};

// Four independent scalar lanes; the portable reference implementation.
struct Generic4 {
  struct VD { double l[4]; };
  struct VI { std::uint64_t l[4]; };
  static constexpr int width = 4;

  static VD load(const double* p) { return {p[0], p[1], p[2], p[3]}; }
  static void store(double* p, VD v) {
    p[0] = v.l[0]; p[1] = v.l[1]; p[2] = v.l[2]; p[3] = v.l[3];
  }
  static VD set1(double x) { return {x, x, x, x}; }
  static VI set1i(std::uint64_t x) { return {x, x, x, x}; }

#define MIMODOS_LANEWISE_D(name, expr)                      \
  static VD name {                                          \
    VD r;                                                   \
    for (int i = 0; i < 4; ++i) r.l[i] = (expr);            \
    return r;                                               \
  }
#define MIMODOS_LANEWISE_I(name, expr)                      \
  static VI name {                                          \
    VI r;                                                   \
    for (int i = 0; i < 4; ++i) r.l[i] = (expr);            \
    return r;                                               \
  }

  MIMODOS_LANEWISE_D(add(VD a, VD b), a.l[i] + b.l[i])
  MIMODOS_LANEWISE_D(sub(VD a, VD b), a.l[i] - b.l[i])
  MIMODOS_LANEWISE_D(mul(VD a, VD b), a.l[i] * b.l[i])
  MIMODOS_LANEWISE_D(div(VD a, VD b), a.l[i] / b.l[i])
  MIMODOS_LANEWISE_D(fmadd(VD a, VD b, VD c), std::fma(a.l[i], b.l[i], c.l[i]))
  MIMODOS_LANEWISE_D(neg(VD a), Scalar1::neg(a.l[i]))
  MIMODOS_LANEWISE_D(rint(VD a), std::nearbyint(a.l[i]))
  MIMODOS_LANEWISE_I(cmp_lt(VD a, VD b), a.l[i] < b.l[i] ? ~0ULL : 0ULL)
  MIMODOS_LANEWISE_D(select(VI m, VD a, VD b), Scalar1::select(m.l[i], a.l[i], b.l[i]))
  MIMODOS_LANEWISE_I(dtoi(VD a), std::bit_cast<std::uint64_t>(a.l[i]))
  MIMODOS_LANEWISE_D(itod(VI a), std::bit_cast<double>(a.l[i]))
  MIMODOS_LANEWISE_I(and_(VI a, VI b), a.l[i] & b.l[i])
  MIMODOS_LANEWISE_I(or_(VI a, VI b), a.l[i] | b.l[i])
  MIMODOS_LANEWISE_I(add64(VI a, VI b), a.l[i] + b.l[i])
  MIMODOS_LANEWISE_I(sub64(VI a, VI b), a.l[i] - b.l[i])

  template <int K>
  static VI srl(VI a) {
    VI r;
    for (int i = 0; i < 4; ++i) r.l[i] = a.l[i] >> K;
    return r;
  }
  template <int K>
  static VI sll(VI a) {
    VI r;
    for (int i = 0; i < 4; ++i) r.l[i] = a.l[i] << K;
    return r;
  }

#undef MIMODOS_LANEWISE_D
#undef MIMODOS_LANEWISE_I
};

#if defined(__AVX2__) && defined(__FMA__)
struct Avx2 {
  using VD = __m256d;
  using VI = __m256i;
  static constexpr int width = 4;

  static VD load(const double* p) { return _mm256_loadu_pd(p); }
  static void store(double* p, VD v) { _mm256_storeu_pd(p, v); }
  static VD set1(double x) { return _mm256_set1_pd(x); }
  static VI set1i(std::uint64_t x) {
    return _mm256_set1_epi64x(static_cast<long long>(x));
  }
  static VD add(VD a, VD b) { return _mm256_add_pd(a, b); }
  static VD sub(VD a, VD b) { return _mm256_sub_pd(a, b); }
  static VD mul(VD a, VD b) { return _mm256_mul_pd(a, b); }
  static VD div(VD a, VD b) { return _mm256_div_pd(a, b); }
  static VD fmadd(VD a, VD b, VD c) { return _mm256_fmadd_pd(a, b, c); }
  static VD neg(VD a) { return _mm256_xor_pd(a, _mm256_set1_pd(-0.0)); }
  static VD rint(VD a) {
    return _mm256_round_pd(a, _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  }
  static VI cmp_lt(VD a, VD b) {
    return _mm256_castpd_si256(_mm256_cmp_pd(a, b, _CMP_LT_OQ));
  }
  static VD select(VI m, VD a, VD b) {
    return _mm256_blendv_pd(b, a, _mm256_castsi256_pd(m));
  }
  static VI dtoi(VD a) { return _mm256_castpd_si256(a); }
  static VD itod(VI a) { return _mm256_castsi256_pd(a); }
  static VI and_(VI a, VI b) { return _mm256_and_si256(a, b); }
  static VI or_(VI a, VI b) { return _mm256_or_si256(a, b); }
  static VI add64(VI a, VI b) { return _mm256_add_epi64(a, b); }
  static VI sub64(VI a, VI b) { return _mm256_sub_epi64(a, b); }
  template <int K>
  static VI srl(VI a) { return _mm256_srli_epi64(a, K); }
  template <int K>
  static VI sll(VI a) { return _mm256_slli_epi64(a, K); }
};
#endif  // __AVX2__ && __FMA__

#if defined(__aarch64__)
// Two 128-bit halves form the 4-wide logical vector.
struct Neon {
  struct VD { float64x2_t a, b; };
  struct VI { uint64x2_t a, b; };
  static constexpr int width = 4;

  static VD load(const double* p) { return {vld1q_f64(p), vld1q_f64(p + 2)}; }
  static void store(double* p, VD v) { vst1q_f64(p, v.a); vst1q_f64(p + 2, v.b); }
  static VD set1(double x) { return {vdupq_n_f64(x), vdupq_n_f64(x)}; }
  static VI set1i(std::uint64_t x) { return {vdupq_n_u64(x), vdupq_n_u64(x)}; }
  static VD add(VD x, VD y) { return {vaddq_f64(x.a, y.a), vaddq_f64(x.b, y.b)}; }
  static VD sub(VD x, VD y) { return {vsubq_f64(x.a, y.a), vsubq_f64(x.b, y.b)}; }
  static VD mul(VD x, VD y) { return {vmulq_f64(x.a, y.a), vmulq_f64(x.b, y.b)}; }
  static VD div(VD x, VD y) { return {vdivq_f64(x.a, y.a), vdivq_f64(x.b, y.b)}; }
  static VD fmadd(VD x, VD y, VD c) {
    return {vfmaq_f64(c.a, x.a, y.a), vfmaq_f64(c.b, x.b, y.b)};
  }
  static VD neg(VD x) { return {vnegq_f64(x.a), vnegq_f64(x.b)}; }
  static VD rint(VD x) { return {vrndnq_f64(x.a), vrndnq_f64(x.b)}; }
  static VI cmp_lt(VD x, VD y) { return {vcltq_f64(x.a, y.a), vcltq_f64(x.b, y.b)}; }
  static VD select(VI m, VD x, VD y) {
    return {vbslq_f64(m.a, x.a, y.a), vbslq_f64(m.b, x.b, y.b)};
  }
  static VI dtoi(VD x) {
    return {vreinterpretq_u64_f64(x.a), vreinterpretq_u64_f64(x.b)};
  }
  static VD itod(VI x) {
    return {vreinterpretq_f64_u64(x.a), vreinterpretq_f64_u64(x.b)};
  }
  static VI and_(VI x, VI y) { return {vandq_u64(x.a, y.a), vandq_u64(x.b, y.b)}; }
  static VI or_(VI x, VI y) { return {vorrq_u64(x.a, y.a), vorrq_u64(x.b, y.b)}; }
  static VI add64(VI x, VI y) { return {vaddq_u64(x.a, y.a), vaddq_u64(x.b, y.b)}; }
  static VI sub64(VI x, VI y) { return {vsubq_u64(x.a, y.a), vsubq_u64(x.b, y.b)}; }
  template <int K>
  static VI srl(VI x) { return {vshrq_n_u64(x.a, K), vshrq_n_u64(x.b, K)}; }
  template <int K>
  static VI sll(VI x) { return {vshlq_n_u64(x.a, K), vshlq_n_u64(x.b, K)}; }
};
#endif  // __aarch64__

}  // namespace mimodos::kern
