#pragma once

// Batch kernels behind a runtime-selected backend. All backends produce
// bit-identical results (see vec.hpp), so selection is a pure speed choice.
// The backend can be forced programmatically (set_backend) or through the
// MIMODOS_KERNEL environment variable (generic|avx2|neon) read on first use.

#include <cstddef>
#include <vector>

namespace mimodos::kernels {

enum class Backend { generic = 0, avx2 = 1, neon = 2 };

const char* backend_name(Backend b);
std::vector<Backend> compiled_backends();
bool backend_available(Backend b);  // compiled in and usable on this CPU
Backend active_backend();
void set_backend(Backend b);  // throws ConfigError if unavailable
void reset_backend();         // return to auto-detection

// y[i] = e^{x[i]}
void exp_pos(const double* x, double* y, std::size_t n);
// y[i] = e^{-x[i]}
void exp_neg(const double* x, double* y, std::size_t n);
// y[i] = ln(1 + scale*x[i])
void log1p_scaled(const double* x, double* y, std::size_t n, double scale);
// sum_i a[i]*b[i], fixed 4-lane blocked accumulation order
double dot(const double* a, const double* b, std::size_t n);
// sum_i x[i], fixed 4-lane blocked accumulation order
double sum(const double* x, std::size_t n);

}  // namespace mimodos::kernels
