#include "mimodos/kernels/kernels.hpp"

#include <cstdlib>
#include <string>

#include "kernels_impl.hpp"
#include "mimodos/errors.hpp"

namespace mimodos::kernels {

namespace {

const KernelTable kGenericTable = make_kernel_table<kern::Generic4>();

bool cpu_supports(Backend b) {
  switch (b) {
    case Backend::generic:
      return true;
    case Backend::avx2:
#if MIMODOS_HAVE_AVX2 && defined(__x86_64__)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Backend::neon:
#if MIMODOS_HAVE_NEON && defined(__aarch64__)
      return true;
#else
      return false;
#endif
  }
  return false;
}

Backend parse_backend(const std::string& name) {
  if (name == "generic") return Backend::generic;
  if (name == "avx2") return Backend::avx2;
  if (name == "neon") return Backend::neon;
  throw ConfigError("unknown kernel backend '" + name +
                    "' (expected generic, avx2, or neon)");
}

Backend detect() {
  if (const char* env = std::getenv("MIMODOS_KERNEL")) {
    Backend b = parse_backend(env);
    if (!backend_available(b)) {
      throw ConfigError(std::string("MIMODOS_KERNEL=") + env +
                        " requested but that backend is not available here");
    }
    return b;
  }
  if (backend_available(Backend::avx2)) return Backend::avx2;
  if (backend_available(Backend::neon)) return Backend::neon;
  return Backend::generic;
}

struct State {
  Backend backend;
  const KernelTable* table;
  State() : backend(detect()), table(table_for(backend)) {}

  static const KernelTable* table_for(Backend b);
};

State& state() {
  static State s;
  return s;
}

}  // namespace

#if MIMODOS_HAVE_AVX2
const KernelTable* avx2_kernel_table();  // kernels_avx2.cpp
#endif
#if MIMODOS_HAVE_NEON
const KernelTable* neon_kernel_table();  // kernels_neon.cpp
#endif

const KernelTable* State::table_for(Backend b) {
  switch (b) {
    case Backend::generic:
      return &kGenericTable;
    case Backend::avx2:
#if MIMODOS_HAVE_AVX2
      return avx2_kernel_table();
#else
      break;
#endif
    case Backend::neon:
#if MIMODOS_HAVE_NEON
      return neon_kernel_table();
#else
      break;
#endif
  }
  return &kGenericTable;
}

const char* backend_name(Backend b) {
  switch (b) {
    case Backend::generic:
      return "generic";
    case Backend::avx2:
      return "avx2";
    case Backend::neon:
      return "neon";
  }
  return "?";
}

std::vector<Backend> compiled_backends() {
  std::vector<Backend> v{Backend::generic};
#if MIMODOS_HAVE_AVX2
  v.push_back(Backend::avx2);
#endif
#if MIMODOS_HAVE_NEON
  v.push_back(Backend::neon);
#endif
  return v;
}

bool backend_available(Backend b) { return cpu_supports(b); }

Backend active_backend() { return state().backend; }

void set_backend(Backend b) {
  if (!backend_available(b)) {
    throw ConfigError(std::string("kernel backend '") + backend_name(b) +
                      "' is not available on this machine");
  }
  state().backend = b;
  state().table = State::table_for(b);
}

void reset_backend() {
  state().backend = detect();
  state().table = State::table_for(state().backend);
}

void exp_pos(const double* x, double* y, std::size_t n) {
  state().table->exp_pos(x, y, n);
}
void exp_neg(const double* x, double* y, std::size_t n) {
  state().table->exp_neg(x, y, n);
}
void log1p_scaled(const double* x, double* y, std::size_t n, double scale) {
  state().table->log1p_scaled(x, y, n, scale);
}
double dot(const double* a, const double* b, std::size_t n) {
  return state().table->dot(a, b, n);
}
double sum(const double* x, std::size_t n) { return state().table->sum(x, n); }

}  // namespace mimodos::kernels
