#include "mimodos/fastmath.hpp"

#include "mimodos/kernels/vmath.hpp"

namespace mimodos::fm {

using B = kern::Scalar1;

double exp(double x) { return vm::vexp<B>(x); }
double log(double x) { return vm::vlog<B>(x); }
double log1p(double x) { return vm::vlog1p_scaled<B>(x, 1.0); }
double log1p_scaled(double x, double s) { return vm::vlog1p_scaled<B>(x, s); }

}  // namespace mimodos::fm
