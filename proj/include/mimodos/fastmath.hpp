#pragma once

// Scalar entry points to the shared exp/log cores. A value computed here is
// bit-identical to the same value computed inside any batch kernel, which is
// what keeps one-at-a-time simulation code and batched analysis code in exact
// agreement. Domain contracts are those of vmath.hpp.

namespace mimodos::fm {

double exp(double x);
double log(double x);
double log1p(double x);                   // ln(1 + x)
double log1p_scaled(double x, double s);  // ln(1 + s*x)

}  // namespace mimodos::fm
