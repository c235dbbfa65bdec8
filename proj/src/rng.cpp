#include "mimodos/rng.hpp"

#include <cmath>

#include "mimodos/fastmath.hpp"

namespace mimodos {

std::pair<double, double> RngStream::normal_pair() {
  for (;;) {
    const double u = 2.0 * uniform01() - 1.0;
    const double v = 2.0 * uniform01() - 1.0;
    const double s = u * u + v * v;
    if (s > 0.0 && s < 1.0) {
      // s >= 2^-104, comfortably normal, so fm::log's domain contract holds
      const double f = std::sqrt(-2.0 * fm::log(s) / s);
      return {u * f, v * f};
    }
  }
}

double RngStream::exponential() { return -fm::log(uniform_pos()); }

}  // namespace mimodos
