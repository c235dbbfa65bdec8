#include "mimodos/channel.hpp"

#include <cmath>

#include "mimodos/errors.hpp"
#include "mimodos/fastmath.hpp"

namespace mimodos {

void LinkSnrConfig::validate() const {
  if (!(rho_s > 0.0) || !std::isfinite(rho_s)) {
    throw ConfigError("rho_s must be positive and finite");
  }
  if (!(rho_n >= 0.0) || !std::isfinite(rho_n)) {
    throw ConfigError("rho_n must be nonnegative and finite");
  }
}

ChannelRealization channel_from_matrix(const std::array<cplx, 4>& h) {
  ChannelRealization ch;
  ch.h = h;
  const double tr = std::norm(h[0]) + std::norm(h[1]) + std::norm(h[2]) + std::norm(h[3]);
  const cplx det = h[0] * h[3] - h[1] * h[2];
  const double d = std::norm(det);
  double disc = tr * tr - 4.0 * d;
  if (disc < 0.0) disc = 0.0;  // roundoff on near-degenerate spectra
  const double s = std::sqrt(disc);
  ch.lambda1 = 0.5 * (tr + s);
  // Quotient form for the small root: 0.5*(tr - s) cancels catastrophically
  // for near-singular matrices, while d / lambda1 keeps both the trace and
  // the determinant identity accurate to a few ulps.
  ch.lambda2 = ch.lambda1 > 0.0 ? d / ch.lambda1 : 0.0;
  if (ch.lambda2 > ch.lambda1) ch.lambda2 = ch.lambda1;  // ulp-level clamp near degeneracy
  return ch;
}

ChannelRealization sample_channel(RngStream& rng) {
  constexpr double kHalf = 0.70710678118654752440;  // sqrt(1/2)
  std::array<cplx, 4> h;
  for (int i = 0; i < 4; ++i) {
    const auto [re, im] = rng.normal_pair();
    h[i] = cplx(kHalf * re, kHalf * im);
  }
  return channel_from_matrix(h);
}

double rate_sl_csit(const ChannelRealization& ch, double rho_s) {
  return fm::log1p_scaled(ch.lambda1, rho_s) + fm::log1p_scaled(ch.lambda2, rho_s);
}

double rate_tl_csit(const ChannelRealization& ch, double rho_s, double rho_n) {
  const double rho_eff = rho_s / (1.0 + rho_n);
  return fm::log1p_scaled(ch.lambda1, rho_eff) + fm::log1p_scaled(ch.lambda2, rho_eff);
}

std::array<cplx, 2> sample_vector_channel(RngStream& rng) {
  constexpr double kHalf = 0.70710678118654752440;
  std::array<cplx, 2> v;
  for (int i = 0; i < 2; ++i) {
    const auto [re, im] = rng.normal_pair();
    v[i] = cplx(kHalf * re, kHalf * im);
  }
  return v;
}

double gain_mrc(const std::array<cplx, 2>& h) { return std::norm(h[0]) + std::norm(h[1]); }

double sinr_oc(const std::array<cplx, 2>& desired, const std::array<cplx, 2>& interferer,
               const LinkSnrConfig& snr) {
  // h^H (I + rho_n g g^H)^{-1} h = ||h||^2 - rho_n |g^H h|^2 / (1 + rho_n ||g||^2)
  const double hh = gain_mrc(desired);
  const double gg = gain_mrc(interferer);
  const cplx gh = std::conj(interferer[0]) * desired[0] + std::conj(interferer[1]) * desired[1];
  const double cross = std::norm(gh);
  const double quad = hh - snr.rho_n * cross / (1.0 + snr.rho_n * gg);
  return snr.rho_s * (quad > 0.0 ? quad : 0.0);
}

double rate_from_sinr(double sinr) { return fm::log1p(sinr); }

double rate_sl_csir(double gain, double rho_s) { return fm::log1p_scaled(gain, rho_s); }

}  // namespace mimodos
