#pragma once

// 2x2 Rayleigh MIMO channel model. Entries of H are i.i.d. CN(0,1); the
// eigenvalues of H^H H come from the closed form for a 2x2 Hermitian matrix
// (trace/determinant), so no linear-algebra library is involved. Rates are in
// nats/sec/Hz throughout.

#include <array>
#include <complex>

#include "mimodos/rng.hpp"

namespace mimodos {

using cplx = std::complex<double>;

// Per-link SNR configuration: rho_s is the transmit SNR, rho_n the
// interference-to-noise ratio seen when both links are active.
struct LinkSnrConfig {
  double rho_s = 10.0;
  double rho_n = 1.0;
  void validate() const;  // throws ConfigError
};

struct ChannelRealization {
  std::array<cplx, 4> h;  // row-major 2x2 matrix
  double lambda1 = 0.0;   // larger eigenvalue of H^H H
  double lambda2 = 0.0;   // smaller eigenvalue
};

enum class RateKind { sl_csit, tl_csit, sl_csir, tl_csir };

struct RateSample {
  double value = 0.0;  // nats/sec/Hz
  RateKind kind = RateKind::sl_csit;
};

// Eigenvalues from trace/determinant of H^H H; clamps tiny negative
// discriminants from roundoff to zero.
ChannelRealization channel_from_matrix(const std::array<cplx, 4>& h);

// Draw order: h00, h01, h10, h11; each entry real-then-imaginary, scaled by
// sqrt(1/2) so E|h_ij|^2 = 1.
ChannelRealization sample_channel(RngStream& rng);

// Single-link CSIT rate: eigen-beamforming over both spatial channels,
// sum_m ln(1 + rho_s * lambda_m).
double rate_sl_csit(const ChannelRealization& ch, double rho_s);

// Two-link CSIT rate for one link: same form at the reduced effective SNR
// rho_s / (1 + rho_n).
double rate_tl_csit(const ChannelRealization& ch, double rho_s, double rho_n);

// Receive vector channel (2 antennas, 1 transmit stream), entries CN(0,1);
// draw order: v0 then v1, real-then-imaginary.
std::array<cplx, 2> sample_vector_channel(RngStream& rng);

// MRC combined power gain ||h||^2.
double gain_mrc(const std::array<cplx, 2>& h);

// Optimal-combining SINR against one rank-one interferer of power rho_n:
// rho_s * h^H (I + rho_n g g^H)^{-1} h, via Sherman-Morrison. Includes rho_s.
double sinr_oc(const std::array<cplx, 2>& desired, const std::array<cplx, 2>& interferer,
               const LinkSnrConfig& snr);

// ln(1 + sinr); for OC-combined links whose SINR already includes rho_s.
double rate_from_sinr(double sinr);

// Single-link CSIR rate ln(1 + rho_s * gain) for an MRC power gain.
double rate_sl_csir(double gain, double rho_s);

}  // namespace mimodos
