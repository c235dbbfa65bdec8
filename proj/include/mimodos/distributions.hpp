#pragma once

// Tabulated rate distributions for every protocol state, plus the closed
// forms behind them. Rates are nats/sec/Hz on a uniform grid starting at 0.
//
// CSIT distributions come from quadrature of the joint eigenvalue density
// over the region where the sum-log rate stays below r (the inner eigenvalue
// integral is closed-form, the outer one composite Gauss-Legendre); their
// densities use the exact derivative of that region integral. CSIR
// distributions are closed-form. Two-link sum distributions are discrete
// convolutions of the per-link density with itself.
//
// CSIR modes: "physical" evaluates the distribution implied by sampled
// receive vectors (MRC gain / whitened SINR — closed forms derived from the
// vector model); "paper" uses the printed formula set. The printed
// single-link CSIR CDF is not monotone for rho_s > 1, so paper mode falls
// back to the standard MRC form there and flags it via `paper_fallback`.

#include <functional>
#include <vector>

namespace mimodos {

enum class CsirMode { physical, paper };

struct QuadratureSpec {
  int grid_points = 2048;     // tabulation nodes (uniform, from 0)
  int inner_points = 512;     // min quadrature nodes per grid value; raised
                              // automatically with snr to resolve the
                              // integrand's boundary layer
  double upper_rate = 0.0;    // top of grid; 0 = auto-size from the tail
  double tail_target = 1e-9;  // auto-sizing: mass above the top <= this
  double lambda_max = 45.0;   // eigenvalue support cap in the quadrature
  void validate() const;      // throws ConfigError
};

struct RateDistribution {
  std::vector<double> grid;
  std::vector<double> cdf;
  std::vector<double> pdf;
  double step = 0.0;
  double tail_mass = 0.0;        // declared mass above grid.back()
  bool paper_fallback = false;   // paper-mode formula was replaced (see above)

  // Validates invariants (monotone cdf in [0,1], F(0)=0, top >= 1-1e-6,
  // pdf >= 0, per-cell pdf/cdf consistency to 1e-6) and precomputes suffix
  // integrals. Builders call this; hand-built test fixtures must too.
  void finalize();

  double max_rate() const { return grid.back(); }
  double interp_cdf(double x) const;
  // 1 - interp_cdf(x); beyond the grid this is at most tail_mass.
  double tail_prob(double x) const;
  // integral_x^inf r f(r) dr over the tabulated mass.
  double truncated_mean(double x) const;
  double mean() const { return suffix_rmass.empty() ? 0.0 : suffix_rmass[0]; }

  std::vector<double> suffix_rmass;  // set by finalize()
};

// ---- closed forms (r in nats; u = e^r - 1 where applicable) ----

// Unordered joint eigenvalue density of H^H H for 2x2 i.i.d. CN(0,1):
// (1/2) e^{-(l1+l2)} (l1-l2)^2 on the quadrant.
double joint_eigen_pdf(double l1, double l2);

double cdf_sl_csir_physical(double r, double rho_s);
double pdf_sl_csir_physical(double r, double rho_s);
// Printed single-link CSIR rate CDF; a valid CDF only for rho_s <= 1.
double cdf_sl_csir_paper_printed(double r, double rho_s);
bool sl_csir_paper_printed_valid(double rho_s);

double cdf_tl_csir_paper(double r, double rho_s, double rho_n);
double pdf_tl_csir_paper(double r, double rho_s, double rho_n);
double cdf_tl_csir_physical(double r, double rho_s, double rho_n);
double pdf_tl_csir_physical(double r, double rho_s, double rho_n);

// The same two families expressed on the combined SINR (already including
// rho_s), for direct comparison against sinr_oc samples.
double cdf_oc_sinr_paper(double sinr, double rho_s, double rho_n);
double cdf_oc_sinr_physical(double sinr, double rho_s, double rho_n);

// ---- builders ----

// Tabulates an arbitrary closed-form pair on [0, upper].
RateDistribution tabulate_distribution(const std::function<double(double)>& cdf,
                                       const std::function<double(double)>& pdf,
                                       double upper, int grid_points);

RateDistribution sl_csit_distribution(double rho_s, const QuadratureSpec& spec = {});
// Per-link two-link CSIT distribution: single-link form at rho_s/(1+rho_n).
RateDistribution tl_csit_link_distribution(double rho_s, double rho_n,
                                           const QuadratureSpec& spec = {});
RateDistribution tl_csit_sum_distribution(double rho_s, double rho_n,
                                          const QuadratureSpec& spec = {});
RateDistribution sl_csir_distribution(double rho_s, CsirMode mode,
                                      const QuadratureSpec& spec = {});
RateDistribution tl_csir_link_distribution(double rho_s, double rho_n, CsirMode mode,
                                           const QuadratureSpec& spec = {});
RateDistribution tl_csir_sum_distribution(double rho_s, double rho_n, CsirMode mode,
                                          const QuadratureSpec& spec = {});

// Distribution of the sum of two independent rates tabulated with the same
// grid step; trapezoid-weighted discrete convolution.
RateDistribution convolve_sum(const RateDistribution& a, const RateDistribution& b);

// ---- inverse-CDF rate samplers for paper mode (u01 uniform in [0,1)) ----
double sample_rate_sl_csir_paper(double u01, double rho_s);
double sample_rate_tl_csir_paper(double u01, double rho_s, double rho_n);

// Kolmogorov-Smirnov distance between the tabulated CDF and samples.
double ks_distance(const RateDistribution& dist, std::vector<double> samples);

}  // namespace mimodos
