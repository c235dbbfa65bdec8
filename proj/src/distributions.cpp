#include "mimodos/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mimodos/errors.hpp"
#include "mimodos/fastmath.hpp"
#include "mimodos/kernels/kernels.hpp"

namespace mimodos {

namespace {

// 16-point Gauss-Legendre rule on [-1, 1] (positive half; mirrored in use).
constexpr int kGlHalf = 8;
constexpr double kGlNode[kGlHalf] = {
    0.0950125098376374401853193, 0.2816035507792589132304605,
    0.4580167776572273863424194, 0.6178762444026437484466718,
    0.7554044083550030338951012, 0.8656312023878317438804679,
    0.9445750230732325760779884, 0.9894009349916499325961542,
};
constexpr double kGlWeight[kGlHalf] = {
    0.1894506104550684962853967, 0.1826034150449235888667637,
    0.1691565193950025381893121, 0.1495959888165767320815017,
    0.1246289712555338720524763, 0.0951585116824927848099251,
    0.0622535239386478928628438, 0.0271524594117540948517806,
};

// Composite 16-point panels covering [0, length]; fills nodes and weights.
void composite_gl(double length, int panels, std::vector<double>& xs,
                  std::vector<double>& ws) {
  xs.resize(static_cast<std::size_t>(panels) * 16);
  ws.resize(xs.size());
  const double pw = length / panels;
  std::size_t k = 0;
  for (int p = 0; p < panels; ++p) {
    const double mid = (p + 0.5) * pw;
    for (int j = 0; j < kGlHalf; ++j) {
      const double off = 0.5 * pw * kGlNode[j];
      const double w = 0.5 * pw * kGlWeight[j];
      xs[k] = mid - off;
      ws[k] = w;
      ++k;
      xs[k] = mid + off;
      ws[k] = w;
      ++k;
    }
  }
}

double auto_upper(const std::function<double(double)>& cdf, double tail_target) {
  double hi = 1.0;
  int guard = 0;
  while (cdf(hi) < 1.0 - tail_target) {
    hi *= 2.0;
    if (++guard > 200) throw Error("auto_upper: cdf does not approach 1");
  }
  double lo = hi * 0.5;
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (cdf(mid) < 1.0 - tail_target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

}  // namespace

void QuadratureSpec::validate() const {
  if (grid_points < 16) throw ConfigError("grid_points must be at least 16");
  if (inner_points < 32) throw ConfigError("inner_points must be at least 32");
  if (upper_rate < 0.0) throw ConfigError("upper_rate must be nonnegative");
  if (!(tail_target > 0.0) || tail_target > 1e-3) {
    throw ConfigError("tail_target must lie in (0, 1e-3]");
  }
  if (!(lambda_max > 0.0)) throw ConfigError("lambda_max must be positive");
}

void RateDistribution::finalize() {
  const std::size_t n = grid.size();
  if (n < 16 || cdf.size() != n || pdf.size() != n) {
    throw Error("rate distribution: inconsistent array sizes");
  }
  if (grid[0] != 0.0) throw Error("rate distribution: grid must start at 0");
  step = grid[1] - grid[0];
  for (std::size_t k = 1; k < n; ++k) {
    if (std::abs(grid[k] - grid[k - 1] - step) > 1e-9 * step) {
      throw Error("rate distribution: grid must be uniform");
    }
  }
  if (std::abs(cdf[0]) > 1e-12) throw Error("rate distribution: F(0) must be 0");
  cdf[0] = 0.0;
  for (std::size_t k = 1; k < n; ++k) {
    if (cdf[k] < cdf[k - 1] - 1e-10) {
      throw Error("rate distribution: cdf decreases at node " + std::to_string(k));
    }
    if (cdf[k] < cdf[k - 1]) cdf[k] = cdf[k - 1];  // absorb roundoff wiggles
    if (cdf[k] > 1.0) {
      if (cdf[k] > 1.0 + 1e-9) {
        throw Error("rate distribution: cdf exceeds 1 at node " + std::to_string(k));
      }
      cdf[k] = 1.0;
    }
  }
  if (cdf[n - 1] < 1.0 - 1e-6) {
    throw Error("rate distribution: cdf tops out at " + std::to_string(cdf[n - 1]) +
                "; grid upper edge is too low");
  }
  for (std::size_t k = 0; k < n; ++k) {
    if (pdf[k] < 0.0) {
      if (pdf[k] < -1e-9) {
        throw Error("rate distribution: negative pdf at node " + std::to_string(k));
      }
      pdf[k] = 0.0;
    }
  }
  for (std::size_t k = 1; k < n; ++k) {
    const double cell = 0.5 * step * (pdf[k - 1] + pdf[k]);
    if (std::abs(cell - (cdf[k] - cdf[k - 1])) > 1e-6) {
      throw Error("rate distribution: pdf/cdf mismatch at node " + std::to_string(k));
    }
  }
  if (tail_mass < 1.0 - cdf[n - 1]) tail_mass = 1.0 - cdf[n - 1];

  suffix_rmass.assign(n, 0.0);
  for (std::size_t k = n - 1; k > 0; --k) {
    const double cell =
        0.5 * step * (grid[k - 1] * pdf[k - 1] + grid[k] * pdf[k]);
    suffix_rmass[k - 1] = suffix_rmass[k] + cell;
  }
}

double RateDistribution::interp_cdf(double x) const {
  if (x <= 0.0) return 0.0;
  const std::size_t n = grid.size();
  if (x >= grid[n - 1]) return cdf[n - 1];
  auto k = static_cast<std::size_t>(x / step);
  if (k >= n - 1) k = n - 2;
  if (x < grid[k]) --k;  // guard against x/step landing one cell high
  const double t = (x - grid[k]) / step;
  return cdf[k] + (cdf[k + 1] - cdf[k]) * t;
}

double RateDistribution::tail_prob(double x) const {
  const double t = 1.0 - interp_cdf(x);
  return t > 0.0 ? t : 0.0;
}

double RateDistribution::truncated_mean(double x) const {
  const std::size_t n = grid.size();
  if (x <= 0.0) return suffix_rmass[0];
  if (x >= grid[n - 1]) return 0.0;
  auto k = static_cast<std::size_t>(x / step);
  if (k >= n - 1) k = n - 2;
  if (x < grid[k]) --k;
  const double t = (x - grid[k]) / step;
  const double qk = grid[k] * pdf[k];
  const double qk1 = grid[k + 1] * pdf[k + 1];
  const double qx = qk + (qk1 - qk) * t;
  const double part = 0.5 * (grid[k + 1] - x) * (qx + qk1);
  return part + suffix_rmass[k + 1];
}

// ---- closed forms ----

double joint_eigen_pdf(double l1, double l2) {
  if (l1 < 0.0 || l2 < 0.0) return 0.0;
  const double d = l1 - l2;
  return 0.5 * fm::exp(-(l1 + l2)) * d * d;
}

double cdf_sl_csir_physical(double r, double rho_s) {
  if (r <= 0.0) return 0.0;
  const double g = std::expm1(r) / rho_s;
  return 1.0 - (1.0 + g) * fm::exp(-g);
}

double pdf_sl_csir_physical(double r, double rho_s) {
  if (r <= 0.0) return 0.0;
  const double er = fm::exp(r);
  const double g = (er - 1.0) / rho_s;
  return g * fm::exp(-g) * er / rho_s;
}

double cdf_sl_csir_paper_printed(double r, double rho_s) {
  if (r <= 0.0) return 0.0;
  const double u = std::expm1(r);
  return 1.0 - (1.0 + u / (2.0 * rho_s)) * fm::exp(-u / (2.0 * rho_s * rho_s));
}

bool sl_csir_paper_printed_valid(double rho_s) { return rho_s <= 1.0; }

namespace {

double pdf_sl_csir_paper_printed(double r, double rho_s) {
  const double er = fm::exp(r);
  const double u = er - 1.0;
  const double scale2 = 2.0 * rho_s * rho_s;
  return er * fm::exp(-u / scale2) *
         ((1.0 + u / (2.0 * rho_s)) / scale2 - 1.0 / (2.0 * rho_s));
}

// Tail of the whitened-SINR distribution marginalized over the interferer
// vector: conditioned on ||g||^2 = w, the SINR is rho_s*(Y + X/(1+rho_n*w))
// with X,Y ~ Exp(1); integrating w ~ Gamma(2,1) gives this closed form.
double oc_physical_tail_u(double u, double rho_n) {
  return fm::exp(-u) / rho_n * ((1.0 + rho_n) - 1.0 / (1.0 + rho_n * u));
}

double oc_physical_density_u(double u, double rho_n) {
  const double denom = 1.0 + rho_n * u;
  return fm::exp(-u) / rho_n *
         ((1.0 + rho_n) - 1.0 / denom - rho_n / (denom * denom));
}

constexpr double kRhoNTiny = 1e-14;

}  // namespace

double cdf_tl_csir_paper(double r, double rho_s, double rho_n) {
  if (r <= 0.0) return 0.0;
  if (rho_n < kRhoNTiny) return cdf_tl_csir_physical(r, rho_s, 0.0);
  const double u = std::expm1(r) / rho_s;
  const double a = 1.0 / (2.0 * rho_n);
  const double c = 1.0 + 2.0 * rho_n;
  return 1.0 - (1.0 + a) * fm::exp(-u) + a * fm::exp(-c * u);
}

double pdf_tl_csir_paper(double r, double rho_s, double rho_n) {
  if (r <= 0.0) return 0.0;
  if (rho_n < kRhoNTiny) return pdf_tl_csir_physical(r, rho_s, 0.0);
  const double er = fm::exp(r);
  const double u = (er - 1.0) / rho_s;
  const double a = 1.0 / (2.0 * rho_n);
  const double c = 1.0 + 2.0 * rho_n;
  return (1.0 + a) * (er / rho_s) * (fm::exp(-u) - fm::exp(-c * u));
}

double cdf_tl_csir_physical(double r, double rho_s, double rho_n) {
  if (r <= 0.0) return 0.0;
  const double u = std::expm1(r) / rho_s;
  if (rho_n < kRhoNTiny) return 1.0 - (1.0 + u) * fm::exp(-u);  // Gamma(2) limit
  return 1.0 - oc_physical_tail_u(u, rho_n);
}

double pdf_tl_csir_physical(double r, double rho_s, double rho_n) {
  if (r <= 0.0) return 0.0;
  const double er = fm::exp(r);
  const double u = (er - 1.0) / rho_s;
  if (rho_n < kRhoNTiny) return u * fm::exp(-u) * er / rho_s;
  return oc_physical_density_u(u, rho_n) * er / rho_s;
}

double cdf_oc_sinr_paper(double sinr, double rho_s, double rho_n) {
  if (sinr <= 0.0) return 0.0;
  if (rho_n < kRhoNTiny) return cdf_oc_sinr_physical(sinr, rho_s, rho_n);
  const double u = sinr / rho_s;
  const double a = 1.0 / (2.0 * rho_n);
  const double c = 1.0 + 2.0 * rho_n;
  return 1.0 - (1.0 + a) * fm::exp(-u) + a * fm::exp(-c * u);
}

double cdf_oc_sinr_physical(double sinr, double rho_s, double rho_n) {
  if (sinr <= 0.0) return 0.0;
  const double u = sinr / rho_s;
  if (rho_n < kRhoNTiny) return 1.0 - (1.0 + u) * fm::exp(-u);
  return 1.0 - oc_physical_tail_u(u, rho_n);
}

// ---- builders ----

RateDistribution tabulate_distribution(const std::function<double(double)>& cdf,
                                       const std::function<double(double)>& pdf,
                                       double upper, int grid_points) {
  if (!(upper > 0.0)) throw ConfigError("tabulate_distribution: upper must be positive");
  if (grid_points < 16) throw ConfigError("tabulate_distribution: need >= 16 nodes");
  RateDistribution d;
  const std::size_t n = static_cast<std::size_t>(grid_points);
  d.grid.resize(n);
  d.cdf.resize(n);
  d.pdf.resize(n);
  const double h = upper / static_cast<double>(n - 1);
  for (std::size_t k = 0; k < n; ++k) {
    const double r = static_cast<double>(k) * h;
    d.grid[k] = r;
    d.cdf[k] = cdf(r);
    d.pdf[k] = pdf(r);
  }
  d.grid[n - 1] = upper;
  d.finalize();
  return d;
}

namespace {

// Region quadrature for the single-link CSIT rate CDF/PDF at effective SNR
// rho: the sum-rate constraint ln(1+rho*l1) + ln(1+rho*l2) <= r becomes
// l2 <= b(r, l1) = (e^r/(1+rho*l1) - 1)/rho, the inner eigenvalue integral is
// closed-form, and the density integrand is the joint density swept along the
// constraint boundary times db/dr.
struct CsitQuadrature {
  double rho;
  double lambda_max;
  std::vector<double> xs, ws, bs, e1, e2, zc, zp;

  CsitQuadrature(double rho_, const QuadratureSpec& spec)
      : rho(rho_), lambda_max(spec.lambda_max) {
    // The e^{-b(x)} factor turns on over an x-interval of width about
    // lambda_max/rho, while panels split [0, L <= lambda_max] uniformly, so
    // resolving that layer needs a panel count that grows linearly with rho;
    // three panels per layer width keeps the per-node error near 1e-10.
    const int layer_panels = static_cast<int>(std::ceil(3.0 * rho));
    panels_ = std::max(std::max(2, spec.inner_points / 16), layer_panels);
  }

  // Fills cdf_out/pdf_out for rate r.
  void eval(double r, double* cdf_out, double* pdf_out) {
    if (r <= 0.0) {
      *cdf_out = 0.0;
      *pdf_out = 0.0;
      return;
    }
    const double A = fm::exp(r);
    const double L = std::min((A - 1.0) / rho, lambda_max);
    composite_gl(L, panels_, xs, ws);
    const std::size_t m = xs.size();
    bs.resize(m);
    e2.resize(m);
    zc.resize(m);
    zp.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
      const double denom = 1.0 + rho * xs[i];
      double b = (A / denom - 1.0) / rho;
      if (b < 0.0) b = 0.0;  // roundoff at the region boundary
      bs[i] = b;
    }
    e1.resize(m);
    kernels::exp_neg(xs.data(), e1.data(), m);
    kernels::exp_neg(bs.data(), e2.data(), m);
    for (std::size_t i = 0; i < m; ++i) {
      const double x = xs[i];
      const double b = bs[i];
      const double s0 = x * x - 2.0 * x + 2.0;
      const double xb = x - b;
      const double sb = xb * xb - 2.0 * xb + 2.0;
      zc[i] = 0.5 * e1[i] * (s0 - e2[i] * sb);
      // boundary density * db/dr, with db/dr = e^r / (rho * (1 + rho*x))
      zp[i] = 0.5 * e1[i] * e2[i] * xb * xb * A / (rho * (1.0 + rho * xs[i]));
    }
    *cdf_out = kernels::dot(ws.data(), zc.data(), m);
    *pdf_out = kernels::dot(ws.data(), zp.data(), m);
  }

 private:
  int panels_ = 32;
};

}  // namespace

RateDistribution sl_csit_distribution(double rho_s, const QuadratureSpec& spec) {
  spec.validate();
  if (!(rho_s > 0.0)) throw ConfigError("rho_s must be positive");
  const double upper =
      spec.upper_rate > 0.0 ? spec.upper_rate
                            : 2.0 * fm::log1p_scaled(spec.lambda_max, rho_s);
  RateDistribution d;
  const std::size_t n = static_cast<std::size_t>(spec.grid_points);
  d.grid.resize(n);
  d.cdf.resize(n);
  d.pdf.resize(n);
  const double h = upper / static_cast<double>(n - 1);
  CsitQuadrature quad(rho_s, spec);
  for (std::size_t k = 0; k < n; ++k) {
    d.grid[k] = static_cast<double>(k) * h;
    quad.eval(d.grid[k], &d.cdf[k], &d.pdf[k]);
  }
  d.grid[n - 1] = upper;
  d.finalize();
  return d;
}

RateDistribution tl_csit_link_distribution(double rho_s, double rho_n,
                                           const QuadratureSpec& spec) {
  if (!(rho_n >= 0.0)) throw ConfigError("rho_n must be nonnegative");
  return sl_csit_distribution(rho_s / (1.0 + rho_n), spec);
}

RateDistribution tl_csit_sum_distribution(double rho_s, double rho_n,
                                          const QuadratureSpec& spec) {
  const RateDistribution link = tl_csit_link_distribution(rho_s, rho_n, spec);
  return convolve_sum(link, link);
}

RateDistribution sl_csir_distribution(double rho_s, CsirMode mode,
                                      const QuadratureSpec& spec) {
  spec.validate();
  if (!(rho_s > 0.0)) throw ConfigError("rho_s must be positive");
  std::function<double(double)> F, f;
  bool fallback = false;
  if (mode == CsirMode::paper && sl_csir_paper_printed_valid(rho_s)) {
    F = [rho_s](double r) { return cdf_sl_csir_paper_printed(r, rho_s); };
    f = [rho_s](double r) { return pdf_sl_csir_paper_printed(r, rho_s); };
  } else {
    fallback = (mode == CsirMode::paper);
    F = [rho_s](double r) { return cdf_sl_csir_physical(r, rho_s); };
    f = [rho_s](double r) { return pdf_sl_csir_physical(r, rho_s); };
  }
  const double upper =
      spec.upper_rate > 0.0 ? spec.upper_rate : auto_upper(F, spec.tail_target);
  RateDistribution d = tabulate_distribution(F, f, upper, spec.grid_points);
  d.paper_fallback = fallback;
  return d;
}

RateDistribution tl_csir_link_distribution(double rho_s, double rho_n, CsirMode mode,
                                           const QuadratureSpec& spec) {
  spec.validate();
  if (!(rho_s > 0.0)) throw ConfigError("rho_s must be positive");
  if (!(rho_n >= 0.0)) throw ConfigError("rho_n must be nonnegative");
  std::function<double(double)> F, f;
  if (mode == CsirMode::paper) {
    F = [=](double r) { return cdf_tl_csir_paper(r, rho_s, rho_n); };
    f = [=](double r) { return pdf_tl_csir_paper(r, rho_s, rho_n); };
  } else {
    F = [=](double r) { return cdf_tl_csir_physical(r, rho_s, rho_n); };
    f = [=](double r) { return pdf_tl_csir_physical(r, rho_s, rho_n); };
  }
  const double upper =
      spec.upper_rate > 0.0 ? spec.upper_rate : auto_upper(F, spec.tail_target);
  return tabulate_distribution(F, f, upper, spec.grid_points);
}

RateDistribution tl_csir_sum_distribution(double rho_s, double rho_n, CsirMode mode,
                                          const QuadratureSpec& spec) {
  const RateDistribution link = tl_csir_link_distribution(rho_s, rho_n, mode, spec);
  return convolve_sum(link, link);
}

RateDistribution convolve_sum(const RateDistribution& a, const RateDistribution& b) {
  if (a.grid.empty() || b.grid.empty()) throw Error("convolve_sum: empty input");
  const double h = a.step;
  if (std::abs(b.step - h) > 1e-12 * h) {
    throw Error("convolve_sum: grid steps differ");
  }
  const std::size_t na = a.pdf.size();
  const std::size_t nb = b.pdf.size();
  const std::size_t m = na + nb - 1;

  std::vector<double> brev(nb);
  for (std::size_t i = 0; i < nb; ++i) brev[i] = b.pdf[nb - 1 - i];

  RateDistribution d;
  d.grid.resize(m);
  d.pdf.resize(m);
  d.cdf.resize(m);
  for (std::size_t k = 0; k < m; ++k) {
    d.grid[k] = static_cast<double>(k) * h;
    const std::size_t j0 = k >= nb ? k - (nb - 1) : 0;
    const std::size_t j1 = std::min(na - 1, k);
    const std::size_t len = j1 - j0 + 1;
    double s = kernels::dot(a.pdf.data() + j0, brev.data() + (nb - 1 - k + j0), len);
    s -= 0.5 * (a.pdf[j0] * b.pdf[k - j0] + a.pdf[j1] * b.pdf[k - j1]);
    if (len >= 2) {
      // Euler-Maclaurin endpoint correction for the diagonal trapezoid rule:
      // plain trapezoid drops (h^2/12) * d/dx[f(x)g(s-x)] at each end of the
      // diagonal, and when an ingredient density rises steeply from zero that
      // loss accumulates to ~(h^2/12)*slope of total mass -- enough to push a
      // low-snr sum table under the total-mass check. One-sided differences
      // estimate the endpoint derivatives; the h factors cancel against the
      // h*s scaling below.
      const std::size_t glo = k - j0;
      const std::size_t ghi = k - j1;
      const double end_lo = (a.pdf[j0 + 1] - a.pdf[j0]) * b.pdf[glo] -
                            a.pdf[j0] * (b.pdf[glo] - b.pdf[glo - 1]);
      const double end_hi = (a.pdf[j1] - a.pdf[j1 - 1]) * b.pdf[ghi] -
                            a.pdf[j1] * (b.pdf[ghi + 1] - b.pdf[ghi]);
      s += (end_lo - end_hi) / 12.0;
    }
    d.pdf[k] = s > 0.0 ? h * s : 0.0;
  }
  d.cdf[0] = 0.0;
  for (std::size_t k = 1; k < m; ++k) {
    d.cdf[k] = d.cdf[k - 1] + 0.5 * h * (d.pdf[k - 1] + d.pdf[k]);
  }
  d.tail_mass = a.tail_mass + b.tail_mass;
  d.finalize();
  return d;
}

// ---- samplers ----

namespace {

// Inverts a monotone CDF with safeguarded Newton; deterministic in (p, F, f).
double invert_cdf(double p, const std::function<double(double)>& F,
                  const std::function<double(double)>& f) {
  if (p <= 0.0) return 0.0;
  if (p >= 1.0) throw Error("invert_cdf: p must lie in [0, 1)");
  double hi = 1.0;
  int guard = 0;
  while (F(hi) <= p) {
    hi *= 2.0;
    if (++guard > 200) throw Error("invert_cdf: cdf does not reach p");
  }
  double lo = 0.0;
  double x = 0.5 * hi;
  for (int i = 0; i < 80; ++i) {
    const double err = F(x) - p;
    if (err < 0.0) {
      lo = x;
    } else {
      hi = x;
    }
    if (hi - lo <= 1e-13 * (1.0 + hi)) break;
    const double dens = f(x);
    double next = 0.0;
    bool ok = false;
    if (dens > 0.0) {
      next = x - err / dens;
      ok = next > lo && next < hi;
    }
    x = ok ? next : 0.5 * (lo + hi);
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double sample_rate_sl_csir_paper(double u01, double rho_s) {
  if (sl_csir_paper_printed_valid(rho_s)) {
    return invert_cdf(
        u01, [rho_s](double r) { return cdf_sl_csir_paper_printed(r, rho_s); },
        [rho_s](double r) { return pdf_sl_csir_paper_printed(r, rho_s); });
  }
  return invert_cdf(
      u01, [rho_s](double r) { return cdf_sl_csir_physical(r, rho_s); },
      [rho_s](double r) { return pdf_sl_csir_physical(r, rho_s); });
}

double sample_rate_tl_csir_paper(double u01, double rho_s, double rho_n) {
  return invert_cdf(
      u01, [=](double r) { return cdf_tl_csir_paper(r, rho_s, rho_n); },
      [=](double r) { return pdf_tl_csir_paper(r, rho_s, rho_n); });
}

double ks_distance(const RateDistribution& dist, std::vector<double> samples) {
  if (samples.empty()) throw Error("ks_distance: no samples");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double ks = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double F = dist.interp_cdf(samples[i]);
    ks = std::max(ks, std::abs(F - static_cast<double>(i) / n));
    ks = std::max(ks, std::abs(F - static_cast<double>(i + 1) / n));
  }
  return ks;
}

}  // namespace mimodos
