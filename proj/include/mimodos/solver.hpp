#pragma once

// Optimal stopping threshold for renewal-reward scheduling. A contention
// round costs slot_cost; with probability weight_i it offers a transmission
// whose sum rate follows dist_i and lasts one normalized data unit. Under a
// threshold rule (transmit iff the offered rate exceeds x), the long-run
// throughput of threshold x after the round is
//
//   Phi(x) = sum_i w_i E[R_i ; R_i > x] / (slot_cost + sum_i w_i P(R_i > x))
//
// and the optimal threshold is the fixed point x_max = Phi(x_max), which also
// equals the optimal throughput itself.

#include <vector>

#include "mimodos/distributions.hpp"

namespace mimodos {

struct RewardTerm {
  double weight = 0.0;                      // probability the round offers this state
  const RateDistribution* dist = nullptr;   // sum-rate distribution of the state
};

struct StoppingProblem {
  std::vector<RewardTerm> terms;
  double slot_cost = 0.0;  // contention time per round, in data-unit time

  void validate() const;           // throws ConfigError
  double return_map(double x) const;  // Phi(x)
};

struct ThresholdSolution {
  double x_max = 0.0;
  double residual = 0.0;  // Phi(x_max) - x_max at the returned point
  int iterations = 0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
};

// Bisection on Phi(x) - x over [0, max rate support]. Throws SolverError if
// the return map has no positive part (no state offers positive reward).
ThresholdSolution solve_threshold(const StoppingProblem& problem, double tol = 1e-10);

// Round layouts for the three protocols, all sharing one group success
// probability ps. Two-group rounds cost two mini-slots and offer either one
// single-link state (probability 2 ps (1-ps), per-link sum-rate dist_sl) or
// the dual state (ps^2, two-link sum-rate dist_tl_sum); single-group rounds
// cost one mini-slot and offer dist_sl with probability ps.
StoppingProblem two_group_problem(double ps, double delta,
                                  const RateDistribution* dist_sl,
                                  const RateDistribution* dist_tl_sum);
StoppingProblem single_group_problem(double ps, double delta,
                                     const RateDistribution* dist_sl);

}  // namespace mimodos
