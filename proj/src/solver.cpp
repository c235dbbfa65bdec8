#include "mimodos/solver.hpp"

#include <algorithm>
#include <cmath>

#include "mimodos/errors.hpp"

namespace mimodos {

void StoppingProblem::validate() const {
  if (terms.empty()) throw ConfigError("stopping problem: no reward terms");
  double total_weight = 0.0;
  for (const auto& t : terms) {
    if (!(t.weight >= 0.0)) throw ConfigError("stopping problem: negative weight");
    if (t.dist == nullptr) throw ConfigError("stopping problem: missing distribution");
    if (t.dist->grid.empty() || t.dist->suffix_rmass.empty()) {
      throw ConfigError("stopping problem: distribution was not finalized");
    }
    total_weight += t.weight;
  }
  if (total_weight > 1.0 + 1e-9) {
    throw ConfigError("stopping problem: state weights exceed 1");
  }
  if (!(slot_cost > 0.0)) throw ConfigError("stopping problem: slot cost must be positive");
}

double StoppingProblem::return_map(double x) const {
  double num = 0.0;
  double den = slot_cost;
  for (const auto& t : terms) {
    num += t.weight * t.dist->truncated_mean(x);
    den += t.weight * t.dist->tail_prob(x);
  }
  return num / den;
}

ThresholdSolution solve_threshold(const StoppingProblem& problem, double tol) {
  problem.validate();
  if (!(tol > 0.0)) throw ConfigError("solve_threshold: tolerance must be positive");

  double hi = 0.0;
  for (const auto& t : problem.terms) {
    if (t.weight > 0.0) hi = std::max(hi, t.dist->max_rate());
  }
  if (problem.return_map(0.0) <= 0.0) {
    throw SolverError("solve_threshold: return map is not positive at zero");
  }

  // g(x) = Phi(x) - x is positive at 0 and negative beyond the rate support.
  ThresholdSolution sol;
  double lo = 0.0;
  int it = 0;
  while (hi - lo > tol && it < 200) {
    const double mid = 0.5 * (lo + hi);
    if (problem.return_map(mid) - mid > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
    ++it;
  }
  sol.x_max = 0.5 * (lo + hi);
  sol.residual = problem.return_map(sol.x_max) - sol.x_max;
  sol.iterations = it;
  sol.bracket_lo = lo;
  sol.bracket_hi = hi;
  return sol;
}

StoppingProblem two_group_problem(double ps, double delta,
                                  const RateDistribution* dist_sl,
                                  const RateDistribution* dist_tl_sum) {
  if (!(ps > 0.0) || ps > 1.0) throw ConfigError("two_group_problem: ps outside (0, 1]");
  StoppingProblem p;
  p.terms.push_back({2.0 * ps * (1.0 - ps), dist_sl});
  p.terms.push_back({ps * ps, dist_tl_sum});
  p.slot_cost = 2.0 * delta;
  return p;
}

StoppingProblem single_group_problem(double ps, double delta,
                                     const RateDistribution* dist_sl) {
  if (!(ps > 0.0) || ps > 1.0) throw ConfigError("single_group_problem: ps outside (0, 1]");
  StoppingProblem p;
  p.terms.push_back({ps, dist_sl});
  p.slot_cost = delta;
  return p;
}

}  // namespace mimodos
