#include "mimodos/contention.hpp"

#include <cmath>
#include <string>

#include "mimodos/errors.hpp"

namespace mimodos {

namespace {

void check_probs(const std::vector<double>& probs) {
  if (probs.empty()) throw ConfigError("contention: no links in group");
  for (double p : probs) {
    if (!(p >= 0.0) || !(p <= 1.0)) {
      throw ConfigError("contention: probe probability " + std::to_string(p) +
                        " outside [0, 1]");
    }
  }
}

double symmetric_success(int k, double p) {
  return k * p * std::pow(1.0 - p, k - 1);
}

}  // namespace

double success_prob(const std::vector<double>& probs) {
  check_probs(probs);
  double total = 0.0;
  for (std::size_t l = 0; l < probs.size(); ++l) {
    double term = probs[l];
    for (std::size_t j = 0; j < probs.size(); ++j) {
      if (j != l) term *= 1.0 - probs[j];
    }
    total += term;
  }
  return total;
}

double calibrate_probs(int links, double target_ps) {
  if (links < 1) throw ConfigError("contention: need at least one link");
  if (!(target_ps > 0.0) || target_ps > 1.0) {
    throw ConfigError("contention: target success probability must lie in (0, 1]");
  }
  if (links == 1) return target_ps;
  const double peak = symmetric_success(links, 1.0 / links);
  if (target_ps > peak + 1e-12) {
    throw ConfigError("contention: target success probability " +
                      std::to_string(target_ps) + " exceeds the maximum " +
                      std::to_string(peak) + " achievable with " +
                      std::to_string(links) + " links");
  }
  double lo = 0.0, hi = 1.0 / links;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (symmetric_success(links, mid) < target_ps) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

MiniSlotDraw draw_mini_slot(const std::vector<double>& probs, RngStream& rng) {
  MiniSlotDraw out;
  for (std::size_t l = 0; l < probs.size(); ++l) {
    if (rng.bernoulli(probs[l])) {
      ++out.probes;
      out.winner = static_cast<int>(l);
    }
  }
  if (out.probes != 1) out.winner = -1;
  return out;
}

MetaSlotDraw draw_meta_slot(const std::vector<double>& probs_first,
                            const std::vector<double>& probs_second, RngStream& rng) {
  MetaSlotDraw out;
  const MiniSlotDraw first = draw_mini_slot(probs_first, rng);
  const MiniSlotDraw second = draw_mini_slot(probs_second, rng);
  out.winner_first = first.winner;
  out.winner_second = second.winner;
  const bool a = first.winner >= 0;
  const bool b = second.winner >= 0;
  if (a && b) {
    out.state = MetaSlotState::dual;
  } else if (a) {
    out.state = MetaSlotState::single_first;
  } else if (b) {
    out.state = MetaSlotState::single_second;
  } else {
    out.state = MetaSlotState::idle;
  }
  return out;
}

}  // namespace mimodos
