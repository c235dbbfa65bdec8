#pragma once

// Probing-based channel contention. Links in a group probe independently in a
// mini-slot; the mini-slot is won by a link iff it is the only prober. A
// scheduling round uses one mini-slot per group (two groups -> a meta-slot of
// two mini-slots), and the round outcome is which groups produced a winner.

#include <vector>

#include "mimodos/rng.hpp"

namespace mimodos {

// Probability that exactly one link probes: sum_l p_l prod_{j!=l} (1 - p_j).
// Throws ConfigError unless every p is in [0, 1].
double success_prob(const std::vector<double>& probs);

// Symmetric per-link probe probability p such that the group success
// probability K p (1-p)^{K-1} equals target_ps, using the increasing branch
// p <= 1/K. Throws ConfigError if the target exceeds the achievable maximum
// (1 - 1/K)^{K-1} or is not in (0, 1].
double calibrate_probs(int links, double target_ps);

struct MiniSlotDraw {
  int winner = -1;  // sole probing link, or -1
  int probes = 0;   // number of links that probed
};

// One mini-slot; Bernoulli draws in link-index order (determinism contract).
MiniSlotDraw draw_mini_slot(const std::vector<double>& probs, RngStream& rng);

enum class MetaSlotState { idle = 0, single_first = 1, single_second = 2, dual = 3 };

struct MetaSlotDraw {
  MetaSlotState state = MetaSlotState::idle;
  int winner_first = -1;
  int winner_second = -1;
};

// One meta-slot: the first group's mini-slot is drawn before the second's.
MetaSlotDraw draw_meta_slot(const std::vector<double>& probs_first,
                            const std::vector<double>& probs_second, RngStream& rng);

}  // namespace mimodos
