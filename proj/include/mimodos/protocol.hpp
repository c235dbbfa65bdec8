#pragma once

// Event-driven Monte Carlo of the three scheduling protocols. Time is
// normalized to the data-transmission unit: every contention round costs
// delta per mini-slot (two mini-slots for the two-group protocols, one for
// the single-group baseline), an accepted transmission costs one unit and
// earns its sum rate in nats.
//
// Determinism contract: contention consumes only contention_rng (one
// Bernoulli per link, index order, first group before second); channel state
// consumes only channel_rng, drawn solely in rounds whose contention produced
// a winner, in the order single winner / dual link 1 then link 2, and for
// receiver-side protocols in vector order desired-then-interferer. With the
// formula-driven channel mode, each link consumes exactly one uniform; under
// the exact-max rule that same uniform drives both the paired-rate and the
// solo-rate candidate (comonotone coupling), which mirrors how both rates
// grow with the underlying channel quality.

#include <cstdint>
#include <vector>

#include "mimodos/channel.hpp"
#include "mimodos/contention.hpp"
#include "mimodos/distributions.hpp"

namespace mimodos {

enum class ProtocolKind { tg_csit, tg_csir, sg_csit };

// Dual-state decision: approx_sum accepts iff the paired sum rate beats the
// threshold; exact_max also considers letting either winner transmit alone
// (interference-free) and accepts the best option iff it beats the threshold.
enum class DecisionRule { approx_sum, exact_max };

struct PolicySpec {
  double threshold = 0.0;
  DecisionRule rule = DecisionRule::approx_sum;
  CsirMode csir_mode = CsirMode::paper;  // receiver-side protocols only
};

struct SimConfig {
  LinkSnrConfig snr;
  double delta = 0.1;                      // mini-slot duration
  double target_ps = 0.36787944117144233;  // group success probability (1/e)
  int links_per_group = 4;
  std::uint64_t max_rounds = 0;  // 0: 200 per requested renewal plus 1e6
};

struct SimReport {
  std::uint64_t rounds = 0;
  std::uint64_t state_counts[4] = {0, 0, 0, 0};  // indexed by MetaSlotState
  std::uint64_t single_tx = 0;
  std::uint64_t dual_tx = 0;
  std::uint64_t renewals = 0;  // accepted transmissions
  double slot_cost = 0.0;      // contention time per round
  double reward_nats = 0.0;
  double total_time = 0.0;     // rounds * slot_cost + transmissions * 1
  double throughput = 0.0;     // reward_nats / total_time
  double ci_halfwidth = 0.0;   // 95% batch-means interval (batched runs)
  bool truncated = false;      // hit the round cap before the renewal target
};

SimReport run_protocol(ProtocolKind kind, const SimConfig& cfg, const PolicySpec& policy,
                       std::uint64_t renewals, RngStream& contention_rng,
                       RngStream& channel_rng);

// Twenty batches on substreams ("contention", b) / ("channel", b) of the
// master seed; pooled counts, batch-means 95% confidence halfwidth.
SimReport run_protocol_batched(ProtocolKind kind, const SimConfig& cfg,
                               const PolicySpec& policy, std::uint64_t renewals,
                               std::uint64_t master_seed);

struct SweepPoint {
  double threshold = 0.0;
  SimReport report;
};

// One batched run per threshold, each on its own master substream
// ("sweep-point", index), so results do not depend on evaluation order or on
// the number of worker threads.
std::vector<SweepPoint> sweep_threshold(ProtocolKind kind, const SimConfig& cfg,
                                        const PolicySpec& base_policy,
                                        const std::vector<double>& thresholds,
                                        std::uint64_t renewals,
                                        std::uint64_t master_seed, int threads = 1);

}  // namespace mimodos
