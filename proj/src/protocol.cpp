#include "mimodos/protocol.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>

#include "mimodos/errors.hpp"

namespace mimodos {

namespace {

struct Offer {
  double value = 0.0;  // sum rate of the best admissible option
  bool dual = false;   // best option transmits both links
};

// Rates offered by the dual state, per protocol flavor. Channel draws follow
// the documented order so equal seeds replay identical trajectories.
Offer dual_offer(ProtocolKind kind, const SimConfig& cfg, const PolicySpec& policy,
                 RngStream& channel_rng) {
  const double rho_s = cfg.snr.rho_s;
  double r_tl_1 = 0.0, r_tl_2 = 0.0, r_sl_1 = 0.0, r_sl_2 = 0.0;
  if (kind == ProtocolKind::tg_csit) {
    const auto ch1 = sample_channel(channel_rng);
    const auto ch2 = sample_channel(channel_rng);
    r_tl_1 = rate_tl_csit(ch1, rho_s, cfg.snr.rho_n);
    r_tl_2 = rate_tl_csit(ch2, rho_s, cfg.snr.rho_n);
    if (policy.rule == DecisionRule::exact_max) {
      r_sl_1 = rate_sl_csit(ch1, rho_s);
      r_sl_2 = rate_sl_csit(ch2, rho_s);
    }
  } else if (policy.csir_mode == CsirMode::physical) {
    const auto h1 = sample_vector_channel(channel_rng);
    const auto g1 = sample_vector_channel(channel_rng);
    const auto h2 = sample_vector_channel(channel_rng);
    const auto g2 = sample_vector_channel(channel_rng);
    r_tl_1 = rate_from_sinr(sinr_oc(h1, g1, cfg.snr));
    r_tl_2 = rate_from_sinr(sinr_oc(h2, g2, cfg.snr));
    if (policy.rule == DecisionRule::exact_max) {
      r_sl_1 = rate_sl_csir(gain_mrc(h1), rho_s);
      r_sl_2 = rate_sl_csir(gain_mrc(h2), rho_s);
    }
  } else {
    const double u1 = channel_rng.uniform01();
    const double u2 = channel_rng.uniform01();
    r_tl_1 = sample_rate_tl_csir_paper(u1, rho_s, cfg.snr.rho_n);
    r_tl_2 = sample_rate_tl_csir_paper(u2, rho_s, cfg.snr.rho_n);
    if (policy.rule == DecisionRule::exact_max) {
      r_sl_1 = sample_rate_sl_csir_paper(u1, rho_s);
      r_sl_2 = sample_rate_sl_csir_paper(u2, rho_s);
    }
  }

  Offer offer;
  offer.value = r_tl_1 + r_tl_2;
  offer.dual = true;
  if (policy.rule == DecisionRule::exact_max) {
    const double solo = std::max(r_sl_1, r_sl_2);
    if (solo > offer.value) {
      offer.value = solo;
      offer.dual = false;
    }
  }
  return offer;
}

double single_offer(ProtocolKind kind, const SimConfig& cfg, const PolicySpec& policy,
                    RngStream& channel_rng) {
  const double rho_s = cfg.snr.rho_s;
  if (kind == ProtocolKind::tg_csir) {
    if (policy.csir_mode == CsirMode::physical) {
      return rate_sl_csir(gain_mrc(sample_vector_channel(channel_rng)), rho_s);
    }
    return sample_rate_sl_csir_paper(channel_rng.uniform01(), rho_s);
  }
  return rate_sl_csit(sample_channel(channel_rng), rho_s);
}

constexpr int kBatches = 20;

// two-sided 97.5% Student-t quantiles for 1..19 degrees of freedom
constexpr double kT975[19] = {12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365,
                              2.306,  2.262, 2.228, 2.201, 2.179, 2.160, 2.145,
                              2.131,  2.120, 2.110, 2.101, 2.093};

}  // namespace

SimReport run_protocol(ProtocolKind kind, const SimConfig& cfg, const PolicySpec& policy,
                       std::uint64_t renewals, RngStream& contention_rng,
                       RngStream& channel_rng) {
  cfg.snr.validate();
  if (!(cfg.delta > 0.0)) throw ConfigError("simulation: delta must be positive");
  if (renewals == 0) throw ConfigError("simulation: need at least one renewal");
  if (!(policy.threshold >= 0.0)) {
    throw ConfigError("simulation: threshold must be nonnegative");
  }

  const double p = calibrate_probs(cfg.links_per_group, cfg.target_ps);
  const std::vector<double> probs(static_cast<std::size_t>(cfg.links_per_group), p);
  const bool two_group = kind != ProtocolKind::sg_csit;

  SimReport rep;
  rep.slot_cost = two_group ? 2.0 * cfg.delta : cfg.delta;
  const std::uint64_t cap =
      cfg.max_rounds > 0 ? cfg.max_rounds : renewals * 200 + 1000000;

  while (rep.renewals < renewals && rep.rounds < cap) {
    ++rep.rounds;
    if (two_group) {
      const auto meta = draw_meta_slot(probs, probs, contention_rng);
      ++rep.state_counts[static_cast<int>(meta.state)];
      if (meta.state == MetaSlotState::idle) continue;
      if (meta.state == MetaSlotState::dual) {
        const Offer offer = dual_offer(kind, cfg, policy, channel_rng);
        if (offer.value > policy.threshold) {
          rep.reward_nats += offer.value;
          ++rep.renewals;
          if (offer.dual) {
            ++rep.dual_tx;
          } else {
            ++rep.single_tx;
          }
        }
      } else {
        const double r = single_offer(kind, cfg, policy, channel_rng);
        if (r > policy.threshold) {
          rep.reward_nats += r;
          ++rep.renewals;
          ++rep.single_tx;
        }
      }
    } else {
      const auto mini = draw_mini_slot(probs, contention_rng);
      const auto state =
          mini.winner >= 0 ? MetaSlotState::single_first : MetaSlotState::idle;
      ++rep.state_counts[static_cast<int>(state)];
      if (mini.winner < 0) continue;
      const double r = single_offer(kind, cfg, policy, channel_rng);
      if (r > policy.threshold) {
        rep.reward_nats += r;
        ++rep.renewals;
        ++rep.single_tx;
      }
    }
  }

  rep.truncated = rep.renewals < renewals;
  rep.total_time = static_cast<double>(rep.rounds) * rep.slot_cost +
                   static_cast<double>(rep.single_tx + rep.dual_tx);
  rep.throughput = rep.total_time > 0.0 ? rep.reward_nats / rep.total_time : 0.0;
  return rep;
}

SimReport run_protocol_batched(ProtocolKind kind, const SimConfig& cfg,
                               const PolicySpec& policy, std::uint64_t renewals,
                               std::uint64_t master_seed) {
  if (renewals == 0) throw ConfigError("simulation: need at least one renewal");
  const int batches =
      renewals < static_cast<std::uint64_t>(kBatches) ? static_cast<int>(renewals)
                                                      : kBatches;
  const std::uint64_t base = renewals / batches;
  const std::uint64_t rem = renewals % batches;

  SimReport pooled;
  std::vector<double> batch_tp;
  batch_tp.reserve(static_cast<std::size_t>(batches));
  for (int b = 0; b < batches; ++b) {
    const std::uint64_t n = base + (static_cast<std::uint64_t>(b) < rem ? 1 : 0);
    if (n == 0) continue;
    RngStream c_rng(master_seed, "contention", static_cast<std::uint64_t>(b));
    RngStream ch_rng(master_seed, "channel", static_cast<std::uint64_t>(b));
    const SimReport r = run_protocol(kind, cfg, policy, n, c_rng, ch_rng);
    pooled.rounds += r.rounds;
    for (int s = 0; s < 4; ++s) pooled.state_counts[s] += r.state_counts[s];
    pooled.single_tx += r.single_tx;
    pooled.dual_tx += r.dual_tx;
    pooled.renewals += r.renewals;
    pooled.reward_nats += r.reward_nats;
    pooled.slot_cost = r.slot_cost;
    pooled.truncated = pooled.truncated || r.truncated;
    batch_tp.push_back(r.throughput);
  }

  pooled.total_time = static_cast<double>(pooled.rounds) * pooled.slot_cost +
                      static_cast<double>(pooled.single_tx + pooled.dual_tx);
  pooled.throughput =
      pooled.total_time > 0.0 ? pooled.reward_nats / pooled.total_time : 0.0;

  const std::size_t nb = batch_tp.size();
  if (nb >= 2) {
    double mean = 0.0;
    for (double t : batch_tp) mean += t;
    mean /= static_cast<double>(nb);
    double ss = 0.0;
    for (double t : batch_tp) ss += (t - mean) * (t - mean);
    const double sd = std::sqrt(ss / static_cast<double>(nb - 1));
    pooled.ci_halfwidth =
        kT975[nb - 2] * sd / std::sqrt(static_cast<double>(nb));
  }
  return pooled;
}

std::vector<SweepPoint> sweep_threshold(ProtocolKind kind, const SimConfig& cfg,
                                        const PolicySpec& base_policy,
                                        const std::vector<double>& thresholds,
                                        std::uint64_t renewals,
                                        std::uint64_t master_seed, int threads) {
  if (thresholds.empty()) throw ConfigError("sweep: no thresholds given");
  std::vector<SweepPoint> out(thresholds.size());
  const int workers = std::max(
      1, std::min(threads, static_cast<int>(thresholds.size())));

  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_lock;
  auto work = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= thresholds.size()) return;
      try {
        PolicySpec policy = base_policy;
        policy.threshold = thresholds[i];
        const std::uint64_t point_master =
            derive_seed(master_seed, "sweep-point", static_cast<std::uint64_t>(i));
        out[i].threshold = thresholds[i];
        out[i].report = run_protocol_batched(kind, cfg, policy, renewals, point_master);
      } catch (...) {
        const std::lock_guard<std::mutex> hold(error_lock);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);
  return out;
}

}  // namespace mimodos
