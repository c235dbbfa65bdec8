// Command-line front end for the scheduling toolkit. Five subcommands:
//
//   solve            threshold + throughput fixed point at each SNR
//   sweep-threshold  Monte Carlo throughput across a threshold grid
//   sweep-snr        solved threshold vs simulated throughput across SNRs
//   dump-dist        tabulated rate distribution (CDF/PDF) to CSV
//   verify           internal consistency checks (exit 1 on any failure)
//
// Configuration merge order: built-in defaults, then --config file, then any
// flag the user passed explicitly. Every command writes its CSV and a
// <out>.meta.json sidecar through the experiments layer.
//
// Exit codes: 0 success, 2 bad configuration, 3 solver failure, 4 I/O
// failure, 1 anything else (including verify finding a failed check).

#include <cstdint>
#include <cstdio>
#include <exception>
#include <string>

#include "CLI11.hpp"

#include "mimodos/errors.hpp"
#include "mimodos/experiments.hpp"
#include "mimodos/kernels/kernels.hpp"

namespace {

// Flag targets are kept apart from ExperimentConfig so that only flags the
// user actually passed override values loaded from --config.
struct FlagValues {
  std::string config;
  std::string protocol;
  std::string snr_db;
  double rho_n = 0.0;
  double delta = 0.0;
  double target_ps = 0.0;
  int links_per_group = 0;
  std::uint64_t renewals = 0;
  std::uint64_t seed = 0;
  std::string csir_mode;
  std::string decision_rule;
  std::string out;
  std::string thresholds;
  int threads = 0;
  std::string dist;
  std::string kernel = "auto";
};

void add_common_options(CLI::App* sub, FlagValues& v) {
  sub->add_option("--config", v.config, "key = value file applied before explicit flags");
  sub->add_option("--protocol", v.protocol, "tg-csit | tg-csir | sg-csit");
  sub->add_option("--snr-db", v.snr_db, "SNR list in dB: '10', '0,10,20', or 'lo:hi:step'");
  sub->add_option("--rho-n", v.rho_n, "interferer-to-noise power ratio (linear)");
  sub->add_option("--delta", v.delta, "mini-slot duration in data-transmission units");
  sub->add_option("--target-ps", v.target_ps, "per-group contention success probability");
  sub->add_option("--links-per-group", v.links_per_group, "contending links per group");
  sub->add_option("--renewals", v.renewals, "accepted transmissions per Monte Carlo run");
  sub->add_option("--seed", v.seed, "master seed; all streams derive from it");
  sub->add_option("--csir-mode", v.csir_mode, "receiver-side rate model: paper | physical");
  sub->add_option("--decision-rule", v.decision_rule, "dual-state rule: approx-sum | exact-max");
  sub->add_option("--out", v.out, "output CSV path (sidecar <out>.meta.json)");
  sub->add_option("--threads", v.threads, "worker threads for sweeps (results unchanged)");
  sub->add_option("--kernel", v.kernel, "batch-kernel backend: auto | generic | avx2 | neon");
}

void select_kernel(const std::string& name) {
  using mimodos::kernels::Backend;
  if (name == "auto") return;  // keep env/auto detection
  Backend b;
  if (name == "generic") {
    b = Backend::generic;
  } else if (name == "avx2") {
    b = Backend::avx2;
  } else if (name == "neon") {
    b = Backend::neon;
  } else {
    throw mimodos::ConfigError("unknown kernel backend '" + name +
                               "' (expected auto, generic, avx2, or neon)");
  }
  mimodos::kernels::set_backend(b);
}

// count() for an option the subcommand may not define at all.
std::size_t flag_count(const CLI::App& sub, const std::string& name) {
  const CLI::Option* opt = sub.get_option_no_throw(name);
  return opt ? opt->count() : 0;
}

mimodos::ExperimentConfig make_config(const CLI::App& sub, const FlagValues& v) {
  mimodos::ExperimentConfig cfg;
  if (flag_count(sub, "--config") > 0) mimodos::apply_config_file(cfg, v.config);
  if (flag_count(sub, "--protocol") > 0) cfg.protocol = v.protocol;
  if (flag_count(sub, "--snr-db") > 0) cfg.snr_db = mimodos::parse_value_list(v.snr_db);
  if (flag_count(sub, "--rho-n") > 0) cfg.rho_n = v.rho_n;
  if (flag_count(sub, "--delta") > 0) cfg.delta = v.delta;
  if (flag_count(sub, "--target-ps") > 0) cfg.target_ps = v.target_ps;
  if (flag_count(sub, "--links-per-group") > 0) cfg.links_per_group = v.links_per_group;
  if (flag_count(sub, "--renewals") > 0) cfg.renewals = v.renewals;
  if (flag_count(sub, "--seed") > 0) cfg.seed = v.seed;
  if (flag_count(sub, "--csir-mode") > 0) cfg.csir_mode = v.csir_mode;
  if (flag_count(sub, "--decision-rule") > 0) cfg.decision_rule = v.decision_rule;
  if (flag_count(sub, "--out") > 0) cfg.out = v.out;
  if (flag_count(sub, "--thresholds") > 0) {
    cfg.thresholds = mimodos::parse_value_list(v.thresholds);
  }
  if (flag_count(sub, "--threads") > 0) cfg.threads = v.threads;
  if (flag_count(sub, "--dist") > 0) cfg.dist = v.dist;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distributed opportunistic scheduling toolkit for 2x2 MIMO ad-hoc networks"};
  app.require_subcommand(1);
  FlagValues v;

  CLI::App* solve = app.add_subcommand(
      "solve", "Solve the optimal stopping threshold (= throughput) at each SNR");
  CLI::App* sweep_thr = app.add_subcommand(
      "sweep-threshold", "Simulate throughput across a threshold grid at one SNR");
  CLI::App* sweep_snr = app.add_subcommand(
      "sweep-snr", "Solve and simulate at each SNR; includes single-group baseline ratio");
  CLI::App* dump = app.add_subcommand(
      "dump-dist", "Write one tabulated rate distribution (rate, CDF, PDF) to CSV");
  CLI::App* verify = app.add_subcommand(
      "verify", "Run internal consistency checks and print one line per check");

  for (CLI::App* sub : {solve, sweep_thr, sweep_snr, dump, verify}) {
    add_common_options(sub, v);
  }
  sweep_thr->add_option("--thresholds", v.thresholds,
                        "explicit threshold grid ('a,b,c' or 'lo:hi:step'; default: "
                        "36 points around the solved threshold)");
  dump->add_option("--dist", v.dist,
                   "table selector: sl-csit | tl-csit-link | tl-csit-sum | sl-csir | "
                   "tl-csir-link | tl-csir-sum");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  CLI::App* sub = app.get_subcommands().front();
  try {
    select_kernel(v.kernel);
    const mimodos::ExperimentConfig cfg = make_config(*sub, v);
    const std::string name = sub->get_name();
    if (name == "solve") return mimodos::cmd_solve(cfg);
    if (name == "sweep-threshold") return mimodos::cmd_sweep_threshold(cfg);
    if (name == "sweep-snr") return mimodos::cmd_sweep_snr(cfg);
    if (name == "dump-dist") return mimodos::cmd_dump_dist(cfg);
    return mimodos::cmd_verify(cfg);
  } catch (const mimodos::ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const mimodos::SolverError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const mimodos::IoError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 4;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
