#pragma once

// Experiment drivers behind the command-line tool. Every command reads one
// ExperimentConfig (defaults, then an optional key=value file, then explicit
// flag overrides applied by the CLI), writes one CSV plus a <out>.meta.json
// sidecar describing the run, and is bit-reproducible: equal configs produce
// byte-identical files on every platform and kernel backend.

#include <cstdint>
#include <string>
#include <vector>

#include "mimodos/distributions.hpp"
#include "mimodos/protocol.hpp"
#include "mimodos/solver.hpp"

namespace mimodos {

struct ExperimentConfig {
  std::string protocol = "tg-csit";  // tg-csit | tg-csir | sg-csit
  std::vector<double> snr_db = {10.0};
  double rho_n = 1.0;
  double delta = 0.1;
  double target_ps = 0.36787944117144233;  // 1/e
  int links_per_group = 4;
  std::uint64_t renewals = 100000;
  std::uint64_t seed = 12345;
  std::string csir_mode = "paper";           // paper | physical
  std::string decision_rule = "approx-sum";  // approx-sum | exact-max
  std::string out;                           // CSV path; sidecar <out>.meta.json
  std::vector<double> thresholds;            // explicit sweep grid (else auto)
  int threads = 1;
  std::string dist = "sl-csit";  // table selector for dump-dist

  void validate() const;  // throws ConfigError
  ProtocolKind protocol_kind() const;
  CsirMode csir() const;
  DecisionRule rule() const;
  SimConfig sim_config(double snr_db_value) const;
};

// "x", "a,b,c", or "lo:hi:step" (inclusive of hi up to rounding slack).
std::vector<double> parse_value_list(const std::string& spec);

// key = value lines; '#' starts a comment; unknown keys and malformed values
// are rejected with their line number.
void apply_config_file(ExperimentConfig& cfg, const std::string& path);

// Analytic tables driving the solver for one protocol at one operating point.
struct ProtocolTables {
  RateDistribution sl;      // single-link state sum-rate table
  RateDistribution tl_sum;  // dual state sum-rate table (two-group only)
  bool has_tl = false;
};

ProtocolTables build_tables(ProtocolKind kind, double rho_s, double rho_n,
                            CsirMode mode, const QuadratureSpec& spec = {});

ThresholdSolution solve_operating_point(ProtocolKind kind, const ProtocolTables& tables,
                                        double ps, double delta);

// Commands; each returns a process exit code (0 on success).
int cmd_solve(const ExperimentConfig& cfg);
int cmd_sweep_threshold(const ExperimentConfig& cfg);
int cmd_sweep_snr(const ExperimentConfig& cfg);
int cmd_dump_dist(const ExperimentConfig& cfg);
int cmd_verify(const ExperimentConfig& cfg);

}  // namespace mimodos
