#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "epon/analytic.hpp"
#include "epon/simulation.hpp"
#include "epon/system_config.hpp"
#include "epon/traffic.hpp"

namespace epon {

struct Scenario {
  SystemConfig system;
  TrafficProfile traffic;  // load field is overwritten per grid point
  sim::SimConfig sim;
  double load_start = 0.05;
  double load_end = 0.4;
  std::size_t load_steps = 8;

  std::vector<double> load_grid() const;
};

/// Parses line-oriented `key = value` text. Several pairs may share a line
/// when separated by whitespace; `#` starts a comment. Throws ParseError.
Scenario parse_scenario(std::string_view text);

/// Defaults used for every missing key.
Scenario default_scenario();

struct SweepRow {
  double load = 0.0;
  double lambda = 0.0;
  AnalyticReport analytic;
  std::optional<sim::SimReport> simulation;
};

/// Rows ordered by load. Simulated points use seed + point index and run
/// concurrently.
std::vector<SweepRow> run_sweep(const Scenario& scenario, bool with_simulation);

inline constexpr std::string_view kSweepHeader =
    "load,lambda_pps,rho_ef,rho_af,rho_be,rho_stage2,stable,r0,en_ef_pkts,en_af_pkts,"
    "en_be_pkts,en_stage2_pkts,en_total_bytes,et_ef_s,et_af_s,et_be_s,et_total_s,"
    "sim_et_total_s,sim_ci_s";

/// Throws EmptyOutput for an empty sequence.
std::string emit_csv(const std::vector<SweepRow>& rows, std::uint32_t frame_length);

/// One row per simulated grid point, for the `simulate` subcommand.
std::string emit_simulation_csv(const std::vector<SweepRow>& rows);

/// Shortest round-trip decimal form, '.' separator; empty for non-finite values.
std::string format_number(double value);

struct ValidationOptions {
  RootOptions root;  // lets a caller perturb the root tolerance
};

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Runs the oracle suites; the run passes iff every check passes.
std::vector<CheckResult> validate(const ValidationOptions& options = {});

}  // namespace epon
