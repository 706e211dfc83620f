#include <array>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>

#include "epon/ctmc.hpp"
#include "epon/errors.hpp"
#include "epon/scenario.hpp"

namespace epon {

namespace {

double relative_error(double value, double reference) {
  return std::abs(value - reference) / std::abs(reference);
}

std::string describe(const char* label, double worst, double bound) {
  char buffer[160];
  std::snprintf(buffer, sizeof buffer, "%s %.3e (bound %.1e)", label, worst, bound);
  return buffer;
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
}

CheckResult check_dimensioning() {
  const std::uint64_t w = solve_wmax_for_cycle(16, 1e9, 5e-6, 2e-3);
  const auto config = SystemConfig::homogeneous(16, 1e9, 5e-6, 1500, w);
  const double t_max = compute_max_cycle(config);
  const double bandwidth = compute_guaranteed_bandwidth(config, t_max)[0];
  const bool ok = w == 15000 && relative_error(bandwidth, 60e6) <= 1e-12 &&
                  relative_error(t_max, 2e-3) <= 1e-12;
  return {"dimensioning", ok,
          "W_MAX=" + std::to_string(w) + " bytes, Lambda_MIN=" + format_number(bandwidth) +
              " bps"};
}

CheckResult check_single_batch_reduction(const RootOptions& root) {
  std::mt19937_64 rng(20240601);
  double worst_root = 0.0;
  double worst_count = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double mu = uniform(rng, 1.0, 1e4);
    const double lambda = mu * uniform(rng, 1e-3, 0.99);
    const StationParams params{lambda, mu, 1};
    const double r0 = batch_root(params, root);
    const double rho = lambda / mu;
    worst_root = std::max(worst_root, std::abs(r0 - rho));
    worst_count =
        std::max(worst_count, relative_error(batch_metrics(params, root).expected_count,
                                             rho / (1.0 - rho)));
  }
  const bool ok = worst_root <= 1e-12 && worst_count <= 1e-10;
  return {"batch_k1_reduction", ok,
          describe("max |r0-rho|", worst_root, 1e-12) + "; " +
              describe("max rel E[N] error", worst_count, 1e-10)};
}

CheckResult check_ctmc_mm1() {
  double worst = 0.0;
  for (int step = 1; step <= 9; ++step) {
    const double rho = 0.1 * step;
    const std::size_t m =
        static_cast<std::size_t>(std::ceil(std::log(ctmc::kTailBound) / std::log(rho))) + 1;
    const double oracle = ctmc::mean(ctmc::mm1_distribution(rho, 1.0, m));
    worst = std::max(worst, relative_error(mm1_metrics({rho, 1.0, 1}).expected_count, oracle));
  }
  return {"ctmc_equivalence_mm1", worst <= 1e-6, describe("max rel error", worst, 1e-6)};
}

CheckResult check_ctmc_batch(const RootOptions& root) {
  double worst = 0.0;
  for (std::uint32_t k : {1u, 2u, 5u, 10u}) {
    for (int step = 1; step <= 9; ++step) {
      const double mu = 1.0;
      const double lambda = 0.1 * step * k * mu;
      const double oracle = ctmc::mean(ctmc::batch_distribution_auto(lambda, mu, k));
      const double closed = batch_metrics({lambda, mu, k}, root).expected_count;
      worst = std::max(worst, relative_error(closed, oracle));
    }
  }
  return {"ctmc_equivalence_batch", worst <= 1e-6, describe("max rel error", worst, 1e-6)};
}

CheckResult check_product_form(const RootOptions& root) {
  const auto config = SystemConfig::homogeneous(16, 1e9, 5e-6, 1500, 15000);
  const TrafficProfile profile({{1.0 / 3, 1.0 / 3, 1.0 / 3}}, {{0.5, 0.3, 0.2}}, 0.02);
  const AnalyticReport report = evaluate(config, profile, 0, root);
  constexpr std::uint64_t m = 12;
  double partial = 0.0;
  for (std::uint64_t a = 0; a <= m; ++a)
    for (std::uint64_t b = 0; b <= m; ++b)
      for (std::uint64_t c = 0; c <= m; ++c)
        for (std::uint64_t d = 0; d <= m; ++d) partial += joint_state_probability({a, b, c, d}, report);
  double expected = 1.0;
  for (double q : {report.class_stations[TrafficClass::EF].marginal_ratio,
                   report.class_stations[TrafficClass::AF].marginal_ratio,
                   report.class_stations[TrafficClass::BE].marginal_ratio,
                   report.stage_two.marginal_ratio})
    expected *= 1.0 - std::pow(q, static_cast<double>(m + 1));
  const double err = std::abs(partial - expected);
  return {"product_form_normalization", err <= 1e-12, describe("abs error", err, 1e-12)};
}

CheckResult check_delay_identity(const RootOptions& root) {
  std::mt19937_64 rng(77);
  const auto config = SystemConfig::homogeneous(16, 1e9, 5e-6, 1500, 15000);
  double worst = 0.0;
  int evaluated = 0;
  while (evaluated < 100) {
    const double a = uniform(rng, 0.05, 1.0), b = uniform(rng, 0.05, 1.0),
                 c = uniform(rng, 0.05, 1.0);
    const double x = uniform(rng, 0.05, 1.0), y = uniform(rng, 0.05, 1.0),
                 z = uniform(rng, 0.05, 1.0);
    const TrafficProfile profile({{a / (a + b + c), b / (a + b + c), c / (a + b + c)}},
                                 {{x / (x + y + z), y / (x + y + z), z / (x + y + z)}},
                                 uniform(rng, 1e-4, 0.05));
    const AnalyticReport report = evaluate(config, profile, 0, root);
    if (!report.stable) continue;
    ++evaluated;
    worst = std::max(worst, relative_error(two_term_delay(report), report.mean_delay));
    worst = std::max(worst, relative_error(report.mean_delay * report.throughput,
                                           report.expected_count));
  }
  return {"little_delay_identity", worst <= 1e-9, describe("max rel error", worst, 1e-9)};
}

sim::QueueingNetwork small_network() {
  const auto config = SystemConfig::homogeneous(16, 1e9, 5e-6, 1500, 15000);
  const TrafficProfile profile({{1.0 / 3, 1.0 / 3, 1.0 / 3}}, {{0.5, 0.3, 0.2}}, 0.02);
  return sim::network_from(evaluate(config, profile), 1500);
}

CheckResult check_simulated_little() {
  sim::SimConfig cfg;
  cfg.fidelity = sim::Fidelity::QueueingNetwork;
  cfg.duration = 200.0;
  cfg.warmup = 20.0;
  cfg.rng_seed = 11;
  const sim::SimReport report = sim::run_queueing_sim(small_network(), cfg);
  const double gap = sim::little_check(report, report.arrival_rate);
  return {"simulated_little_consistency", gap < 0.02, describe("discrepancy", gap, 0.02)};
}

bool same_report(const sim::SimReport& a, const sim::SimReport& b) {
  auto same = [](double x, double y) {
    return (std::isnan(x) && std::isnan(y)) || x == y;
  };
  for (TrafficClass c : kAllClasses) {
    if (!same(a.mean_delay[c], b.mean_delay[c]) || !same(a.delay_ci[c], b.delay_ci[c]) ||
        !same(a.mean_queue_bytes[c], b.mean_queue_bytes[c]))
      return false;
  }
  return same(a.mean_delay_total, b.mean_delay_total) && same(a.mean_in_system, b.mean_in_system) &&
         same(a.utilization, b.utilization) && same(a.mean_cycle, b.mean_cycle) &&
         a.generated == b.generated && a.delivered == b.delivered;
}

CheckResult check_determinism() {
  sim::SimConfig queueing;
  queueing.fidelity = sim::Fidelity::QueueingNetwork;
  queueing.duration = 20.0;
  queueing.warmup = 2.0;
  queueing.rng_seed = 5;
  const bool queueing_ok = same_report(sim::run_queueing_sim(small_network(), queueing),
                                       sim::run_queueing_sim(small_network(), queueing));

  const auto config = SystemConfig::homogeneous(16, 1e9, 5e-6, 1500, 15000);
  const TrafficProfile profile({{0.2, 0.3, 0.5}}, {{0.5, 0.3, 0.2}}, 0.03);
  sim::SimConfig protocol;
  protocol.duration = 0.5;
  protocol.warmup = 0.05;
  protocol.rng_seed = 5;
  const bool protocol_ok = same_report(sim::run_protocol_sim(config, profile, protocol),
                                       sim::run_protocol_sim(config, profile, protocol));
  return {"simulation_determinism", queueing_ok && protocol_ok,
          std::string("queueing ") + (queueing_ok ? "identical" : "differs") + ", protocol " +
              (protocol_ok ? "identical" : "differs")};
}

CheckResult check_saturated_cycle() {
  const auto config = SystemConfig::homogeneous(16, 1e9, 5e-6, 1500, 15000);
  const TrafficProfile profile({{1.0 / 3, 1.0 / 3, 1.0 / 3}}, {{0.5, 0.3, 0.2}}, 0.5);
  sim::SimConfig cfg;
  cfg.duration = 0.2;
  cfg.warmup = 0.02;
  const sim::SimReport report = sim::run_protocol_sim(config, profile, cfg);
  const double err = relative_error(report.mean_cycle, compute_max_cycle(config));
  return {"saturated_cycle", err <= 0.01, describe("rel error vs T_MAX", err, 0.01)};
}

}  // namespace

std::vector<CheckResult> validate(const ValidationOptions& options) {
  struct Check {
    const char* name;
    CheckResult (*run)(const RootOptions&);
  };
  const std::array<Check, 9> checks = {{
      {"dimensioning", [](const RootOptions&) { return check_dimensioning(); }},
      {"batch_k1_reduction", check_single_batch_reduction},
      {"ctmc_equivalence_mm1", [](const RootOptions&) { return check_ctmc_mm1(); }},
      {"ctmc_equivalence_batch", check_ctmc_batch},
      {"product_form_normalization", check_product_form},
      {"little_delay_identity", check_delay_identity},
      {"simulated_little_consistency", [](const RootOptions&) { return check_simulated_little(); }},
      {"simulation_determinism", [](const RootOptions&) { return check_determinism(); }},
      {"saturated_cycle", [](const RootOptions&) { return check_saturated_cycle(); }},
  }};
  std::vector<CheckResult> results;
  for (const Check& check : checks) {
    try {
      results.push_back(check.run(options.root));
    } catch (const std::exception& err) {
      results.push_back({check.name, false, std::string("raised: ") + err.what()});
    }
  }
  return results;
}

}  // namespace epon
