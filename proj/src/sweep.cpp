#include <algorithm>
#include <charconv>
#include <cmath>
#include <future>
#include <thread>

#include "epon/errors.hpp"
#include "epon/scenario.hpp"

namespace epon {

namespace {

SweepRow evaluate_point(const Scenario& scenario, double load, std::size_t index,
                        bool with_simulation) {
  SweepRow row;
  row.load = load;
  const TrafficProfile profile = scenario.traffic.with_load(load);
  row.analytic = evaluate(scenario.system, profile);
  row.lambda = row.analytic.throughput;
  if (!with_simulation) return row;

  sim::SimConfig sim = scenario.sim;
  sim.rng_seed = scenario.sim.rng_seed + index;
  if (sim.fidelity == sim::Fidelity::Protocol) {
    row.simulation = sim::run_protocol_sim(scenario.system, profile, sim);
  } else if (row.analytic.stable) {
    row.simulation = sim::run_queueing_sim(
        sim::network_from(row.analytic, scenario.system.frame_length()), sim);
  }
  return row;
}

void append(std::string& out, double value) {
  out += format_number(value);
}

}  // namespace

std::string format_number(double value) {
  if (!std::isfinite(value)) return {};
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof buffer, value);
  return std::string(buffer, result.ptr);
}

std::vector<SweepRow> run_sweep(const Scenario& scenario, bool with_simulation) {
  const std::vector<double> grid = scenario.load_grid();
  std::vector<SweepRow> rows(grid.size());
  if (!with_simulation) {
    for (std::size_t i = 0; i < grid.size(); ++i)
      rows[i] = evaluate_point(scenario, grid[i], i, false);
    return rows;
  }

  const std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
  for (std::size_t first = 0; first < grid.size(); first += workers) {
    const std::size_t last = std::min(grid.size(), first + workers);
    std::vector<std::future<SweepRow>> pending;
    for (std::size_t i = first; i < last; ++i) {
      pending.push_back(std::async(std::launch::async, evaluate_point, std::cref(scenario),
                                   grid[i], i, true));
    }
    for (std::size_t i = first; i < last; ++i) rows[i] = pending[i - first].get();
  }
  return rows;
}

std::string emit_csv(const std::vector<SweepRow>& rows, std::uint32_t frame_length) {
  if (rows.empty()) throw EmptyOutput("no sweep rows to emit");
  std::string out(kSweepHeader);
  out += '\n';
  for (const SweepRow& row : rows) {
    const AnalyticReport& a = row.analytic;
    const double en_ef = a.class_stations[TrafficClass::EF].expected_count;
    const double en_af = a.class_stations[TrafficClass::AF].expected_count;
    const double en_be = a.class_stations[TrafficClass::BE].expected_count;
    const double en_two = a.stage_two.expected_count;

    append(out, row.load);
    out += ',';
    append(out, row.lambda);
    for (TrafficClass c : kAllClasses) {
      out += ',';
      append(out, a.class_stations[c].utilization);
    }
    out += ',';
    append(out, a.stage_two.utilization);
    out += a.stable ? ",1," : ",0,";
    append(out, a.stage_two.marginal_ratio);
    for (double en : {en_ef, en_af, en_be, en_two}) {
      out += ',';
      append(out, en);
    }
    out += ',';
    append(out, static_cast<double>(frame_length) * (en_ef + en_af + en_be + en_two));
    for (TrafficClass c : kAllClasses) {
      out += ',';
      append(out, a.class_delay[c]);
    }
    out += ',';
    append(out, a.mean_delay);
    out += ',';
    if (row.simulation) append(out, row.simulation->mean_delay_total);
    out += ',';
    if (row.simulation) append(out, row.simulation->delay_ci_total);
    out += '\n';
  }
  return out;
}

std::string emit_simulation_csv(const std::vector<SweepRow>& rows) {
  if (rows.empty()) throw EmptyOutput("no simulation rows to emit");
  std::string out =
      "load,lambda_pps,sim_et_ef_s,sim_ci_ef_s,sim_et_af_s,sim_ci_af_s,sim_et_be_s,sim_ci_be_s,"
      "sim_et_total_s,sim_ci_s,sim_q_ef_bytes,sim_q_af_bytes,sim_q_be_bytes,sim_q_stage2_bytes,"
      "sim_en_total_pkts,utilization,mean_cycle_s,max_cycle_s,guard_per_cycle_s,generated,"
      "delivered,little_discrepancy\n";
  for (const SweepRow& row : rows) {
    append(out, row.load);
    out += ',';
    append(out, row.lambda);
    if (!row.simulation) {
      out += std::string(20, ',');
      out += '\n';
      continue;
    }
    const sim::SimReport& s = *row.simulation;
    for (TrafficClass c : kAllClasses) {
      out += ',';
      append(out, s.mean_delay[c]);
      out += ',';
      append(out, s.delay_ci[c]);
    }
    out += ',';
    append(out, s.mean_delay_total);
    out += ',';
    append(out, s.delay_ci_total);
    for (TrafficClass c : kAllClasses) {
      out += ',';
      append(out, s.mean_queue_bytes[c]);
    }
    out += ',';
    append(out, s.stage_two_queue_bytes);
    out += ',';
    append(out, s.mean_in_system);
    out += ',';
    append(out, s.utilization);
    out += ',';
    append(out, s.mean_cycle);
    out += ',';
    append(out, s.max_cycle);
    out += ',';
    append(out, s.mean_guard_per_cycle);
    out += ',' + std::to_string(s.generated.sum()) + ',' + std::to_string(s.delivered.sum()) + ',';
    if (s.delay_samples > 0 && s.arrival_rate > 0.0) append(out, sim::little_check(s, s.arrival_rate));
    out += '\n';
  }
  return out;
}

}  // namespace epon
