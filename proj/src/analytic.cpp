#include "epon/analytic.hpp"

#include <cmath>
#include <limits>

#include "epon/errors.hpp"

namespace epon {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

StationMetrics unstable_metrics(double utilization) {
  return StationMetrics{utilization, false, kInf, kNaN};
}

StationMetrics idle_metrics() { return StationMetrics{0.0, true, 0.0, 0.0}; }

}  // namespace

void StationParams::validate() const {
  if (!(arrival_rate >= 0.0) || !std::isfinite(arrival_rate))
    throw InvalidArgument("arrival rate must be non-negative");
  if (!(service_rate > 0.0) || !std::isfinite(service_rate))
    throw InvalidArgument("service rate must be positive");
  if (batch_size < 1) throw InvalidArgument("batch size must be at least 1");
}

double StationParams::utilization() const noexcept {
  if (arrival_rate == 0.0) return 0.0;
  return arrival_rate / (batch_size * service_rate);
}

StationMetrics mm1_metrics(const StationParams& params) {
  params.validate();
  if (params.batch_size != 1) throw InvalidArgument("M/M/1 station needs batch size 1");
  const double rho = params.utilization();
  if (!(rho < 1.0)) return unstable_metrics(rho);
  return StationMetrics{rho, true, rho / (1.0 - rho), rho};
}

double batch_root(const StationParams& params, const RootOptions& options) {
  params.validate();
  if (!params.stable())
    throw UnstableStation("no characteristic root inside the unit interval: lambda >= K*mu");
  const double lambda = params.arrival_rate;
  if (lambda == 0.0) return 0.0;

  const double mu = params.service_rate;
  const std::uint32_t k = params.batch_size;

  // μr^{K+1} − (λ+μ)r + λ = (r − 1)·g(r) with g(r) = μ(r + r² + … + r^K) − λ.
  // Working on g removes the cancellation next to the root at r = 1; g is
  // increasing with g(0) = −λ < 0 and g(1) = Kμ − λ > 0.
  auto g = [&](double r) {
    double power = 1.0;
    double sum = 0.0;
    for (std::uint32_t j = 0; j < k; ++j) {
      power *= r;
      sum += power;
    }
    return mu * sum - lambda;
  };
  auto dg = [&](double r) {
    double power = 1.0;
    double sum = 0.0;
    for (std::uint32_t j = 1; j <= k; ++j) {
      sum += j * power;
      power *= r;
    }
    return mu * sum;
  };

  double lo = 0.0;
  double hi = 1.0;
  const double tol = options.abs_tolerance;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (g(mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }

  double r = 0.5 * (lo + hi);
  for (int step = 0; step < options.max_newton_steps; ++step) {
    const double next = r - g(r) / dg(r);
    if (!(next >= lo && next <= hi)) break;
    const double correction = std::abs(next - r);
    r = next;
    if (correction <= tol) break;
  }
  return r;
}

StationMetrics batch_metrics(const StationParams& params, const RootOptions& options) {
  params.validate();
  if (!params.stable()) return unstable_metrics(params.utilization());
  const double r0 = batch_root(params, options);
  return StationMetrics{params.utilization(), true, r0 / (1.0 - r0), r0};
}

std::vector<bool> stability_report(std::span<const StationParams> stations) {
  std::vector<bool> out;
  out.reserve(stations.size());
  for (const StationParams& s : stations) out.push_back(s.utilization() < 1.0);
  return out;
}

double little_delay(double expected_count, double throughput) {
  if (!(throughput > 0.0)) return kNaN;
  return expected_count / throughput;
}

double two_term_delay(const AnalyticReport& report) {
  const double lambda = report.throughput;
  if (!(lambda > 0.0)) return kNaN;
  if (!report.stable) return kInf;
  const double r0 = report.stage_two.marginal_ratio;
  double first_stage = 0.0;
  for (TrafficClass c : kAllClasses) {
    const double rho = report.class_stations[c].utilization;
    first_stage += rho / (1.0 - rho);
  }
  return r0 / (lambda * (1.0 - r0)) + first_stage / lambda;
}

AnalyticReport evaluate(const SystemConfig& config, const TrafficProfile& profile,
                        std::size_t onu_index, const RootOptions& options) {
  AnalyticReport report;
  const ClassMap<double> arrivals = class_arrival_rates(profile, config, onu_index);
  const double base_rate = guaranteed_rate_pps(config, onu_index);
  const std::uint32_t k = batch_size(config, onu_index);
  const double lambda = arrivals.sum();

  report.notes.push_back("single ONU model; offered load is a fraction of " +
                         std::string(profile.normalization() == LoadNormalization::ChannelCapacity
                                         ? "the channel capacity"
                                         : "the guaranteed bandwidth"));
  report.notes.push_back(
      "per-class delay = E[N_c]/lambda_c + shared stage-two delay (reconstructed, not a "
      "closed form of the model)");

  report.stage_two_params = StationParams{lambda, base_rate, k};
  report.stage_two = batch_metrics(report.stage_two_params, options);
  report.throughput = lambda;

  if (lambda == 0.0) {
    for (TrafficClass c : kAllClasses) {
      report.class_params[c] = StationParams{0.0, 0.0, 1};
      report.class_stations[c] = idle_metrics();
      report.class_delay[c] = kNaN;
    }
    report.allocation.base_rate = base_rate;
    report.expected_count = 0.0;
    report.mean_delay = kNaN;
    report.stable = true;
    return report;
  }

  ClassSet active;
  for (TrafficClass c : kAllClasses) active[c] = arrivals[c] > 0.0;
  report.allocation = gps_rates(service_shares(profile), active, base_rate);

  report.stable = report.stage_two.stable;
  double count = report.stage_two.expected_count;
  for (TrafficClass c : kAllClasses) {
    if (!active[c]) {
      report.class_params[c] = StationParams{0.0, 0.0, 1};
      report.class_stations[c] = idle_metrics();
      continue;
    }
    report.class_params[c] = StationParams{arrivals[c], report.allocation.rates[c], 1};
    report.class_stations[c] = mm1_metrics(report.class_params[c]);
    report.stable = report.stable && report.class_stations[c].stable;
    count += report.class_stations[c].expected_count;
  }

  report.expected_count = report.stable ? count : kInf;
  report.mean_delay = report.stable ? little_delay(count, lambda) : kInf;

  const double stage_two_delay =
      report.stage_two.stable ? little_delay(report.stage_two.expected_count, lambda) : kInf;
  for (TrafficClass c : kAllClasses) {
    if (!active[c]) {
      report.class_delay[c] = kNaN;
    } else if (!report.class_stations[c].stable || !report.stage_two.stable) {
      report.class_delay[c] = kInf;
    } else {
      report.class_delay[c] =
          little_delay(report.class_stations[c].expected_count, arrivals[c]) + stage_two_delay;
    }
  }
  return report;
}

double joint_state_probability(const std::array<std::uint64_t, 4>& counts,
                               const AnalyticReport& report) {
  if (!report.stable)
    throw NoStationaryDistribution("an unstable station has no stationary distribution");
  const std::array<double, 4> ratios = {report.class_stations[TrafficClass::EF].marginal_ratio,
                                        report.class_stations[TrafficClass::AF].marginal_ratio,
                                        report.class_stations[TrafficClass::BE].marginal_ratio,
                                        report.stage_two.marginal_ratio};
  double p = 1.0;
  for (std::size_t i = 0; i < ratios.size(); ++i) {
    p *= (1.0 - ratios[i]) * std::pow(ratios[i], static_cast<double>(counts[i]));
  }
  return p;
}

}  // namespace epon
