#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "epon/system_config.hpp"
#include "epon/traffic.hpp"

namespace epon {

/// One station of the ONU queueing network. K = 1 is an M/M/1 queue;
/// K > 1 is the bulk-service M/M^Y/1 queue that removes up to K packets
/// per exponential service epoch.
struct StationParams {
  double arrival_rate = 0.0;  // packets/second
  double service_rate = 1.0;  // packets/second, per epoch for K > 1
  std::uint32_t batch_size = 1;

  /// Throws InvalidArgument unless λ ≥ 0, μ > 0, K ≥ 1.
  void validate() const;
  /// λ/(K·μ).
  double utilization() const noexcept;
  bool stable() const noexcept { return arrival_rate < batch_size * service_rate; }
};

struct StationMetrics {
  double utilization = 0.0;
  bool stable = true;
  double expected_count = 0.0;  // packets; +inf when unstable
  double marginal_ratio = 0.0;  // geometric parameter of the marginal law; NaN when unstable
};

/// Controls the characteristic-root search. Bisection narrows the bracket
/// to `abs_tolerance`; Newton polishing stops as soon as the next correction
/// would be smaller than `abs_tolerance`.
struct RootOptions {
  double abs_tolerance = 1e-12;
  int max_newton_steps = 8;
};

StationMetrics mm1_metrics(const StationParams& params);

/// Unique root in (0,1) of μ·r^{K+1} − (λ+μ)·r + λ. Throws UnstableStation
/// when λ ≥ K·μ.
double batch_root(const StationParams& params, const RootOptions& options = {});

StationMetrics batch_metrics(const StationParams& params, const RootOptions& options = {});

/// Stability flag of each station, ρ = λ/(K·μ) < 1.
std::vector<bool> stability_report(std::span<const StationParams> stations);

/// Steady-state picture of one ONU: three class stations feeding the
/// shared batch station.
struct AnalyticReport {
  ClassMap<StationParams> class_params;
  StationParams stage_two_params;
  ClassMap<StationMetrics> class_stations;
  StationMetrics stage_two;
  GpsAllocation allocation;

  double throughput = 0.0;      // γ = λ, packets/second
  double expected_count = 0.0;  // E[N], packets; +inf when any station is unstable
  double mean_delay = 0.0;      // E[T], seconds; +inf unstable, NaN at zero load
  ClassMap<double> class_delay;  // E[T_c], seconds; NaN for classes with no traffic
  bool stable = true;

  /// Provenance notes for the derived quantities (printed by the CLI).
  std::vector<std::string> notes;
};

/// E[N]/γ.
double little_delay(double expected_count, double throughput);

/// r₀/(λ(1−r₀)) + (1/λ)·Σ_c ρ_c/(1−ρ_c); equals E[N]/γ for every stable report.
double two_term_delay(const AnalyticReport& report);

/// Composes the traffic model with the station formulas for one ONU.
/// Instability is reported through the flags; nothing throws for it.
AnalyticReport evaluate(const SystemConfig& config, const TrafficProfile& profile,
                        std::size_t onu_index = 0, const RootOptions& options = {});

/// Product-form probability of (n_EF, n_AF, n_BE, n_stage2).
/// Throws NoStationaryDistribution when any station is unstable.
double joint_state_probability(const std::array<std::uint64_t, 4>& counts,
                               const AnalyticReport& report);

}  // namespace epon
