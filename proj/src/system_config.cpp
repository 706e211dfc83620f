#include "epon/system_config.hpp"

#include <cmath>
#include <string>

#include "epon/errors.hpp"

namespace epon {

SystemConfig::SystemConfig(std::size_t n_onus, double line_rate_bps, double guard_s,
                           std::uint32_t frame_bytes, std::vector<std::uint64_t> w_max_bytes)
    : n_onus_(n_onus),
      line_rate_(line_rate_bps),
      guard_(guard_s),
      frame_length_(frame_bytes),
      w_max_(std::move(w_max_bytes)) {
  if (n_onus_ == 0) throw InvalidArgument("n_onus must be at least 1");
  if (!(line_rate_ > 0.0) || !std::isfinite(line_rate_))
    throw InvalidArgument("line rate must be positive");
  if (!(guard_ >= 0.0) || !std::isfinite(guard_))
    throw InvalidArgument("guard interval must be non-negative");
  if (frame_length_ == 0) throw InvalidArgument("frame length must be positive");
  if (w_max_.size() != n_onus_)
    throw InvalidArgument("expected " + std::to_string(n_onus_) + " window sizes, got " +
                          std::to_string(w_max_.size()));
  for (std::size_t i = 0; i < w_max_.size(); ++i) {
    if (w_max_[i] < frame_length_)
      throw InvalidArgument("window of ONU " + std::to_string(i) +
                            " cannot hold a single frame");
  }
}

SystemConfig SystemConfig::homogeneous(std::size_t n_onus, double line_rate_bps, double guard_s,
                                       std::uint32_t frame_bytes, std::uint64_t w_max_bytes) {
  return SystemConfig(n_onus, line_rate_bps, guard_s, frame_bytes,
                      std::vector<std::uint64_t>(n_onus, w_max_bytes));
}

double compute_max_cycle(const SystemConfig& config) {
  double t_max = 0.0;
  for (std::uint64_t w : config.w_max()) {
    t_max += config.guard() + 8.0 * static_cast<double>(w) / config.line_rate();
  }
  return t_max;
}

std::vector<double> compute_guaranteed_bandwidth(const SystemConfig& config, double t_max) {
  if (!(t_max > 0.0)) throw InvalidArgument("cycle time must be positive");
  std::vector<double> out;
  out.reserve(config.n_onus());
  for (std::uint64_t w : config.w_max()) out.push_back(8.0 * static_cast<double>(w) / t_max);
  return out;
}

std::uint64_t solve_wmax_for_cycle(std::size_t n_onus, double line_rate_bps, double guard_s,
                                   double target_t_max) {
  if (n_onus == 0) throw InvalidArgument("n_onus must be at least 1");
  if (!(line_rate_bps > 0.0)) throw InvalidArgument("line rate must be positive");
  if (!(guard_s >= 0.0)) throw InvalidArgument("guard interval must be non-negative");
  const double n = static_cast<double>(n_onus);
  if (!(target_t_max > n * guard_s))
    throw InfeasibleCycle("target cycle leaves no transmission time after " +
                          std::to_string(n_onus) + " guard intervals");

  const double exact = (target_t_max / n - guard_s) * line_rate_bps / 8.0;
  // Decimal inputs such as 2e-3 land a few ulps below an integral result.
  auto w = static_cast<std::uint64_t>(std::floor(exact * (1.0 + 1e-12)));
  auto cycle = [&](std::uint64_t bytes) {
    return n * (guard_s + 8.0 * static_cast<double>(bytes) / line_rate_bps);
  };
  while (w > 0 && cycle(w) > target_t_max * (1.0 + 1e-12)) --w;
  return w;
}

std::uint32_t batch_size(const SystemConfig& config, std::size_t onu_index) {
  if (onu_index >= config.n_onus()) throw InvalidArgument("ONU index out of range");
  return static_cast<std::uint32_t>(config.w_max()[onu_index] / config.frame_length());
}

DimensioningReport dimension(const SystemConfig& config) {
  DimensioningReport report;
  report.t_max = compute_max_cycle(config);
  report.lambda_min = compute_guaranteed_bandwidth(config, report.t_max);
  report.batch_size.reserve(config.n_onus());
  for (std::size_t i = 0; i < config.n_onus(); ++i)
    report.batch_size.push_back(batch_size(config, i));
  return report;
}

}  // namespace epon
