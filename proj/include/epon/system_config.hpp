#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace epon {

/// Physical and protocol parameters of one EPON tree.
///
/// Window sizes are in bytes; every conversion to bits happens in the
/// dimensioning functions below.
class SystemConfig {
 public:
  /// Throws InvalidArgument when any invariant is violated:
  /// at least one ONU, positive line rate and frame length, non-negative
  /// guard, one window per ONU, and every window able to hold one frame.
  SystemConfig(std::size_t n_onus, double line_rate_bps, double guard_s,
               std::uint32_t frame_bytes, std::vector<std::uint64_t> w_max_bytes);

  /// Same window for every ONU.
  static SystemConfig homogeneous(std::size_t n_onus, double line_rate_bps, double guard_s,
                                  std::uint32_t frame_bytes, std::uint64_t w_max_bytes);

  std::size_t n_onus() const noexcept { return n_onus_; }
  double line_rate() const noexcept { return line_rate_; }
  double guard() const noexcept { return guard_; }
  std::uint32_t frame_length() const noexcept { return frame_length_; }
  const std::vector<std::uint64_t>& w_max() const noexcept { return w_max_; }

  /// Transmission time of one frame at the line rate.
  double frame_time() const noexcept { return 8.0 * frame_length_ / line_rate_; }

 private:
  std::size_t n_onus_;
  double line_rate_;
  double guard_;
  std::uint32_t frame_length_;
  std::vector<std::uint64_t> w_max_;
};

struct DimensioningReport {
  double t_max = 0.0;                   // seconds
  std::vector<double> lambda_min;       // bits/second per ONU
  std::vector<std::uint32_t> batch_size;  // whole frames per ONU window
};

/// Heavy-load polling cycle: sum over ONUs of G + 8·W_MAX/R_U.
double compute_max_cycle(const SystemConfig& config);

/// Minimum guaranteed bandwidth 8·W_MAX/t_max of every ONU, in bits/second.
std::vector<double> compute_guaranteed_bandwidth(const SystemConfig& config, double t_max);

/// Largest homogeneous window (whole bytes) whose cycle does not exceed
/// `target_t_max`. Throws InfeasibleCycle when target_t_max ≤ N·G.
std::uint64_t solve_wmax_for_cycle(std::size_t n_onus, double line_rate_bps, double guard_s,
                                   double target_t_max);

/// Whole frames that fit in the ONU's window, floor(W_MAX/L).
std::uint32_t batch_size(const SystemConfig& config, std::size_t onu_index);

DimensioningReport dimension(const SystemConfig& config);

}  // namespace epon
