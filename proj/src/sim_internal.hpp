#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "epon/simulation.hpp"

namespace epon::sim::detail {

/// Independent, reproducible stream per (seed, stream id).
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream_id);

  /// Uniform on [0, 1) from the top 53 bits, identical on every platform.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double exponential(double rate) { return -std::log1p(-uniform()) / rate; }

 private:
  std::mt19937_64 engine_;
};

/// Delay samples split into equal time batches over the measurement window.
class BatchMeans {
 public:
  BatchMeans(double window_start, double window_end, std::size_t batches);

  void add(double departure_time, double delay);

  std::uint64_t count() const noexcept { return count_; }
  double mean() const;
  /// 95% Student-t half-width over the non-empty batch means.
  double half_width() const;

 private:
  double start_;
  double width_;
  std::vector<double> sums_;
  std::vector<std::uint64_t> counts_;
  double total_ = 0.0;
  std::uint64_t count_ = 0;
};

/// Length of [a, b] ∩ [lo, hi].
inline double overlap(double a, double b, double lo, double hi) {
  const double from = a > lo ? a : lo;
  const double to = b < hi ? b : hi;
  return to > from ? to - from : 0.0;
}

}  // namespace epon::sim::detail
