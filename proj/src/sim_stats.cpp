#include <cmath>
#include <limits>

#include <boost/math/distributions/students_t.hpp>

#include "epon/errors.hpp"
#include "epon/simulation.hpp"
#include "sim_internal.hpp"

namespace epon::sim {

namespace detail {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream_id)
    : engine_(splitmix64(splitmix64(seed) ^ splitmix64(stream_id + 0x632be59bd9b4e019ULL))) {}

BatchMeans::BatchMeans(double window_start, double window_end, std::size_t batches)
    : start_(window_start),
      width_((window_end - window_start) / static_cast<double>(batches)),
      sums_(batches, 0.0),
      counts_(batches, 0) {}

void BatchMeans::add(double departure_time, double delay) {
  auto index = static_cast<std::size_t>((departure_time - start_) / width_);
  if (index >= sums_.size()) index = sums_.size() - 1;
  sums_[index] += delay;
  ++counts_[index];
  total_ += delay;
  ++count_;
}

double BatchMeans::mean() const {
  if (count_ == 0) return std::numeric_limits<double>::quiet_NaN();
  return total_ / static_cast<double>(count_);
}

double BatchMeans::half_width() const {
  std::vector<double> means;
  for (std::size_t i = 0; i < sums_.size(); ++i) {
    if (counts_[i] > 0) means.push_back(sums_[i] / static_cast<double>(counts_[i]));
  }
  if (means.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  const double n = static_cast<double>(means.size());
  double m = 0.0;
  for (double x : means) m += x;
  m /= n;
  double ss = 0.0;
  for (double x : means) ss += (x - m) * (x - m);
  const double stddev = std::sqrt(ss / (n - 1.0));
  const boost::math::students_t dist(n - 1.0);
  return boost::math::quantile(dist, 0.975) * stddev / std::sqrt(n);
}

}  // namespace detail

void SimConfig::validate() const {
  if (!(duration > 0.0)) throw InvalidArgument("simulation duration must be positive");
  if (!(warmup >= 0.0 && warmup < duration))
    throw InvalidArgument("warmup must lie in [0, duration)");
  if (batch_count < 2) throw InvalidArgument("at least two batches are needed");
  if (!(rtt >= 0.0)) throw InvalidArgument("round-trip time must be non-negative");
}

double little_check(const SimReport& report, double effective_lambda) {
  if (report.delay_samples == 0)
    throw UndefinedCheck("Little check needs at least one delivered packet");
  if (!(effective_lambda > 0.0)) throw InvalidArgument("effective arrival rate must be positive");
  const double delay = report.mean_delay_total;
  return std::abs(report.mean_in_system / effective_lambda - delay) / delay;
}

}  // namespace epon::sim
