#include "epon/traffic.hpp"

#include <cmath>

#include "epon/errors.hpp"

namespace epon {

namespace {

constexpr double kSumTolerance = 1e-9;

}  // namespace

std::string_view to_string(TrafficClass c) noexcept {
  switch (c) {
    case TrafficClass::EF:
      return "EF";
    case TrafficClass::AF:
      return "AF";
    case TrafficClass::BE:
      return "BE";
  }
  return "?";
}

TrafficProfile::TrafficProfile(ClassMap<double> mix, ClassMap<double> weights, double load,
                               LoadNormalization normalization)
    : mix_(mix), weights_(weights), load_(load), normalization_(normalization) {
  for (double a : mix_.values) {
    if (!(a >= 0.0)) throw InvalidArgument("class mix fractions must be non-negative");
  }
  for (double d : weights_.values) {
    if (!(d > 0.0)) throw InvalidArgument("priority weights must be positive");
  }
  if (std::abs(mix_.sum() - 1.0) > kSumTolerance)
    throw InvalidArgument("class mix must sum to 1");
  if (std::abs(weights_.sum() - 1.0) > kSumTolerance)
    throw InvalidArgument("priority weights must sum to 1");
  if (!(load_ >= 0.0 && load_ < 1.0)) throw InvalidArgument("offered load must lie in [0, 1)");
}

TrafficProfile TrafficProfile::with_load(double load) const {
  return TrafficProfile(mix_, weights_, load, normalization_);
}

double guaranteed_rate_pps(const SystemConfig& config, std::size_t onu_index) {
  if (onu_index >= config.n_onus()) throw InvalidArgument("ONU index out of range");
  const double t_max = compute_max_cycle(config);
  const double lambda_min = compute_guaranteed_bandwidth(config, t_max)[onu_index];
  return lambda_min / (8.0 * config.frame_length());
}

ClassMap<double> class_arrival_rates(const TrafficProfile& profile, const SystemConfig& config,
                                     std::size_t onu_index) {
  const double load = profile.load();
  if (!(load >= 0.0 && load < 1.0)) throw InvalidArgument("offered load must lie in [0, 1)");

  const double base_pps = profile.normalization() == LoadNormalization::ChannelCapacity
                              ? config.line_rate() / (8.0 * config.frame_length())
                              : guaranteed_rate_pps(config, onu_index);
  const double lambda = load * base_pps;
  ClassMap<double> rates;
  for (TrafficClass c : kAllClasses) rates[c] = profile.mix()[c] * lambda;
  return rates;
}

ClassMap<double> service_shares(const TrafficProfile& profile) {
  if (!(profile.load() > 0.0))
    throw UndefinedShares("service shares are undefined at zero offered load");
  ClassMap<double> shares;
  for (TrafficClass c : kAllClasses) shares[c] = profile.mix()[c] * profile.weights()[c];
  return shares;
}

GpsAllocation gps_rates(const ClassMap<double>& shares, const ClassSet& nonempty,
                        double base_rate) {
  if (!(base_rate > 0.0)) throw InvalidArgument("base rate must be positive");
  double active_share = 0.0;
  bool any = false;
  for (TrafficClass c : kAllClasses) {
    if (!nonempty[c]) continue;
    any = true;
    active_share += shares[c];
  }
  if (!any) throw InvalidArgument("GPS needs at least one non-empty queue");
  if (!(active_share > 0.0)) throw InvalidArgument("non-empty queues carry no service share");

  GpsAllocation out;
  out.shares = shares;
  out.nonempty = nonempty;
  out.base_rate = base_rate;
  for (TrafficClass c : kAllClasses) {
    out.rates[c] = nonempty[c] ? shares[c] / active_share * base_rate : 0.0;
  }
  return out;
}

}  // namespace epon
