#pragma once

#include <array>
#include <cstddef>
#include <string_view>

#include "epon/system_config.hpp"

namespace epon {

/// Diffserv classes, listed from highest to lowest priority.
enum class TrafficClass : std::size_t { EF = 0, AF = 1, BE = 2 };

inline constexpr std::size_t kNumClasses = 3;
inline constexpr std::array<TrafficClass, kNumClasses> kAllClasses = {
    TrafficClass::EF, TrafficClass::AF, TrafficClass::BE};

std::string_view to_string(TrafficClass c) noexcept;

/// Fixed-size per-class table indexed by TrafficClass.
template <typename T>
struct ClassMap {
  std::array<T, kNumClasses> values{};

  T& operator[](TrafficClass c) noexcept { return values[static_cast<std::size_t>(c)]; }
  const T& operator[](TrafficClass c) const noexcept {
    return values[static_cast<std::size_t>(c)];
  }

  T sum() const noexcept {
    T total{};
    for (const T& v : values) total += v;
    return total;
  }

  bool operator==(const ClassMap&) const = default;
};

/// Set of classes, used for the non-empty queue set Q.
using ClassSet = ClassMap<bool>;

inline ClassSet all_classes() { return ClassSet{{true, true, true}}; }

/// What the dimensionless offered load is a fraction of.
enum class LoadNormalization {
  ChannelCapacity,      // λ = load · R_U / (8L)
  GuaranteedBandwidth,  // λ = load · Λ_MIN / (8L)
};

class TrafficProfile {
 public:
  /// Throws InvalidArgument unless mix sums to 1 (each ≥ 0), weights sum
  /// to 1 (each > 0), and 0 ≤ load < 1. Sums are checked to 1e-9.
  TrafficProfile(ClassMap<double> mix, ClassMap<double> weights, double load,
                 LoadNormalization normalization = LoadNormalization::ChannelCapacity);

  const ClassMap<double>& mix() const noexcept { return mix_; }
  const ClassMap<double>& weights() const noexcept { return weights_; }
  double load() const noexcept { return load_; }
  LoadNormalization normalization() const noexcept { return normalization_; }

  TrafficProfile with_load(double load) const;

 private:
  ClassMap<double> mix_;
  ClassMap<double> weights_;
  double load_;
  LoadNormalization normalization_;
};

struct GpsAllocation {
  ClassMap<double> shares;  // φ_c
  ClassMap<double> rates;   // μ_c, packets/second; zero outside Q
  double base_rate = 0.0;   // Λ_MIN in packets/second
  ClassSet nonempty;        // Q
};

/// Λ_MIN of ONU `onu_index` expressed in frames per second.
double guaranteed_rate_pps(const SystemConfig& config, std::size_t onu_index = 0);

/// Per-class Poisson arrival rates (packets/second) offered to one ONU.
/// The GuaranteedBandwidth base is Λ_MIN of `onu_index`.
ClassMap<double> class_arrival_rates(const TrafficProfile& profile, const SystemConfig& config,
                                     std::size_t onu_index = 0);

/// φ_c = (λ_c/λ)·δ_c = α_c·δ_c. Throws UndefinedShares at zero load.
ClassMap<double> service_shares(const TrafficProfile& profile);

/// Splits `base_rate` among the classes of `nonempty` in proportion to
/// their shares. Throws InvalidArgument when the set is empty, the base
/// rate is not positive, or the shares of the set sum to zero.
GpsAllocation gps_rates(const ClassMap<double>& shares, const ClassSet& nonempty, double base_rate);

}  // namespace epon
