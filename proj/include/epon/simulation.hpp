#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "epon/analytic.hpp"
#include "epon/system_config.hpp"
#include "epon/traffic.hpp"

namespace epon::sim {

enum class Fidelity { Protocol, QueueingNetwork };

struct SimConfig {
  std::uint64_t rng_seed = 1;
  double duration = 10.0;  // seconds
  double warmup = 1.0;     // seconds; statistics only cover [warmup, duration]
  Fidelity fidelity = Fidelity::Protocol;
  std::size_t batch_count = 10;

  // Protocol knobs, both off by default.
  double rtt = 0.0;                  // round-trip time, identical for every ONU
  std::uint32_t report_bytes = 0;    // REPORT frame carried inside each slot

  /// Throws InvalidArgument unless 0 ≤ warmup < duration, batch_count ≥ 2,
  /// rtt ≥ 0.
  void validate() const;
};

struct Packet {
  TrafficClass traffic_class = TrafficClass::EF;
  std::uint32_t size = 0;  // bytes
  double arrival_time = 0.0;
  std::uint32_t onu_id = 0;
};

struct GateMessage {
  std::uint32_t onu_id = 0;
  double slot_start = 0.0;  // OLT timeline, seconds
  std::uint64_t slot_length_bytes = 0;
};

struct ReportMessage {
  std::uint32_t onu_id = 0;
  ClassMap<std::uint64_t> queue_occupancy{};  // bytes of whole queued frames
};

/// Optional record of the control plane, filled by run_protocol_sim.
struct ProtocolTrace {
  std::vector<GateMessage> gates;
  std::vector<double> slot_ends;  // parallel to gates
  std::vector<ReportMessage> reports;
};

struct SimReport {
  ClassMap<double> mean_delay{};      // seconds
  ClassMap<double> delay_ci{};        // 95% batch-means half-width, seconds
  double mean_delay_total = 0.0;
  double delay_ci_total = 0.0;

  ClassMap<double> mean_queue_bytes{};  // per ONU, first-stage / ONU queue
  double stage_two_queue_bytes = 0.0;   // queueing fidelity only
  double mean_in_system = 0.0;          // packets per ONU, time-averaged
  double arrival_rate = 0.0;            // packets/second per ONU over the window

  double utilization = 0.0;  // busy fraction of the upstream channel / stage-two server
  double mean_cycle = 0.0;   // seconds, protocol fidelity only
  double max_cycle = 0.0;
  double mean_guard_per_cycle = 0.0;
  std::uint64_t cycles = 0;

  ClassMap<std::uint64_t> generated{};
  ClassMap<std::uint64_t> delivered{};
  ClassMap<std::uint64_t> in_queue_at_end{};
  std::uint64_t delay_samples = 0;  // packets departed inside the window
};

/// Splits a slot's whole-frame budget among the classes with queued frames.
/// Quotas follow the shares (largest remainder, ties to the higher
/// priority); budget left by a class that runs out of frames is re-split
/// among the others.
ClassMap<std::uint64_t> apportion_frames(std::uint64_t budget,
                                         const ClassMap<std::uint64_t>& queued,
                                         const ClassMap<double>& shares);

/// Event-driven MPCP/IPACT run over every ONU of `config`.
SimReport run_protocol_sim(const SystemConfig& config, const TrafficProfile& profile,
                           const SimConfig& sim, ProtocolTrace* trace = nullptr);

/// Stations of the two-stage network, as produced by evaluate().
struct QueueingNetwork {
  ClassMap<StationParams> stage_one;
  StationParams stage_two;
  bool stage_two_enabled = true;
  std::uint32_t frame_length = 1500;  // bytes, for the byte-valued fields
};

QueueingNetwork network_from(const AnalyticReport& report, std::uint32_t frame_length);

/// Three exponential servers feeding one bulk server.
SimReport run_queueing_sim(const QueueingNetwork& network, const SimConfig& sim);

/// |E[N]/λ − E[T]| / E[T] from the measured quantities of a run.
/// Throws UndefinedCheck when nothing was delivered inside the window.
double little_check(const SimReport& report, double effective_lambda);

}  // namespace epon::sim
