#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <queue>
#include <vector>

#include "epon/errors.hpp"
#include "epon/simulation.hpp"
#include "sim_internal.hpp"

namespace epon::sim {

namespace {

// Tie order at equal times: arrivals, then slot starts, then ONU index.
enum class EventKind : int { Arrival = 1, SlotStart = 2 };

struct Event {
  double time;
  EventKind kind;
  std::uint32_t onu;
  std::uint32_t traffic_class;

  bool operator>(const Event& other) const {
    if (time != other.time) return time > other.time;
    if (kind != other.kind) return kind > other.kind;
    if (onu != other.onu) return onu > other.onu;
    return traffic_class > other.traffic_class;
  }
};

struct Onu {
  ClassMap<std::deque<double>> queues;  // arrival times
  std::uint64_t next_grant = 0;         // bytes, from the last REPORT
  double report_seen = 0.0;             // OLT time of the last REPORT
};

}  // namespace

ClassMap<std::uint64_t> apportion_frames(std::uint64_t budget,
                                         const ClassMap<std::uint64_t>& queued,
                                         const ClassMap<double>& shares) {
  ClassMap<std::uint64_t> taken{};
  std::uint64_t remaining = budget;
  while (remaining > 0) {
    std::vector<TrafficClass> active;
    double share_sum = 0.0;
    for (TrafficClass c : kAllClasses) {
      if (queued[c] > taken[c]) {
        active.push_back(c);
        share_sum += shares[c];
      }
    }
    if (active.empty()) break;

    ClassMap<std::uint64_t> quota{};
    ClassMap<double> fraction{};
    std::uint64_t assigned = 0;
    for (TrafficClass c : active) {
      const double exact = share_sum > 0.0
                               ? static_cast<double>(remaining) * shares[c] / share_sum
                               : static_cast<double>(remaining) / static_cast<double>(active.size());
      quota[c] = static_cast<std::uint64_t>(std::floor(exact));
      fraction[c] = exact - std::floor(exact);
      assigned += quota[c];
    }
    // Largest remainders first; stable sort keeps EF > AF > BE on ties.
    std::vector<TrafficClass> order = active;
    std::stable_sort(order.begin(), order.end(),
                     [&](TrafficClass a, TrafficClass b) { return fraction[a] > fraction[b]; });
    for (std::size_t i = 0; assigned < remaining; i = (i + 1) % order.size()) {
      ++quota[order[i]];
      ++assigned;
    }

    bool capped = false;
    for (TrafficClass c : active) {
      const std::uint64_t give = std::min(quota[c], queued[c] - taken[c]);
      capped = capped || give < quota[c];
      taken[c] += give;
      remaining -= give;
    }
    if (!capped) break;
  }
  return taken;
}

SimReport run_protocol_sim(const SystemConfig& config, const TrafficProfile& profile,
                           const SimConfig& sim, ProtocolTrace* trace) {
  sim.validate();
  if (sim.fidelity != Fidelity::Protocol)
    throw InvalidArgument("run_protocol_sim needs the protocol fidelity");

  const std::size_t n_onus = config.n_onus();
  const double end = sim.duration;
  const double w0 = sim.warmup;
  const double window = end - w0;
  const double frame_time = config.frame_time();
  const std::uint64_t frame = config.frame_length();
  const double byte_time = 8.0 / config.line_rate();

  ClassMap<double> shares{};
  if (profile.load() > 0.0) shares = service_shares(profile);

  std::vector<ClassMap<double>> rates(n_onus);
  std::vector<ClassMap<detail::RandomStream>> streams;
  streams.reserve(n_onus);
  for (std::size_t i = 0; i < n_onus; ++i) {
    rates[i] = class_arrival_rates(profile, config, i);
    const std::uint64_t base = i * kNumClasses;
    streams.push_back({{detail::RandomStream(sim.rng_seed, base),
                        detail::RandomStream(sim.rng_seed, base + 1),
                        detail::RandomStream(sim.rng_seed, base + 2)}});
  }

  std::priority_queue<Event, std::vector<Event>, std::greater<>> events;
  for (std::size_t i = 0; i < n_onus; ++i) {
    for (TrafficClass c : kAllClasses) {
      const double rate = rates[i][c];
      if (rate > 0.0)
        events.push(Event{streams[i][c].exponential(rate), EventKind::Arrival,
                          static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(c)});
    }
  }
  // Bootstrap round: every ONU first receives a zero-byte grant.
  events.push(Event{0.0, EventKind::SlotStart, 0, 0});

  std::vector<Onu> onus(n_onus);
  SimReport report;
  ClassMap<detail::BatchMeans> class_delay = {
      {detail::BatchMeans(w0, end, sim.batch_count), detail::BatchMeans(w0, end, sim.batch_count),
       detail::BatchMeans(w0, end, sim.batch_count)}};
  detail::BatchMeans total_delay(w0, end, sim.batch_count);
  ClassMap<double> queue_area{};
  double busy_time = 0.0;
  std::uint64_t window_arrivals = 0;
  ClassMap<std::uint64_t> in_flight{};  // committed frames finishing after the horizon

  double cycle_origin = -1.0;  // start of the current ONU-0 slot
  double cycle_busy = 0.0;     // slot time spent since cycle_origin
  double cycle_sum = 0.0;
  double guard_sum = 0.0;

  while (!events.empty()) {
    const Event ev = events.top();
    if (ev.time > end) break;
    events.pop();
    const double now = ev.time;
    Onu& onu = onus[ev.onu];

    if (ev.kind == EventKind::Arrival) {
      const auto c = static_cast<TrafficClass>(ev.traffic_class);
      onu.queues[c].push_back(now);
      ++report.generated[c];
      if (now >= w0) ++window_arrivals;
      events.push(Event{now + streams[ev.onu][c].exponential(rates[ev.onu][c]),
                        EventKind::Arrival, ev.onu, ev.traffic_class});
      continue;
    }

    // Slot start: the GATE sized from this ONU's previous REPORT takes effect.
    if (ev.onu == 0) {
      if (cycle_origin >= 0.0 && cycle_origin >= w0) {
        const double cycle = now - cycle_origin;
        cycle_sum += cycle;
        guard_sum += cycle - cycle_busy;
        report.max_cycle = std::max(report.max_cycle, cycle);
        ++report.cycles;
      }
      cycle_origin = now;
      cycle_busy = 0.0;
    }

    const std::uint64_t grant = onu.next_grant;
    ClassMap<std::uint64_t> queued{};
    for (TrafficClass c : kAllClasses) queued[c] = onu.queues[c].size();
    const ClassMap<std::uint64_t> sent = apportion_frames(grant / frame, queued, shares);

    double tx = now;
    for (TrafficClass c : kAllClasses) {
      auto& queue = onu.queues[c];
      for (std::uint64_t f = 0; f < sent[c]; ++f) {
        const double arrival = queue.front();
        queue.pop_front();
        const double departure = tx + frame_time;
        busy_time += detail::overlap(tx, departure, w0, end);
        queue_area[c] += detail::overlap(arrival, departure, w0, end);
        tx = departure;
        if (departure > end) {
          ++in_flight[c];
          continue;
        }
        ++report.delivered[c];
        if (departure >= w0) {
          class_delay[c].add(departure, departure - arrival);
          total_delay.add(departure, departure - arrival);
        }
      }
    }

    ReportMessage message;
    message.onu_id = ev.onu;
    std::uint64_t backlog = 0;
    for (TrafficClass c : kAllClasses) {
      message.queue_occupancy[c] = onu.queues[c].size() * frame;
      backlog += message.queue_occupancy[c];
    }
    onu.next_grant = std::min<std::uint64_t>(backlog, config.w_max()[ev.onu]);

    const double slot_end =
        now + byte_time * static_cast<double>(grant) + byte_time * sim.report_bytes;
    onu.report_seen = slot_end;
    cycle_busy += slot_end - now;

    if (trace != nullptr) {
      trace->gates.push_back(GateMessage{ev.onu, now, grant});
      trace->slot_ends.push_back(slot_end);
      trace->reports.push_back(message);
    }

    const auto following = static_cast<std::uint32_t>((ev.onu + 1) % n_onus);
    const double start =
        std::max(slot_end + config.guard(), onus[following].report_seen + sim.rtt);
    events.push(Event{start, EventKind::SlotStart, following, 0});
  }

  for (std::size_t i = 0; i < n_onus; ++i) {
    for (TrafficClass c : kAllClasses) {
      for (double arrival : onus[i].queues[c]) {
        queue_area[c] += detail::overlap(arrival, end, w0, end);
        ++report.in_queue_at_end[c];
      }
    }
  }

  const double per_onu_window = window * static_cast<double>(n_onus);
  double in_system_area = 0.0;
  for (TrafficClass c : kAllClasses) {
    report.in_queue_at_end[c] += in_flight[c];
    report.mean_delay[c] = class_delay[c].mean();
    report.delay_ci[c] = class_delay[c].half_width();
    report.mean_queue_bytes[c] = queue_area[c] / per_onu_window * static_cast<double>(frame);
    in_system_area += queue_area[c];
  }
  report.mean_delay_total = total_delay.mean();
  report.delay_ci_total = total_delay.half_width();
  report.delay_samples = total_delay.count();
  report.mean_in_system = in_system_area / per_onu_window;
  report.arrival_rate = static_cast<double>(window_arrivals) / per_onu_window;
  report.utilization = busy_time / window;
  if (report.cycles > 0) {
    report.mean_cycle = cycle_sum / static_cast<double>(report.cycles);
    report.mean_guard_per_cycle = guard_sum / static_cast<double>(report.cycles);
  }
  return report;
}

}  // namespace epon::sim
