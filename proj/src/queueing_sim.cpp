#include <array>
#include <deque>
#include <limits>

#include "epon/errors.hpp"
#include "epon/simulation.hpp"
#include "sim_internal.hpp"

namespace epon::sim {

namespace {

constexpr double kNever = std::numeric_limits<double>::infinity();

// Calendar slots. Lower slot wins a time tie: departures (stage one, then
// stage two) come before arrivals.
enum Slot : std::size_t {
  kDepartEF = 0,
  kDepartAF,
  kDepartBE,
  kDepartStageTwo,
  kArriveEF,
  kArriveAF,
  kArriveBE,
  kSlotCount
};

struct Job {
  double arrival = 0.0;
  double stage_one_exit = 0.0;
  TrafficClass traffic_class = TrafficClass::EF;
};

}  // namespace

QueueingNetwork network_from(const AnalyticReport& report, std::uint32_t frame_length) {
  QueueingNetwork net;
  net.stage_one = report.class_params;
  net.stage_two = report.stage_two_params;
  net.frame_length = frame_length;
  return net;
}

SimReport run_queueing_sim(const QueueingNetwork& network, const SimConfig& sim) {
  sim.validate();
  if (sim.fidelity != Fidelity::QueueingNetwork)
    throw InvalidArgument("run_queueing_sim needs the queueing-network fidelity");
  for (TrafficClass c : kAllClasses) {
    const StationParams& s = network.stage_one[c];
    if (s.arrival_rate > 0.0) s.validate();
  }
  if (network.stage_two_enabled) network.stage_two.validate();

  const double end = sim.duration;
  const double w0 = sim.warmup;
  const double window = end - w0;

  std::array<detail::RandomStream, kSlotCount> rng = {
      detail::RandomStream(sim.rng_seed, kDepartEF), detail::RandomStream(sim.rng_seed, kDepartAF),
      detail::RandomStream(sim.rng_seed, kDepartBE),
      detail::RandomStream(sim.rng_seed, kDepartStageTwo),
      detail::RandomStream(sim.rng_seed, kArriveEF), detail::RandomStream(sim.rng_seed, kArriveAF),
      detail::RandomStream(sim.rng_seed, kArriveBE)};

  std::array<double, kSlotCount> calendar;
  calendar.fill(kNever);
  for (TrafficClass c : kAllClasses) {
    const double rate = network.stage_one[c].arrival_rate;
    const std::size_t slot = kArriveEF + static_cast<std::size_t>(c);
    if (rate > 0.0) calendar[slot] = rng[slot].exponential(rate);
  }

  ClassMap<std::deque<Job>> stage_one;
  std::deque<Job> stage_two;

  SimReport report;
  ClassMap<detail::BatchMeans> class_delay = {
      {detail::BatchMeans(w0, end, sim.batch_count), detail::BatchMeans(w0, end, sim.batch_count),
       detail::BatchMeans(w0, end, sim.batch_count)}};
  detail::BatchMeans total_delay(w0, end, sim.batch_count);
  ClassMap<double> stage_one_area{};
  double stage_two_area = 0.0;
  double system_area = 0.0;
  double busy_time = 0.0;
  std::uint64_t window_arrivals = 0;
  double last_event = 0.0;

  auto finish = [&](const Job& job, double now) {
    const double delay = now - job.arrival;
    ++report.delivered[job.traffic_class];
    system_area += detail::overlap(job.arrival, now, w0, end);
    if (now >= w0) {
      class_delay[job.traffic_class].add(now, delay);
      total_delay.add(now, delay);
    }
  };

  for (;;) {
    std::size_t next = 0;
    for (std::size_t s = 1; s < kSlotCount; ++s) {
      if (calendar[s] < calendar[next]) next = s;
    }
    const double now = calendar[next];
    if (now > end) break;

    if (!stage_two.empty()) busy_time += detail::overlap(last_event, now, w0, end);
    last_event = now;

    if (next >= kArriveEF) {
      const auto c = static_cast<TrafficClass>(next - kArriveEF);
      auto& queue = stage_one[c];
      queue.push_back(Job{now, 0.0, c});
      ++report.generated[c];
      if (now >= w0) ++window_arrivals;
      const std::size_t depart = static_cast<std::size_t>(c);
      if (queue.size() == 1)
        calendar[depart] = now + rng[depart].exponential(network.stage_one[c].service_rate);
      calendar[next] = now + rng[next].exponential(network.stage_one[c].arrival_rate);
    } else if (next == kDepartStageTwo) {
      const std::size_t served =
          std::min<std::size_t>(stage_two.size(), network.stage_two.batch_size);
      for (std::size_t i = 0; i < served; ++i) {
        const Job& job = stage_two.front();
        stage_two_area += detail::overlap(job.stage_one_exit, now, w0, end);
        finish(job, now);
        stage_two.pop_front();
      }
      calendar[next] = stage_two.empty()
                           ? kNever
                           : now + rng[next].exponential(network.stage_two.service_rate);
    } else {
      const auto c = static_cast<TrafficClass>(next);
      auto& queue = stage_one[c];
      Job job = queue.front();
      queue.pop_front();
      job.stage_one_exit = now;
      stage_one_area[c] += detail::overlap(job.arrival, now, w0, end);
      if (network.stage_two_enabled) {
        stage_two.push_back(job);
        if (stage_two.size() == 1)
          calendar[kDepartStageTwo] =
              now + rng[kDepartStageTwo].exponential(network.stage_two.service_rate);
      } else {
        finish(job, now);
      }
      calendar[next] = queue.empty()
                           ? kNever
                           : now + rng[next].exponential(network.stage_one[c].service_rate);
    }
  }
  if (!stage_two.empty()) busy_time += detail::overlap(last_event, end, w0, end);

  // Jobs still inside at the horizon count toward the time averages.
  for (TrafficClass c : kAllClasses) {
    for (const Job& job : stage_one[c]) {
      stage_one_area[c] += detail::overlap(job.arrival, end, w0, end);
      system_area += detail::overlap(job.arrival, end, w0, end);
      ++report.in_queue_at_end[c];
    }
  }
  for (const Job& job : stage_two) {
    stage_two_area += detail::overlap(job.stage_one_exit, end, w0, end);
    system_area += detail::overlap(job.arrival, end, w0, end);
    ++report.in_queue_at_end[job.traffic_class];
  }

  const double frame = network.frame_length;
  for (TrafficClass c : kAllClasses) {
    report.mean_delay[c] = class_delay[c].mean();
    report.delay_ci[c] = class_delay[c].half_width();
    report.mean_queue_bytes[c] = stage_one_area[c] / window * frame;
  }
  report.mean_delay_total = total_delay.mean();
  report.delay_ci_total = total_delay.half_width();
  report.delay_samples = total_delay.count();
  report.stage_two_queue_bytes = stage_two_area / window * frame;
  report.mean_in_system = system_area / window;
  report.arrival_rate = static_cast<double>(window_arrivals) / window;
  report.utilization = busy_time / window;
  return report;
}

}  // namespace epon::sim
