#include <charconv>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>

#include "epon/errors.hpp"
#include "epon/scenario.hpp"

namespace epon {

namespace {

constexpr double kSumTolerance = 1e-9;

struct Entry {
  std::string value;
  std::size_t line;
};

const std::set<std::string, std::less<>>& known_keys() {
  static const std::set<std::string, std::less<>> keys = {
      "n_onus",     "line_rate_bps", "guard_s",        "t_max_s",  "w_max_bytes",
      "frame_bytes", "mix_ef",       "mix_af",         "mix_be",   "delta_ef",
      "delta_af",   "delta_be",      "normalization",  "load_start", "load_end",
      "load_steps", "seed",          "sim_duration_s", "warmup_s", "fidelity"};
  return keys;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

class Entries {
 public:
  explicit Entries(std::map<std::string, Entry> entries) : entries_(std::move(entries)) {}

  bool has(const std::string& key) const { return entries_.count(key) != 0; }
  std::size_t line(const std::string& key) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? 0 : it->second.line;
  }

  double real(const std::string& key, double fallback) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    const std::string& text = it->second.value;
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value))
      throw ParseError(it->second.line, "'" + key + "' expects a number, got '" + text + "'");
    return value;
  }

  std::uint64_t integer(const std::string& key, std::uint64_t fallback) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    const std::string& text = it->second.value;
    std::uint64_t value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size())
      throw ParseError(it->second.line,
                       "'" + key + "' expects a non-negative integer, got '" + text + "'");
    return value;
  }

  std::optional<std::string> word(const std::string& key) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    return it->second.value;
  }

 private:
  std::map<std::string, Entry> entries_;
};

Entries tokenize(std::string_view text) {
  std::map<std::string, Entry> entries;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);

    // Glue "key = value" into "key=value" so pairs split on whitespace.
    std::string glued;
    for (std::size_t i = 0; i < line.size(); ++i) {
      const char ch = line[i];
      if (ch == ' ' || ch == '\t' || ch == '\r') {
        const auto next = line.find_first_not_of(" \t\r", i);
        const bool before_eq = next != std::string_view::npos && line[next] == '=';
        const bool after_eq = !glued.empty() && glued.back() == '=';
        if (before_eq || after_eq) continue;
        if (!glued.empty() && glued.back() != ' ') glued.push_back(' ');
        continue;
      }
      glued.push_back(ch);
    }

    std::string_view rest = trim(glued);
    while (!rest.empty()) {
      const auto space = rest.find(' ');
      const std::string_view token = rest.substr(0, space);
      rest = space == std::string_view::npos ? std::string_view{} : trim(rest.substr(space));

      const auto eq = token.find('=');
      if (eq == std::string_view::npos || eq == 0 || eq + 1 == token.size())
        throw ParseError(line_no, "expected key = value, got '" + std::string(token) + "'");
      std::string key(token.substr(0, eq));
      std::string value(token.substr(eq + 1));
      if (known_keys().count(key) == 0)
        throw ParseError(line_no, "unknown key '" + key + "'");
      if (entries.count(key) != 0)
        throw ParseError(line_no, "duplicate key '" + key + "' (first set on line " +
                                      std::to_string(entries.at(key).line) + ")");
      entries.emplace(std::move(key), Entry{std::move(value), line_no});
    }
  }
  return Entries(std::move(entries));
}

std::size_t last_line(const Entries& e, std::initializer_list<const char*> keys) {
  std::size_t line = 0;
  for (const char* k : keys) line = std::max(line, e.line(k));
  return line;
}

}  // namespace

std::vector<double> Scenario::load_grid() const {
  std::vector<double> grid;
  grid.reserve(load_steps);
  if (load_steps == 1) {
    grid.push_back(load_start);
    return grid;
  }
  const double step = (load_end - load_start) / static_cast<double>(load_steps - 1);
  for (std::size_t i = 0; i < load_steps; ++i)
    grid.push_back(i + 1 == load_steps ? load_end : load_start + step * static_cast<double>(i));
  return grid;
}

Scenario default_scenario() { return parse_scenario(""); }

Scenario parse_scenario(std::string_view text) {
  const Entries e = tokenize(text);

  const std::uint64_t n_onus = e.integer("n_onus", 16);
  const double line_rate = e.real("line_rate_bps", 1e9);
  const double guard = e.real("guard_s", 5e-6);
  const std::uint64_t frame = e.integer("frame_bytes", 1500);
  if (frame == 0 || frame > 0xffffffffULL)
    throw ParseError(e.line("frame_bytes"), "frame_bytes must be a positive 32-bit count");
  if (n_onus == 0) throw ParseError(e.line("n_onus"), "n_onus must be at least 1");

  if (e.has("t_max_s") && e.has("w_max_bytes"))
    throw ParseError(last_line(e, {"t_max_s", "w_max_bytes"}),
                     "t_max_s and w_max_bytes are mutually exclusive");

  std::uint64_t w_max = 0;
  if (e.has("w_max_bytes")) {
    w_max = e.integer("w_max_bytes", 0);
  } else {
    try {
      w_max = solve_wmax_for_cycle(n_onus, line_rate, guard, e.real("t_max_s", 2e-3));
    } catch (const Error& err) {
      throw ParseError(last_line(e, {"t_max_s", "n_onus", "guard_s", "line_rate_bps"}),
                       err.what());
    }
  }

  std::optional<SystemConfig> system;
  try {
    system = SystemConfig::homogeneous(n_onus, line_rate, guard,
                                       static_cast<std::uint32_t>(frame), w_max);
  } catch (const Error& err) {
    throw ParseError(last_line(e, {"n_onus", "line_rate_bps", "guard_s", "frame_bytes",
                                   "w_max_bytes", "t_max_s"}),
                     err.what());
  }

  const ClassMap<double> mix = {
      {e.real("mix_ef", 1.0 / 3.0), e.real("mix_af", 1.0 / 3.0), e.real("mix_be", 1.0 / 3.0)}};
  const ClassMap<double> delta = {
      {e.real("delta_ef", 0.5), e.real("delta_af", 0.3), e.real("delta_be", 0.2)}};
  if (std::abs(mix.sum() - 1.0) > kSumTolerance)
    throw ParseError(last_line(e, {"mix_ef", "mix_af", "mix_be"}),
                     "mix_ef + mix_af + mix_be must equal 1");
  if (std::abs(delta.sum() - 1.0) > kSumTolerance)
    throw ParseError(last_line(e, {"delta_ef", "delta_af", "delta_be"}),
                     "delta_ef + delta_af + delta_be must equal 1");

  LoadNormalization normalization = LoadNormalization::ChannelCapacity;
  if (auto word = e.word("normalization")) {
    if (*word == "channel") {
      normalization = LoadNormalization::ChannelCapacity;
    } else if (*word == "guaranteed") {
      normalization = LoadNormalization::GuaranteedBandwidth;
    } else {
      throw ParseError(e.line("normalization"), "normalization must be channel or guaranteed");
    }
  }

  std::optional<TrafficProfile> traffic;
  try {
    traffic = TrafficProfile(mix, delta, 0.0, normalization);
  } catch (const Error& err) {
    throw ParseError(last_line(e, {"mix_ef", "mix_af", "mix_be", "delta_ef", "delta_af",
                                   "delta_be"}),
                     err.what());
  }

  sim::SimConfig sim;
  sim.rng_seed = e.integer("seed", 1);
  sim.duration = e.real("sim_duration_s", 10.0);
  sim.warmup = e.real("warmup_s", 0.1 * sim.duration);
  sim.batch_count = 20;
  sim.fidelity = sim::Fidelity::QueueingNetwork;
  if (auto word = e.word("fidelity")) {
    if (*word == "protocol") {
      sim.fidelity = sim::Fidelity::Protocol;
    } else if (*word == "queueing") {
      sim.fidelity = sim::Fidelity::QueueingNetwork;
    } else {
      throw ParseError(e.line("fidelity"), "fidelity must be protocol or queueing");
    }
  }
  try {
    sim.validate();
  } catch (const Error& err) {
    throw ParseError(last_line(e, {"sim_duration_s", "warmup_s"}), err.what());
  }

  Scenario scenario{*system, *traffic, sim};
  scenario.load_start = e.real("load_start", 0.05);
  scenario.load_end = e.real("load_end", 0.4);
  scenario.load_steps = e.integer("load_steps", 8);
  const std::size_t grid_line = last_line(e, {"load_start", "load_end", "load_steps"});
  if (!(scenario.load_start >= 0.0 && scenario.load_start <= scenario.load_end &&
        scenario.load_end < 1.0))
    throw ParseError(grid_line, "load grid needs 0 <= load_start <= load_end < 1");
  if (scenario.load_steps < 1) throw ParseError(grid_line, "load_steps must be at least 1");
  return scenario;
}

}  // namespace epon
