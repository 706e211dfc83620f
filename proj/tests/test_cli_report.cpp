#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "epon/errors.hpp"
#include "epon/scenario.hpp"

using namespace epon;

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) out.push_back(item);
  if (!text.empty() && text.back() == sep && sep != '\n') out.emplace_back();
  return out;
}

std::vector<std::vector<std::string>> csv_cells(const std::string& csv) {
  std::vector<std::vector<std::string>> rows;
  for (const std::string& line : split(csv, '\n')) {
    rows.push_back(split(line, ','));
  }
  return rows;
}

std::size_t parse_line(const std::string& text) {
  try {
    parse_scenario(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

}  // namespace

TEST_CASE("default scenario") {
  const Scenario s = parse_scenario("");
  CHECK(s.system.n_onus() == 16);
  CHECK(s.system.line_rate() == 1e9);
  CHECK(s.system.guard() == 5e-6);
  CHECK(s.system.frame_length() == 1500);
  CHECK(s.system.w_max()[0] == 15000);
  CHECK(compute_max_cycle(s.system) == doctest::Approx(2e-3).epsilon(1e-12));
  for (double a : s.traffic.mix().values) CHECK(a == doctest::Approx(1.0 / 3));
  CHECK(s.traffic.weights() == ClassMap<double>{{0.5, 0.3, 0.2}});
  CHECK(s.traffic.normalization() == LoadNormalization::ChannelCapacity);
  CHECK(s.sim.rng_seed == 1);
  CHECK(s.load_grid().size() == 8);
}

TEST_CASE("parsing") {
  SUBCASE("several pairs per line, comments, spacing") {
    const Scenario s = parse_scenario(
        "# skewed mix\nmix_ef=0.2  mix_af=0.3  mix_be=0.5\n  n_onus = 8 # fewer ONUs\n"
        "normalization = guaranteed\nfidelity=protocol\nw_max_bytes=3000\n");
    CHECK(s.traffic.mix() == ClassMap<double>{{0.2, 0.3, 0.5}});
    CHECK(s.system.n_onus() == 8);
    CHECK(s.system.w_max()[7] == 3000);
    CHECK(s.traffic.normalization() == LoadNormalization::GuaranteedBandwidth);
    CHECK(s.sim.fidelity == sim::Fidelity::Protocol);
  }
  SUBCASE("errors name the offending line") {
    CHECK(parse_line("n_onus=4\nbogus=1\n") == 2);
    CHECK(parse_line("seed=1\n\nseed=2\n") == 3);
    CHECK(parse_line("t_max_s=2e-3\nw_max_bytes=15000\n") == 2);
    CHECK(parse_line("mix_ef=0.5 mix_af=0.6 mix_be=0.1\n") == 1);
    CHECK(parse_line("delta_ef=0.9\n") == 1);
    CHECK(parse_line("guard_s=abc\n") == 1);
    CHECK(parse_line("n_onus=-3\n") == 1);
    CHECK(parse_line("load_start=0.5\nload_end=0.2\n") == 2);
    CHECK(parse_line("justakey\n") == 1);
    CHECK(parse_line("normalization=bits\n") == 1);
    CHECK(parse_line("warmup_s=20 sim_duration_s=10\n") == 1);
    CHECK(parse_line("t_max_s=1e-5\n") == 1);
    CHECK_THROWS_AS(parse_scenario("mix_ef=0.5 mix_af=0.6 mix_be=0.1"), ParseError);
  }
}

TEST_CASE("load grid") {
  Scenario s = default_scenario();
  const auto grid = s.load_grid();
  CHECK(grid.front() == 0.05);
  CHECK(grid.back() == 0.4);
  for (std::size_t i = 1; i < grid.size(); ++i)
    CHECK(grid[i] - grid[i - 1] == doctest::Approx(0.05).epsilon(1e-12));
  s.load_steps = 1;
  CHECK(s.load_grid() == std::vector<double>{0.05});
}

TEST_CASE("sweep rows") {
  SUBCASE("single zero-load point") {
    const Scenario s = parse_scenario("load_start=0 load_end=0 load_steps=1");
    const auto rows = run_sweep(s, false);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].lambda == 0.0);
    CHECK(rows[0].analytic.expected_count == 0.0);
    const auto cells = csv_cells(emit_csv(rows, 1500));
    CHECK(cells[1][8] == "0");
    CHECK(cells[1][12] == "0");
  }
  SUBCASE("delay increases along the stable part of the grid") {
    const Scenario s = parse_scenario("load_start=0.001 load_end=0.035 load_steps=30");
    const auto rows = run_sweep(s, false);
    for (std::size_t i = 1; i < rows.size(); ++i) {
      REQUIRE(rows[i].analytic.stable);
      CHECK(rows[i].analytic.mean_delay > rows[i - 1].analytic.mean_delay);
    }
  }
  SUBCASE("past the BE crossing") {
    const Scenario s = parse_scenario("load_start=0.04 load_end=0.04 load_steps=1");
    const auto& a = run_sweep(s, false)[0].analytic;
    CHECK_FALSE(a.class_stations[TrafficClass::BE].stable);
    CHECK(a.class_stations[TrafficClass::EF].stable);
    CHECK(a.class_stations[TrafficClass::AF].stable);
    CHECK_FALSE(a.stable);
  }
  SUBCASE("rows are ordered and seeded per point") {
    const Scenario s = parse_scenario(
        "load_start=0.01 load_end=0.02 load_steps=3 fidelity=queueing sim_duration_s=20");
    const auto rows = run_sweep(s, true);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      CHECK(rows[i].load == s.load_grid()[i]);
      REQUIRE(rows[i].simulation.has_value());
    }
    CHECK(rows[0].simulation->mean_delay_total != rows[1].simulation->mean_delay_total);
  }
  SUBCASE("unstable points skip the queueing simulation") {
    const Scenario s = parse_scenario(
        "load_start=0.1 load_end=0.1 load_steps=1 fidelity=queueing sim_duration_s=1");
    CHECK_FALSE(run_sweep(s, true)[0].simulation.has_value());
  }
}

TEST_CASE("CSV contract") {
  SUBCASE("header and line counts") {
    const Scenario one = parse_scenario("load_start=0.02 load_end=0.02 load_steps=1");
    const std::string csv = emit_csv(run_sweep(one, false), 1500);
    CHECK(csv.back() == '\n');
    CHECK(split(csv, '\n').size() == 2);
    CHECK(split(csv, '\n')[0] == kSweepHeader);
    CHECK(split(emit_csv(run_sweep(default_scenario(), false), 1500), '\n').size() == 9);
    CHECK_THROWS_AS(emit_csv({}, 1500), EmptyOutput);
  }
  SUBCASE("unstable cells are empty, every row has every column") {
    const auto cells = csv_cells(emit_csv(run_sweep(default_scenario(), false), 1500));
    const std::size_t columns = cells[0].size();
    CHECK(columns == 19);
    for (std::size_t i = 1; i < cells.size(); ++i) {
      CHECK(cells[i].size() == columns);
      CHECK(cells[i][6] == "0");
      CHECK(cells[i][10].empty());   // en_be_pkts
      CHECK(cells[i][16].empty());   // et_total_s
      CHECK(cells[i][17].empty());   // no simulation requested
    }
  }
  SUBCASE("byte column is recomputable from the packet columns") {
    const Scenario s = parse_scenario("load_start=0.002 load_end=0.034 load_steps=9");
    const auto cells = csv_cells(emit_csv(run_sweep(s, false), 1500));
    for (std::size_t i = 1; i < cells.size(); ++i) {
      double packets = 0.0;
      for (std::size_t col = 8; col <= 11; ++col) packets += std::stod(cells[i][col]);
      CHECK(std::stod(cells[i][12]) == 1500 * packets);
      CHECK(cells[i][0].find(',') == std::string::npos);
    }
  }
  SUBCASE("numbers keep round-trip precision") {
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(1.0 / 3.0) == "0.3333333333333333");
    CHECK(std::stod(format_number(2.0 / 3.0)) == 2.0 / 3.0);
    CHECK(format_number(std::nan("")).empty());
    CHECK(format_number(INFINITY).empty());
  }
  SUBCASE("independent of the global locale") {
    try {
      std::locale::global(std::locale("de_DE.UTF-8"));
    } catch (const std::exception&) {
    }
    CHECK(format_number(0.25) == "0.25");
    std::locale::global(std::locale::classic());
  }
}

TEST_CASE("validate suite") {
  const auto results = validate();
  CHECK(results.size() >= 6);
  for (const CheckResult& r : results) CHECK_MESSAGE(r.passed, r.name << ": " << r.detail);

  ValidationOptions faulty;
  faulty.root.abs_tolerance = 1e-2;
  bool ctmc_failed = false;
  for (const CheckResult& r : validate(faulty))
    if (r.name == "ctmc_equivalence_batch") ctmc_failed = !r.passed;
  CHECK(ctmc_failed);
}

// ---------------------------------------------------------------------------
// The command-line binary.

namespace {

namespace fs = std::filesystem;

struct Run {
  int status;
  std::string output;
};

Run run_cli(const std::string& args) {
  static int counter = 0;
  const fs::path out = fs::temp_directory_path() / ("epon_cli_" + std::to_string(++counter) + ".txt");
  const std::string cmd =
      std::string(EPON_LAB_PATH) + " " + args + " > " + out.string() + " 2>/dev/null";
  const int raw = std::system(cmd.c_str());
  std::ifstream in(out);
  std::ostringstream text;
  text << in.rdbuf();
  fs::remove(out);
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, text.str()};
}

fs::path write_config(const std::string& name, const std::string& text) {
  const fs::path path = fs::temp_directory_path() / name;
  std::ofstream(path) << text;
  return path;
}

}  // namespace

TEST_CASE("CLI subcommands and exit codes") {
  const Run sweep = run_cli("sweep");
  CHECK(sweep.status == 0);
  CHECK(split(sweep.output, '\n').size() == 9);

  const Run analytic = run_cli("analytic");
  CHECK(analytic.status == 0);
  CHECK(analytic.output == sweep.output);

  const fs::path bad = write_config("epon_bad.cfg", "mix_ef=0.5 mix_af=0.6 mix_be=0.1\n");
  CHECK(run_cli("sweep --config " + bad.string()).status == 1);
  CHECK(run_cli("sweep --config /nonexistent/epon.cfg").status == 1);
  CHECK(run_cli("bogus").status == 1);

  const Run ok = run_cli("validate");
  CHECK(ok.status == 0);
  CHECK(split(ok.output, '\n').size() >= 7);
  CHECK(run_cli("validate --root-tolerance 1e-2").status == 2);

  const fs::path sim = write_config(
      "epon_sim.cfg", "load_start=0.01 load_end=0.03 load_steps=3 fidelity=protocol sim_duration_s=0.5\n");
  const Run simulate = run_cli("simulate --config " + sim.string());
  CHECK(simulate.status == 0);
  CHECK(split(simulate.output, '\n').size() == 4);

  const fs::path target = fs::temp_directory_path() / "epon_out.csv";
  CHECK(run_cli("sweep --output " + target.string()).status == 0);
  std::ifstream written(target);
  std::ostringstream text;
  text << written.rdbuf();
  CHECK(text.str() == sweep.output);
  fs::remove(target);
  fs::remove(bad);
  fs::remove(sim);
}
