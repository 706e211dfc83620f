// Command-line front end: analytic tables, simulations, load sweeps and the
// self-check suite.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "epon/errors.hpp"
#include "epon/scenario.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitCheck = 2;

epon::Scenario load_scenario(const std::string& path) {
  if (path.empty()) return epon::default_scenario();
  std::ifstream in(path);
  if (!in) throw epon::ParseError(0, "cannot open config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return epon::parse_scenario(text.str());
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw epon::InvalidArgument("cannot write output file '" + path + "'");
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"EPON upstream performance lab: analytic model, simulation and sweeps"};
  app.require_subcommand(1);

  std::string config_path;
  std::string output_path;
  bool with_sim = false;
  double root_tolerance = 1e-12;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "Scenario file (key = value lines)");
    sub->add_option("--output", output_path, "Output file (default: standard output)");
  };

  CLI::App* analytic = app.add_subcommand("analytic", "Analytic model over the load grid");
  add_common(analytic);
  CLI::App* simulate = app.add_subcommand("simulate", "Simulation over the load grid");
  add_common(simulate);
  CLI::App* sweep = app.add_subcommand("sweep", "Analytic sweep, optionally with simulation");
  add_common(sweep);
  sweep->add_flag("--with-sim", with_sim, "Add simulation columns");
  CLI::App* validate = app.add_subcommand("validate", "Run the oracle self-checks");
  validate->add_option("--output", output_path, "Output file (default: standard output)");
  validate->add_option("--root-tolerance", root_tolerance,
                       "Absolute tolerance of the characteristic-root search")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (validate->parsed()) {
      epon::ValidationOptions options;
      options.root.abs_tolerance = root_tolerance;
      bool all = true;
      std::string text;
      for (const epon::CheckResult& r : epon::validate(options)) {
        all = all && r.passed;
        text += (r.passed ? "PASS " : "FAIL ") + r.name + ": " + r.detail + "\n";
      }
      text += all ? "all checks passed\n" : "one or more checks failed\n";
      write_output(output_path, text);
      return all ? kExitOk : kExitCheck;
    }

    const epon::Scenario scenario = load_scenario(config_path);
    const std::uint32_t frame = scenario.system.frame_length();
    if (analytic->parsed()) {
      const auto rows = epon::run_sweep(scenario, false);
      for (const std::string& note : rows.front().analytic.notes) std::cerr << "# " << note << "\n";
      write_output(output_path, epon::emit_csv(rows, frame));
    } else if (simulate->parsed()) {
      write_output(output_path, epon::emit_simulation_csv(epon::run_sweep(scenario, true)));
    } else if (sweep->parsed()) {
      write_output(output_path, epon::emit_csv(epon::run_sweep(scenario, with_sim), frame));
    }
    return kExitOk;
  } catch (const epon::ParseError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const epon::InvalidArgument& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitCheck;
  }
}
