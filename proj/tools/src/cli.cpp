#include "ntnlab_cli/cli.hpp"

#include <CLI11.hpp>
#include <optional>

#include "commands.hpp"
#include "ntnlab/error.hpp"

namespace ntn::cli {

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Satellite link laboratory: geometry, delay, Doppler, access and stack simulation"};
  app.name("ntnlab");
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed;
  std::string format = "csv";
  app.add_option("--config", config_path, "Scenario file (INI)")->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "Output directory")->capture_default_str();
  app.add_option("--seed", seed, "Overrides run.seed");
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"csv"}));

  auto* trace = app.add_subcommand("trace", "Per-sample elevation, range, delay and Doppler");
  std::size_t ue = 0;
  trace->add_option("--ue", ue, "UE index (0 is the reference UE)")->capture_default_str();

  auto* pass = app.add_subcommand("pass", "Visibility passes above the elevation mask");
  auto* access = app.add_subcommand("access", "Timing advance, PRACH budget, frequency offsets");

  auto* simulate = app.add_subcommand("simulate", "HARQ / RLC AM / PDCP stack simulation");
  int sweep = 1;
  simulate->add_option("--sweep", sweep, "Number of consecutive seeds, run concurrently")
      ->capture_default_str();
  std::optional<std::int64_t> bin_width;
  simulate->add_option("--bin-width-us", bin_width, "Histogram bin width (overrides run.bin_width_us)");

  auto* coverage = app.add_subcommand("coverage", "Serving timeline, beam dwell and TAU counts");

  auto* report = app.add_subcommand("report", "Replay a figure recipe");
  std::string recipe;
  report->add_option("recipe", recipe, "Recipe name")
      ->required()
      ->check(CLI::IsMember(recipe_names()));

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitConfig;
  }

  Scenario sc;
  try {
    if (!config_path.empty()) sc = load_scenario(config_path);
    if (seed) sc.run.seed = *seed;
    if (bin_width) {
      sc.run.bin_width_us = *bin_width;
      sc.run.validate();
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    const fs::path dir(out_dir);
    fs::create_directories(dir);
    write_text(dir / "scenario.ini", serialize_scenario(sc));

    std::string summary;
    if (*trace) {
      summary = cmd_trace(sc, ue, dir);
    } else if (*pass) {
      summary = cmd_pass(sc);
    } else if (*access) {
      summary = cmd_access(sc);
    } else if (*simulate) {
      summary = cmd_simulate(sc, dir, sweep);
    } else if (*coverage) {
      summary = cmd_coverage(sc, dir);
    } else if (*report) {
      summary = run_recipe(recipe, sc, dir);
    }
    write_text(dir / "summary.txt", summary);
    out << summary;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

}  // namespace ntn::cli
