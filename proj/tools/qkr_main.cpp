// qkr: resonant kicked rotor under a two-branch unitary Kraus channel.
//
//   qkr evolve   --config run.cfg [--out DIR] [--alpha 0.3 ...]
//   qkr sweep    grid.txt [--config base.cfg] [--out DIR] [--workers N]
//   qkr fig1|fig2|fig3 [--out DIR] [--workers N]
//   qkr selftest
//
// Exit codes: 0 success, 1 configuration error, 2 numerical failure,
// 3 selftest failure.

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "qkr/config.hpp"
#include "qkr/errors.hpp"
#include "qkr/experiment.hpp"
#include "qkr/selftest.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitSelftest = 3;

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw qkr::ConfigError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Options shared by every run-producing subcommand.
struct RunFlags {
  std::string config_path;
  std::string out_dir;
  int workers = 1;
  std::map<std::string, std::string> overrides;

  void attach(CLI::App* app) {
    app->add_option("--config", config_path, "key=value config file")->check(CLI::ExistingFile);
    app->add_option("--out", out_dir, "output directory");
    app->add_option("--workers", workers, "concurrent workers")->check(CLI::PositiveNumber);
    app->add_option_function<std::string>(
        "--seed", [this](const std::string& v) { overrides["seed"] = v; }, "random seed (monte-carlo)");
    app->add_option_function<std::string>(
        "--fit-window", [this](const std::string& v) { overrides["fit_window"] = v; },
        "trailing samples used by exponent fits (0 = default)");
    for (const auto key : qkr::config_keys()) {
      if (key == "seed" || key == "fit_window" || key == "output") continue;
      const std::string name(key);
      app->add_option_function<std::string>(
          "--" + name, [this, name](const std::string& v) { overrides[name] = v; }, "override config key " + name);
    }
  }

  // File values first, flags on top.
  qkr::ExperimentConfig base() const {
    qkr::ExperimentConfig cfg;
    if (!config_path.empty()) cfg = qkr::parse_settings(read_text(config_path), cfg);
    apply(cfg);
    return cfg;
  }

  void apply(qkr::ExperimentConfig& cfg) const {
    for (const auto& [k, v] : overrides) {
      try {
        qkr::apply_setting(cfg, k, v);
      } catch (const qkr::ConfigError& e) {
        throw qkr::ConfigError(std::string("--") + k + ": " + e.what());
      }
    }
    if (!out_dir.empty()) cfg.output = out_dir;
  }

  std::filesystem::path output(const qkr::ExperimentConfig& cfg) const {
    if (!out_dir.empty()) return out_dir;
    if (!cfg.output.empty()) return cfg.output;
    return ".";
  }
};

int report_sweep(const std::vector<qkr::SweepPoint>& points, const std::filesystem::path& dir) {
  qkr::write_sweep_summary(std::cout, points);
  std::cout << "wrote " << points.size() << " point(s) and summary to " << dir.string() << '\n';
  for (const auto& pt : points) {
    if (!pt.error.empty()) return kExitNumerical;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Resonant quantum kicked rotor under a two-branch unitary Kraus channel"};
  app.require_subcommand(1);

  RunFlags evolve_flags;
  auto* evolve_cmd = app.add_subcommand("evolve", "run one experiment");
  evolve_flags.attach(evolve_cmd);

  RunFlags sweep_flags;
  std::string grid_path;
  auto* sweep_cmd = app.add_subcommand("sweep", "run every point of a grid file");
  sweep_cmd->add_option("grid_file", grid_path, "grid file: key=value blocks separated by ---")
      ->required()
      ->check(CLI::ExistingFile);
  sweep_flags.attach(sweep_cmd);

  std::map<std::string, RunFlags> preset_flags;
  std::map<std::string, CLI::App*> preset_cmds;
  for (const char* name : {"fig1", "fig2", "fig3"}) {
    auto* cmd = app.add_subcommand(name, std::string("reference parameter set ") + name);
    preset_flags[name].attach(cmd);
    preset_cmds[name] = cmd;
  }

  auto* selftest_cmd = app.add_subcommand("selftest", "run the invariant suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*evolve_cmd) {
      qkr::ExperimentConfig cfg = evolve_flags.base();
      qkr::validate(cfg);
      const auto result = qkr::run_experiment(cfg, evolve_flags.workers);
      const auto files = qkr::write_experiment(result, evolve_flags.output(cfg));
      qkr::write_fit_summary(std::cout, result);
      std::cout << "wrote " << files.series_csv.string() << '\n';
      return kExitOk;
    }
    if (*sweep_cmd) {
      const qkr::ExperimentConfig base = sweep_flags.base();
      auto grid = qkr::parse_grid(read_text(grid_path), base);
      const auto dir = sweep_flags.output(base);
      return report_sweep(qkr::run_sweep(grid, dir, sweep_flags.workers), dir);
    }
    for (auto& [name, cmd] : preset_cmds) {
      if (!*cmd) continue;
      const RunFlags& flags = preset_flags[name];
      auto grid = qkr::preset(name);
      for (auto& cfg : grid) {
        flags.apply(cfg);
        qkr::validate(cfg);
      }
      const std::filesystem::path dir = flags.out_dir.empty() ? std::filesystem::path(name) : std::filesystem::path(flags.out_dir);
      return report_sweep(qkr::run_sweep(grid, dir, flags.workers), dir);
    }
    if (*selftest_cmd) {
      bool all = true;
      for (const auto& r : qkr::run_selftest()) {
        std::cout << (r.passed ? "[PASS] " : "[FAIL] ") << r.name << ": " << r.detail << '\n';
        all = all && r.passed;
      }
      return all ? kExitOk : kExitSelftest;
    }
  } catch (const qkr::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const qkr::TruncationError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const qkr::ResourceError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const qkr::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitOk;
}
