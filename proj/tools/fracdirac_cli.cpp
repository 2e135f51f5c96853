#include <iostream>

#include <CLI11.hpp>
#include <omp.h>

#include "fracdirac/experiments.hpp"

namespace {

enum ExitCode { kOk = 0, kConfig = 2, kContract = 3, kSolver = 4, kOther = 1 };

}  // namespace

int main(int argc, char** argv) {
  using namespace fracdirac;
  CLI::App app{"Dirac points and effective envelope dynamics for fractional Schroedinger operators on honeycomb lattices"};
  app.require_subcommand(1, 1);

  std::string configPath, preset, outDir;
  int threads = -1;
  const std::pair<const char*, const char*> commands[] = {
      {"bands", "band tables along a path, on a grid around K, or at random k"},
      {"dirac", "Dirac point report: E_D, vF, theta, b1, b2, cone fit, gap table"},
      {"evolve", "one fNLS run against the envelope system, with snapshots"},
      {"validate", "epsilon convergence study of the approximation error"},
      {"shallow-check", "weak-potential asymptotics at K"},
      {"product-rule", "residual of the fractional product rule"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", configPath, "JSON config file (overlays the preset)")->check(CLI::ExistingFile);
    sub->add_option("--preset", preset, "named preset from the presets directory");
    sub->add_option("--out", outDir, "output directory");
    sub->add_option("--threads", threads, "OpenMP threads (0: runtime default)")->check(CLI::NonNegativeNumber);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    RunConfig cfg = parse_config(load_config_json(preset, configPath));
    cfg.experiment = experiment_from_string(app.get_subcommands().front()->get_name());
    if (!outDir.empty()) cfg.outDir = outDir;
    if (threads >= 0) cfg.threads = threads;
    if (cfg.threads > 0) omp_set_num_threads(cfg.threads);
    run_experiment(cfg, std::cout);
    return kOk;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const ContractError& e) {
    std::cerr << "contract failure: " << e.what() << '\n';
    return kContract;
  } catch (const SolverError& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return kSolver;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kOther;
  }
}
