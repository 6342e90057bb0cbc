// Command-line driver: one subcommand per experiment mode, a config file as
// the single positional argument, and a handful of overrides. Exit codes:
// 0 = all enabled checks passed, 1 = at least one check failed, 2 = error
// (bad config, runtime failure).
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"

#include "ccsim/config.hpp"
#include "ccsim/experiments.hpp"

namespace {

void apply_threads(int cli_threads) {
  int n = cli_threads;
  if (n <= 0) {
    if (const char* env = std::getenv("CCSIM_THREADS")) {
      try {
        n = std::stoi(env);
      } catch (const std::exception&) {
        throw std::runtime_error(std::string("CCSIM_THREADS is not an integer: ") + env);
      }
      if (n <= 0) throw std::runtime_error("CCSIM_THREADS must be positive");
    }
  }
#ifdef _OPENMP
  if (n > 0) omp_set_num_threads(n);
#else
  if (n > 1) std::fprintf(stderr, "note: built without OpenMP; --threads ignored\n");
#endif
}

struct ModeArgs {
  std::string config_path;
  std::string out_dir;
  long long seed = -1;
  int threads = 0;
};

void add_common(CLI::App* sub, ModeArgs& a) {
  sub->add_option("config", a.config_path, "experiment config file")
      ->required()
      ->check(CLI::ExistingFile);
  sub->add_option("--out", a.out_dir, "output directory (overrides config)");
  sub->add_option("--seed", a.seed, "seed override")->check(CLI::NonNegativeNumber);
  sub->add_option("--threads", a.threads, "worker thread count (overrides CCSIM_THREADS)")
      ->check(CLI::PositiveNumber);
}

int run_mode(const ModeArgs& a, const std::string& expected_mode) {
  apply_threads(a.threads);
  ccsim::ExperimentConfig cfg = ccsim::load_experiment_config(a.config_path);
  if (cfg.mode != expected_mode) {
    throw std::runtime_error("config " + a.config_path + " declares mode=" + cfg.mode +
                             " but the subcommand expects mode=" + expected_mode);
  }
  if (!a.out_dir.empty()) cfg.out_dir = a.out_dir;
  if (a.seed >= 0) {
    cfg.seed = static_cast<uint64_t>(a.seed);
    cfg.scenario.seed = cfg.seed;
  }
  const ccsim::ExperimentResult res = ccsim::run_experiment(cfg);
  for (const ccsim::CheckOutcome& c : res.checks) {
    std::printf("%-22s %s  %s\n", c.id.c_str(), c.pass ? "PASS" : "FAIL",
                c.detail.c_str());
  }
  std::printf("artifacts: %s\n", res.out_dir.c_str());
  return res.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"chemotaxis-consumption finite-volume simulator and certification harness"};
  app.require_subcommand(1);

  ModeArgs sim_args, sweep_args, asym_args, ineq_args;
  add_common(app.add_subcommand("simulate", "single run with invariant checks"), sim_args);
  add_common(app.add_subcommand("sweep", "regularization-parameter sweep"), sweep_args);
  add_common(app.add_subcommand("asymptotics", "long-horizon decay campaign"), asym_args);
  add_common(app.add_subcommand("inequalities", "functional-inequality ensemble"),
             ineq_args);

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("simulate")) return run_mode(sim_args, "simulate");
    if (app.got_subcommand("sweep")) return run_mode(sweep_args, "eps_sweep");
    if (app.got_subcommand("asymptotics")) return run_mode(asym_args, "asymptotics");
    return run_mode(ineq_args, "inequalities");
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
