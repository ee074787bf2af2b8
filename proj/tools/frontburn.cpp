// frontburn: sweeps of the layered KPP front model, bound checks and
// functional-inequality self tests.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "frontburn/experiment.hpp"
#include "frontburn/inequality.hpp"

namespace fb = frontburn;

namespace {

struct Overrides {
  std::map<std::string, std::string> values;

  void attach(CLI::App* cmd) {
    for (const auto& key : fb::config_keys()) {
      cmd->add_option("--" + key, values[key], "override config key " + key);
    }
  }

  void apply(fb::ExperimentConfig& cfg, CLI::App* cmd) const {
    for (const auto& [key, value] : values) {
      if (cmd->count("--" + key) > 0) fb::override_setting(cfg, key, value);
    }
  }
};

void print_warnings(const std::vector<fb::RunOutcome>& outcomes) {
  for (const auto& o : outcomes) {
    for (const auto& w : o.warnings) {
      std::fprintf(stderr, "warning (A=%g, kappa=%g): %s\n", o.row.A, o.row.kappa, w.c_str());
    }
  }
}

void print_summary(const std::vector<fb::RunOutcome>& outcomes) {
  std::printf("%8s %8s %14s %14s %12s\n", "A", "kappa", "v_avg", "v_timederiv", "max_clamp");
  for (const auto& o : outcomes) {
    std::printf("%8g %8g %14.8f %14.8f %12.3g\n", o.row.A, o.row.kappa, o.row.v_avg,
                o.v_timederiv_avg, o.max_clamp);
  }
}

int run_command(const fb::ExperimentConfig& cfg) {
  const auto outcomes = fb::run_experiment(cfg);
  print_warnings(outcomes);
  print_summary(outcomes);
  fb::emit_reports(outcomes, cfg.output_dir, cfg.trace_stride, cfg.write_traces);
  std::printf("reports written to %s\n", cfg.output_dir.c_str());
  return 0;
}

int check_bounds_command(const fb::ExperimentConfig& cfg) {
  const auto outcomes = fb::run_experiment(cfg);
  print_warnings(outcomes);
  bool all_pass = true;
  for (const auto& o : outcomes) {
    for (const auto& r : o.reports) {
      all_pass = all_pass && r.pass;
      std::printf("%-4s A=%-6g kappa=%-6g %-11s tau=%-8g measured=%-14.8g rhs=%-14.8g margin=%-14.8g%s\n",
                  r.pass ? "PASS" : "FAIL", o.row.A, o.row.kappa, fb::to_string(r.kind).c_str(),
                  r.tau, r.measured, r.rhs, r.margin,
                  r.unverified_constant ? " (unverified constant)" : "");
    }
  }
  return all_pass ? 0 : 1;
}

int fineq_command(double dx, std::size_t seeds, std::uint64_t first_seed) {
  const auto result = fb::run_fineq_selftest(dx, seeds, first_seed);
  std::printf("extremal profile: dirichlet=%.9f reaction=%.9f product=%.9f target=%.9f %s\n",
              result.extremal.dirichlet, result.extremal.reaction, result.extremal.product,
              fb::kFineqConstant, result.extremal_ok() ? "PASS" : "FAIL");
  std::printf("random profiles: %zu seeds, worst product/(pi/8)^2 = %.6f (seed %llu) %s\n",
              result.seeds, result.worst_ratio,
              static_cast<unsigned long long>(result.worst_seed),
              result.random_ok() ? "PASS" : "FAIL");
  std::printf("elapsed %.2f s\n", result.seconds);
  return result.pass() ? 0 : 1;
}

int fit_command(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  const auto rows = fb::read_sweep_csv(in);
  fb::write_slopes_csv(std::cout, fb::fit_slopes(rows));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Front propagation in coupled KPP layers with drift"};
  app.require_subcommand(1);

  std::string run_config;
  Overrides run_overrides;
  auto* run = app.add_subcommand("run", "simulate a sweep and write CSV reports");
  run->add_option("config", run_config, "experiment config file")->required()->check(CLI::ExistingFile);
  run_overrides.attach(run);

  std::string check_config;
  Overrides check_overrides;
  auto* check = app.add_subcommand("check-bounds", "simulate a sweep and check every lower bound");
  check->add_option("config", check_config, "experiment config file")->required()->check(CLI::ExistingFile);
  check_overrides.attach(check);

  double dx = 1e-3;
  std::size_t seeds = 1000;
  std::uint64_t first_seed = 1;
  auto* fineq = app.add_subcommand("fineq-selftest", "verify the sharp functional inequality");
  fineq->add_option("--dx", dx, "grid spacing")->capture_default_str();
  fineq->add_option("--seeds", seeds, "number of random profiles")->capture_default_str();
  fineq->add_option("--first-seed", first_seed, "first random seed")->capture_default_str();

  std::string sweep_csv;
  auto* fit = app.add_subcommand("fit", "fit v_avg against A per kappa from a sweep.csv");
  fit->add_option("sweep", sweep_csv, "sweep.csv")->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      auto cfg = fb::load_config(run_config);
      run_overrides.apply(cfg, run);
      return run_command(cfg);
    }
    if (*check) {
      auto cfg = fb::load_config(check_config);
      check_overrides.apply(cfg, check);
      return check_bounds_command(cfg);
    }
    if (*fineq) return fineq_command(dx, seeds, first_seed);
    if (*fit) return fit_command(sweep_csv);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "frontburn: %s\n", e.what());
    return 2;
  }
  return 0;
}
