// Experiment runner: config in, replicated simulations in parallel,
// CSV/JSON reports and verdicts out.
//
//   donsker simulate --config cfg [--workers N] [--out DIR]
//   donsker verify   --config cfg [--workers N] [--out DIR]
//   donsker soak     --config cfg --runs R [--workers N]
//
// Exit code 0 iff all suites meet their expected verdicts (the
// negligibility_violation negative control is expected to reject).

#include <cmath>
#include <iostream>
#include <map>
#include <random>
#include <thread>

#include "CLI11.hpp"

#include "donsker/errors.hpp"
#include "donsker/harness.hpp"

namespace {

void print_timings(const donsker::ExperimentResult& result) {
  for (const auto& t : result.timings) {
    std::cerr << "  " << t.phase << ": " << t.seconds << " s\n";
  }
}

int run_once(const std::string& config_path, unsigned workers,
             const std::string& out_dir, bool write_reports) {
  const auto config = donsker::load_config(config_path);
  const auto result =
      donsker::run_experiment(config, donsker::RunOptions{workers});
  donsker::print_summary(result, std::cout);
  print_timings(result);
  if (write_reports) {
    donsker::emit_report(result, donsker::ReportFormat::csv,
                         out_dir + "/report.csv");
    donsker::emit_report(result, donsker::ReportFormat::json,
                         out_dir + "/report.json");
    std::cout << "reports written to " << out_dir << "/report.{csv,json}\n";
  }
  const bool ok = donsker::all_expected(result);
  std::cout << (ok ? "ALL CHECKS MET EXPECTATIONS\n"
                   : "SOME CHECKS DID NOT MEET EXPECTATIONS\n");
  return ok ? 0 : 1;
}

int run_soak(const std::string& config_path, unsigned workers,
             std::uint64_t runs) {
  auto config = donsker::load_config(config_path);
  std::random_device entropy;

  std::map<std::string, std::uint64_t> misses;
  double budget = 0.0;
  std::uint64_t total_misses = 0;

  for (std::uint64_t run = 0; run < runs; ++run) {
    config.seed = (static_cast<std::uint64_t>(entropy()) << 32) ^ entropy();
    std::cout << "soak run " << run + 1 << "/" << runs
              << " seed=" << config.seed << "\n";
    const auto result =
        donsker::run_experiment(config, donsker::RunOptions{workers});
    for (const auto& cr : result.checks) {
      budget += cr.soak_alpha;
      if (!cr.as_expected()) {
        const std::string key = std::string(donsker::to_string(cr.suite)) +
                                "/" + cr.check + "/n=" + std::to_string(cr.n);
        ++misses[key];
        ++total_misses;
        std::cout << "  miss: " << key << " stat=" << cr.report.statistic
                  << " thr=" << cr.report.threshold << "\n";
      }
    }
  }

  // Poisson-style upper band around the summed nominal failure budget.
  const double bound = budget + 4.0 * std::sqrt(budget) + 1.0;
  std::cout << "soak: " << total_misses << " unexpected verdicts over " << runs
            << " runs; budget=" << budget << " bound=" << bound << "\n";
  for (const auto& [key, count] : misses) {
    std::cout << "  " << key << ": " << count << "\n";
  }
  const bool ok = static_cast<double>(total_misses) <= bound;
  std::cout << (ok ? "SOAK WITHIN BUDGET\n" : "SOAK EXCEEDED BUDGET\n");
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo verification of partial-sum and empirical "
               "process scaling limits under deletion schedules"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  std::uint64_t runs = 10;

  auto* simulate = app.add_subcommand(
      "simulate", "run the configured suites and write reports");
  simulate->add_option("--config", config_path, "experiment config file")
      ->required();
  simulate->add_option("--workers", workers, "worker threads");
  simulate->add_option("--out", out_dir, "output directory");

  auto* verify = app.add_subcommand(
      "verify", "golden-seed acceptance mode: run and check expectations");
  verify->add_option("--config", config_path, "experiment config file")
      ->required();
  verify->add_option("--workers", workers, "worker threads");

  auto* soak = app.add_subcommand(
      "soak", "re-run with random seeds and check the failure rate");
  soak->add_option("--config", config_path, "experiment config file")
      ->required();
  soak->add_option("--runs", runs, "number of soak runs");
  soak->add_option("--workers", workers, "worker threads");

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) return run_once(config_path, workers, out_dir, true);
    if (verify->parsed()) return run_once(config_path, workers, "", false);
    if (soak->parsed()) return run_soak(config_path, workers, runs);
  } catch (const donsker::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
