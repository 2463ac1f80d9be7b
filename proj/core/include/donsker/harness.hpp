#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "donsker/deletion.hpp"
#include "donsker/sampling.hpp"
#include "donsker/stats.hpp"

namespace donsker {

// The seven statistical suites. negligibility_violation is a built-in
// negative control: its KS check must REJECT for the suite to count as
// meeting expectations.
enum class SuiteKind {
  donsker_complete,
  donsker_deleted,
  polygonal,
  empirical_bridge,
  sequential_km,
  lemma2_structure,
  negligibility_violation,
};

struct ExperimentConfig {
  std::string name = "experiment";
  DistributionSpec distribution;
  std::vector<std::uint64_t> n_list;
  std::uint64_t grid_size = 100;
  DeletionSchedule schedule;  // defaults to none
  SelectionRule selection = SelectionRule::random_per_time;
  std::uint64_t replications = 0;
  std::uint64_t seed = 0;
  std::vector<SuiteKind> suites;
};

// Flat key = value format, '#' comments, one key per line. Unknown or
// duplicate keys are hard errors. Keys:
//   name, distribution, sigma, n_list, grid_size, schedule, k, r,
//   selection, replications, seed, suites
// distribution/n_list/replications/seed/suites are required; k is
// required with schedule=fixed_k and r with schedule=power_law (and are
// rejected otherwise).
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::string& path);
void validate_config(const ExperimentConfig& config);

struct OverlayPoint {
  double x = 0.0;
  double empirical = 0.0;
  double oracle = 0.0;
};

struct CheckResult {
  SuiteKind suite = SuiteKind::donsker_complete;
  std::string check;  // short identifier, stable across runs
  std::uint64_t n = 0;
  std::uint64_t k_star = 0;
  TestReport report;
  Verdict expected = Verdict::pass;
  double soak_alpha = 0.01;  // nominal failure budget under random seeds
  std::vector<OverlayPoint> overlay;  // cdf overlay data for KS checks

  bool as_expected() const { return report.verdict == expected; }
};

struct PhaseTiming {
  std::string phase;
  double seconds = 0.0;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<CheckResult> checks;
  std::vector<PhaseTiming> timings;  // informational; never serialized
  bool complete = true;
};

struct RunOptions {
  unsigned workers = 1;
};

// Runs every requested suite for every n. Output bits depend only on the
// config (replication streams are keyed by (seed, suite, n, replication),
// and aggregation is a fixed-order pairwise reduction), so worker count
// never changes results.
ExperimentResult run_experiment(const ExperimentConfig& config,
                                const RunOptions& options = {});

// True iff every check's verdict matches its expectation (negative
// controls are expected to fail).
bool all_expected(const ExperimentResult& result);

enum class ReportFormat { csv, json };

// csv schema: suite,n,k_star,statistic,threshold,verdict. json mirrors
// the TestReport objects plus expectations and a config echo. cdf overlay
// CSVs (x,empirical,oracle) for the KS checks are written next to the
// report file. Re-emitting the same result is byte-identical.
void emit_report(const ExperimentResult& result, ReportFormat format,
                 const std::string& out_file);

// One human-readable line per check: "[PASS] suite/check n=... ...".
void print_summary(const ExperimentResult& result, std::ostream& os);

const char* to_string(SuiteKind suite);
SuiteKind suite_from_string(std::string_view name);

// Which process builders and limit-law oracles a suite exercises; the
// test suite asserts the seven suites jointly cover all of them.
struct SuiteCoverage {
  std::vector<std::string> builders;
  std::vector<std::string> oracles;
};
SuiteCoverage suite_coverage(SuiteKind suite);

}  // namespace donsker
