#include <chrono>

#include "donsker/errors.hpp"
#include "donsker/harness.hpp"
#include "suite_impl.hpp"

namespace donsker {

ExperimentResult run_experiment(const ExperimentConfig& config,
                                const RunOptions& options) {
  validate_config(config);
  const unsigned workers = options.workers == 0 ? 1 : options.workers;

  ExperimentResult result;
  result.config = config;

  for (const SuiteKind suite : config.suites) {
    for (const std::uint64_t n : config.n_list) {
      const auto start = std::chrono::steady_clock::now();
      try {
        auto checks = detail::run_suite(suite, config, n, workers);
        for (auto& c : checks) result.checks.push_back(std::move(c));
      } catch (const std::bad_alloc&) {
        result.complete = false;  // partial results, flagged
        result.timings.push_back(
            {std::string(to_string(suite)) + "/n=" + std::to_string(n) +
                 " (aborted: out of memory)",
             0.0});
        return result;
      }
      const std::chrono::duration<double> elapsed =
          std::chrono::steady_clock::now() - start;
      result.timings.push_back(
          {std::string(to_string(suite)) + "/n=" + std::to_string(n),
           elapsed.count()});
    }
  }
  return result;
}

bool all_expected(const ExperimentResult& result) {
  if (!result.complete) return false;
  for (const auto& c : result.checks) {
    if (!c.as_expected()) return false;
  }
  return true;
}

SuiteCoverage suite_coverage(SuiteKind suite) {
  switch (suite) {
    case SuiteKind::donsker_complete:
      return {{"build_partial_sum"}, {"normal_cdf", "bm_covariance"}};
    case SuiteKind::donsker_deleted:
      return {{"build_deleted_partial_sum"}, {"normal_cdf", "bm_covariance"}};
    case SuiteKind::polygonal:
      return {{"build_deleted_partial_sum"},
              {"normal_cdf", "bm_sup_cdf", "bm_abs_sup_cdf"}};
    case SuiteKind::empirical_bridge:
      return {{"build_empirical"}, {"kolmogorov_cdf", "bridge_covariance"}};
    case SuiteKind::sequential_km:
      return {{"build_sequential_field"}, {"kiefer_muller_covariance"}};
    case SuiteKind::lemma2_structure:
      return {{"build_partial_sum", "build_deleted_partial_sum"},
              {"normal_cdf"}};
    case SuiteKind::negligibility_violation:
      return {{"build_deleted_partial_sum"}, {"normal_cdf"}};
  }
  return {};
}

}  // namespace donsker
