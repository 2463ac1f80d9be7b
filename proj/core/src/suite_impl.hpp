#pragma once

#include "donsker/harness.hpp"

namespace donsker::detail {

std::vector<CheckResult> run_suite(SuiteKind suite, const ExperimentConfig& cfg,
                                   std::uint64_t n, unsigned workers);

}  // namespace donsker::detail
