#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "donsker/rng.hpp"

namespace donsker {

// Catalog of centered sampling laws. Every kind has exact mean 0 and
// variance sigma^2 by analytic standardization:
//   rademacher            +-sigma with probability 1/2 each
//   uniform_centered      U(-sqrt(3), sqrt(3)) * sigma
//   normal                N(0, sigma^2)
//   exponential_centered  (Exp(1) - 1) * sigma
enum class DistKind { rademacher, uniform_centered, normal, exponential_centered };

struct DistributionSpec {
  DistKind kind = DistKind::normal;
  double sigma = 1.0;
};

struct SampleSequence {
  std::vector<double> values;
  DistributionSpec spec;

  std::size_t size() const { return values.size(); }
};

// Draws n i.i.d. values. Deterministic for fixed (spec, n, stream).
// Throws ConfigError for sigma <= 0 and std::domain_error for n == 0.
SampleSequence draw_iid(const DistributionSpec& spec, std::size_t n,
                        SeededStream stream);

// Analytic distribution function of the law described by spec.
double cdf_of(const DistributionSpec& spec, double x);

// Inverse of cdf_of for p in (0,1). For the normal kind this bisects the
// cdf; the other kinds have closed forms. rademacher (a step df) maps
// p <= 1/2 to -sigma and p > 1/2 to +sigma.
double quantile_of(const DistributionSpec& spec, double p);

bool is_continuous(DistKind kind);

const char* to_string(DistKind kind);
DistKind dist_kind_from_string(std::string_view name);

}  // namespace donsker
