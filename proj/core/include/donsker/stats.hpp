#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "donsker/oracles.hpp"

namespace donsker {

enum class Verdict { pass, fail };

// One hypothesis-test outcome. verdict == pass iff statistic <= threshold;
// context says which statistic and which null, in key=value phrases.
struct TestReport {
  double statistic = 0.0;
  double threshold = 0.0;
  std::size_t n_samples = 0;
  Verdict verdict = Verdict::fail;
  std::string context;
};

// One-sample Kolmogorov-Smirnov test against an analytic cdf, evaluated
// exactly at the jump points of the sample df. threshold <= 0 selects the
// default 1.63/sqrt(M) (asymptotic alpha ~ 0.01). Requires >= 100 finite
// values.
TestReport ks_one_sample(std::vector<double> values, const Cdf& cdf,
                         double threshold = 0.0, std::string context = {});

struct CovEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
};

// Unbiased sample covariance across replications with a leave-one-out
// jackknife standard error. Degenerate (constant) inputs give (0, 0).
CovEstimate covariance_with_jackknife(std::span<const double> xs,
                                      std::span<const double> ys);

// Replication-by-grid matrix of path values; column g holds every
// replication's value at t_g.
struct PathMatrix {
  std::uint64_t grid_size = 0;
  std::size_t rows = 0;
  std::vector<double> data;  // row-major rows x (grid_size + 1)

  double at(std::size_t row, std::uint64_t g) const {
    return data[row * (grid_size + 1) + g];
  }
  std::vector<double> column(std::uint64_t g) const;
  // Nearest grid index to time t.
  std::uint64_t index_of(double t) const;
};

CovEstimate estimate_covariance(const PathMatrix& paths, double s, double t);

// |corr(path(t1)-path(t0), path(t2)-path(t1))| * sqrt(M) against the
// independence null; threshold 4. Zero-variance increments are a
// domain_error.
TestReport increment_correlation_test(const PathMatrix& paths, double t0,
                                      double t1, double t2,
                                      std::string context = {});
TestReport increment_correlation_from_values(std::span<const double> d1,
                                             std::span<const double> d2,
                                             std::string context = {});

enum class Functional { sup, abs_sup, terminal, mean_abs };

double evaluate_functional(std::span<const double> path_values, Functional f);

// z-style check that the Monte Carlo mean of a path functional matches
// oracle_value: statistic = max(0, |mean - oracle| - oracle_tol)/SE,
// threshold 4. oracle_tol absorbs known deterministic bias (grid sup
// underestimates the continuum sup).
TestReport functional_expectation_check(const PathMatrix& paths, Functional f,
                                        double oracle_value, double oracle_tol,
                                        std::string context = {});
TestReport functional_check_from_values(std::span<const double> values,
                                        double oracle_value, double oracle_tol,
                                        std::string context = {});

const char* to_string(Verdict v);
const char* to_string(Functional f);
Functional functional_from_string(std::string_view name);

}  // namespace donsker
