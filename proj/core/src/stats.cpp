#include "donsker/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "donsker/errors.hpp"
#include "donsker/summation.hpp"

namespace donsker {

namespace {

void append_verdict(TestReport& r) {
  r.verdict = r.statistic <= r.threshold ? Verdict::pass : Verdict::fail;
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

}  // namespace

TestReport ks_one_sample(std::vector<double> values, const Cdf& cdf,
                         double threshold, std::string context) {
  const std::size_t m = values.size();
  if (m < 100) {
    throw std::domain_error("ks_one_sample: need at least 100 values");
  }
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw std::domain_error("ks_one_sample: non-finite value");
    }
  }
  std::sort(values.begin(), values.end());

  // sup |F_M - F| is attained at a jump of the sample df.
  double d = 0.0;
  const double inv_m = 1.0 / static_cast<double>(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double f = cdf(values[i]);
    d = std::max(d, static_cast<double>(i + 1) * inv_m - f);
    d = std::max(d, f - static_cast<double>(i) * inv_m);
  }

  TestReport report;
  report.statistic = d;
  report.threshold =
      threshold > 0.0 ? threshold : 1.63 / std::sqrt(static_cast<double>(m));
  report.n_samples = m;
  report.context = (context.empty() ? std::string("ks_one_sample")
                                    : std::move(context)) +
                   "; pass iff statistic<=threshold";
  append_verdict(report);
  return report;
}

std::vector<double> PathMatrix::column(std::uint64_t g) const {
  std::vector<double> out(rows);
  for (std::size_t r = 0; r < rows; ++r) out[r] = at(r, g);
  return out;
}

std::uint64_t PathMatrix::index_of(double t) const {
  const double g = t * static_cast<double>(grid_size);
  const auto idx = static_cast<std::int64_t>(std::llround(g));
  return static_cast<std::uint64_t>(
      std::clamp<std::int64_t>(idx, 0, static_cast<std::int64_t>(grid_size)));
}

CovEstimate covariance_with_jackknife(std::span<const double> xs,
                                      std::span<const double> ys) {
  const std::size_t m = xs.size();
  if (m < 2 || ys.size() != m) {
    throw std::domain_error("covariance needs >= 2 paired replications");
  }
  const double sx = pairwise_sum(xs);
  const double sy = pairwise_sum(ys);
  std::vector<double> prod(m);
  for (std::size_t i = 0; i < m; ++i) prod[i] = xs[i] * ys[i];
  const double sxy = pairwise_sum(prod);

  const double dm = static_cast<double>(m);
  CovEstimate out;
  out.estimate = (sxy - sx * sy / dm) / (dm - 1.0);

  if (m < 3) {
    out.std_error = 0.0;
    return out;
  }

  // Leave-one-out estimates from the same sufficient statistics.
  std::vector<double> loo(m);
  const double dm1 = dm - 1.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double sx_i = sx - xs[i];
    const double sy_i = sy - ys[i];
    const double sxy_i = sxy - prod[i];
    loo[i] = (sxy_i - sx_i * sy_i / dm1) / (dm1 - 1.0);
  }
  const double loo_mean = pairwise_mean(loo);
  for (auto& v : loo) {
    const double d = v - loo_mean;
    v = d * d;
  }
  out.std_error = std::sqrt(dm1 / dm * pairwise_sum(loo));
  return out;
}

CovEstimate estimate_covariance(const PathMatrix& paths, double s, double t) {
  const auto xs = paths.column(paths.index_of(s));
  const auto ys = paths.column(paths.index_of(t));
  return covariance_with_jackknife(xs, ys);
}

TestReport increment_correlation_from_values(std::span<const double> d1,
                                             std::span<const double> d2,
                                             std::string context) {
  const std::size_t m = d1.size();
  if (m < 2 || d2.size() != m) {
    throw std::domain_error("increment correlation needs paired replications");
  }
  const double m1 = pairwise_mean(d1);
  const double m2 = pairwise_mean(d2);
  std::vector<double> a(m), b(m), ab(m);
  for (std::size_t i = 0; i < m; ++i) {
    a[i] = (d1[i] - m1) * (d1[i] - m1);
    b[i] = (d2[i] - m2) * (d2[i] - m2);
    ab[i] = (d1[i] - m1) * (d2[i] - m2);
  }
  const double va = pairwise_sum(a);
  const double vb = pairwise_sum(b);
  if (va == 0.0 || vb == 0.0) {
    throw std::domain_error("increment correlation: zero-variance increment");
  }
  const double rho = pairwise_sum(ab) / std::sqrt(va * vb);

  TestReport report;
  report.statistic = std::abs(rho) * std::sqrt(static_cast<double>(m));
  report.threshold = 4.0;
  report.n_samples = m;
  report.context = (context.empty() ? std::string("increment_correlation")
                                    : std::move(context)) +
                   "; rho=" + fmt(rho) +
                   "; statistic=|rho|*sqrt(M); independence null";
  append_verdict(report);
  return report;
}

TestReport increment_correlation_test(const PathMatrix& paths, double t0,
                                      double t1, double t2,
                                      std::string context) {
  if (!(t0 < t1 && t1 < t2)) {
    throw std::domain_error("increment correlation: need t0 < t1 < t2");
  }
  const auto g0 = paths.index_of(t0);
  const auto g1 = paths.index_of(t1);
  const auto g2 = paths.index_of(t2);
  std::vector<double> d1(paths.rows), d2(paths.rows);
  for (std::size_t r = 0; r < paths.rows; ++r) {
    d1[r] = paths.at(r, g1) - paths.at(r, g0);
    d2[r] = paths.at(r, g2) - paths.at(r, g1);
  }
  return increment_correlation_from_values(d1, d2, std::move(context));
}

double evaluate_functional(std::span<const double> path_values, Functional f) {
  if (path_values.empty()) {
    throw std::domain_error("evaluate_functional: empty path");
  }
  switch (f) {
    case Functional::sup: {
      double m = path_values[0];
      for (double v : path_values) m = std::max(m, v);
      return m;
    }
    case Functional::abs_sup: {
      double m = 0.0;
      for (double v : path_values) m = std::max(m, std::abs(v));
      return m;
    }
    case Functional::terminal:
      return path_values.back();
    case Functional::mean_abs: {
      double acc = 0.0;
      for (double v : path_values) acc += std::abs(v);
      return acc / static_cast<double>(path_values.size());
    }
  }
  throw ConfigError("unknown functional");
}

TestReport functional_check_from_values(std::span<const double> values,
                                        double oracle_value, double oracle_tol,
                                        std::string context) {
  const std::size_t m = values.size();
  if (m < 2) throw std::domain_error("functional check needs >= 2 values");
  if (!std::isfinite(oracle_value)) {
    throw ConfigError("functional check: oracle value must be finite");
  }
  const double mean = pairwise_mean(values);
  std::vector<double> sq(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double d = values[i] - mean;
    sq[i] = d * d;
  }
  const double var = pairwise_sum(sq) / static_cast<double>(m - 1);
  const double se = std::sqrt(var / static_cast<double>(m));
  const double excess = std::max(0.0, std::abs(mean - oracle_value) - oracle_tol);

  TestReport report;
  report.threshold = 4.0;
  report.n_samples = m;
  if (se == 0.0) {
    report.statistic = excess == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  } else {
    report.statistic = excess / se;
  }
  report.context = (context.empty() ? std::string("functional_expectation")
                                    : std::move(context)) +
                   "; mean=" + fmt(mean) + " oracle=" + fmt(oracle_value) +
                   " tol=" + fmt(oracle_tol) + " se=" + fmt(se);
  append_verdict(report);
  return report;
}

TestReport functional_expectation_check(const PathMatrix& paths, Functional f,
                                        double oracle_value, double oracle_tol,
                                        std::string context) {
  std::vector<double> vals(paths.rows);
  const std::size_t stride = paths.grid_size + 1;
  for (std::size_t r = 0; r < paths.rows; ++r) {
    vals[r] = evaluate_functional(
        std::span<const double>(paths.data).subspan(r * stride, stride), f);
  }
  if (context.empty()) {
    context = std::string("functional=") + to_string(f);
  }
  return functional_check_from_values(vals, oracle_value, oracle_tol,
                                      std::move(context));
}

const char* to_string(Verdict v) {
  return v == Verdict::pass ? "pass" : "fail";
}

const char* to_string(Functional f) {
  switch (f) {
    case Functional::sup: return "sup";
    case Functional::abs_sup: return "abs_sup";
    case Functional::terminal: return "terminal";
    case Functional::mean_abs: return "mean_abs";
  }
  return "?";
}

Functional functional_from_string(std::string_view name) {
  if (name == "sup") return Functional::sup;
  if (name == "abs_sup") return Functional::abs_sup;
  if (name == "terminal") return Functional::terminal;
  if (name == "mean_abs") return Functional::mean_abs;
  throw ConfigError("unknown functional '" + std::string(name) + "'");
}

}  // namespace donsker
