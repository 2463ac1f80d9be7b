#include "donsker/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "donsker/errors.hpp"

namespace donsker {

namespace {
constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;
}  // namespace

double normal_cdf(double x) {
  // erfc-based form is accurate in both tails; glibc's erfc is < 1 ulp.
  return 0.5 * std::erfc(-x * kInvSqrt2);
}

double normal_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double bm_sup_cdf(double x) {
  if (x <= 0.0) return 0.0;
  return 2.0 * normal_cdf(x) - 1.0;
}

double bm_abs_sup_cdf(double x) {
  if (x <= 0.0) return 0.0;
  // sum_{k in Z} (-1)^k [Phi((2k+1)x) - Phi((2k-1)x)]; the +-k terms are
  // equal by symmetry, so fold them. Terms decay like exp(-2 k^2 x^2).
  double value = 2.0 * normal_cdf(x) - 1.0;
  double sign = -1.0;
  for (int k = 1; k <= 100; ++k) {
    const double term =
        2.0 * (normal_cdf((2.0 * k + 1.0) * x) - normal_cdf((2.0 * k - 1.0) * x));
    value += sign * term;
    if (term < 1e-14) break;
    sign = -sign;
  }
  return std::clamp(value, 0.0, 1.0);
}

double kolmogorov_cdf(double x) {
  if (x <= 0.0) return 0.0;
  double tail = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * double(k) * double(k) * x * x);
    tail += sign * term;
    if (term < 1e-12) break;
    sign = -sign;
  }
  return std::clamp(1.0 - 2.0 * tail, 0.0, 1.0);
}

double bm_covariance(double s, double t) { return std::min(s, t); }

double bridge_covariance(double s, double t, const Cdf& cdf) {
  return bridge_covariance_from_probs(cdf(s), cdf(t));
}

double bridge_covariance_from_probs(double p, double q) {
  return std::min(p, q) - p * q;
}

double kiefer_muller_covariance(double s, double t, const FunctionMoments& m) {
  if (!std::isfinite(m.pf) || !std::isfinite(m.pg) || !std::isfinite(m.pfg)) {
    throw ConfigError("kiefer_muller_covariance: non-finite analytic moments");
  }
  return std::min(s, t) * (m.pfg - m.pf * m.pg);
}

double LimitLaw::cdf(double x) const {
  switch (kind) {
    case Kind::normal_marginal:
      return normal_cdf(x / std::sqrt(t));
    case Kind::bm_sup:
      return bm_sup_cdf(x);
    case Kind::bm_abs_sup:
      return bm_abs_sup_cdf(x);
    case Kind::bridge_sup:
      return kolmogorov_cdf(x);
    case Kind::bridge_marginal:
      return normal_cdf(x / std::sqrt(p * (1.0 - p)));
  }
  return 0.0;  // unreachable
}

std::string LimitLaw::describe() const {
  switch (kind) {
    case Kind::normal_marginal:
      return "N(0," + std::to_string(t) + ")";
    case Kind::bm_sup:
      return "sup W law (2Phi(x)-1)";
    case Kind::bm_abs_sup:
      return "sup|W| law";
    case Kind::bridge_sup:
      return "Kolmogorov K(x)";
    case Kind::bridge_marginal:
      return "N(0," + std::to_string(p * (1.0 - p)) + ")";
  }
  return "?";
}

LimitLaw LimitLaw::normal_marginal(double t) {
  if (!(t > 0.0)) throw std::domain_error("normal_marginal: t must be > 0");
  return LimitLaw{Kind::normal_marginal, t, 0.5};
}
LimitLaw LimitLaw::bm_sup() { return LimitLaw{Kind::bm_sup, 1.0, 0.5}; }
LimitLaw LimitLaw::bm_abs_sup() { return LimitLaw{Kind::bm_abs_sup, 1.0, 0.5}; }
LimitLaw LimitLaw::bridge_sup() { return LimitLaw{Kind::bridge_sup, 1.0, 0.5}; }
LimitLaw LimitLaw::bridge_marginal(double p) {
  if (!(p > 0.0) || !(p < 1.0))
    throw std::domain_error("bridge_marginal: p must lie in (0,1)");
  return LimitLaw{Kind::bridge_marginal, 1.0, p};
}

double mean_from_cdf(const Cdf& cdf, double hi, int panels) {
  // E X = integral of P(X > x) for X >= 0; composite Simpson.
  if (panels % 2) ++panels;
  const double h = hi / panels;
  double acc = (1.0 - cdf(0.0)) + (1.0 - cdf(hi));
  for (int i = 1; i < panels; ++i) {
    acc += (i % 2 ? 4.0 : 2.0) * (1.0 - cdf(i * h));
  }
  return acc * h / 3.0;
}

}  // namespace donsker
