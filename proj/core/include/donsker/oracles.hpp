#pragma once

#include <functional>
#include <string>

namespace donsker {

using Cdf = std::function<double(double)>;

// Standard normal distribution function, |error| <= 1e-15.
double normal_cdf(double x);
double normal_pdf(double x);

// P(sup_{[0,1]} W <= x) = 2 Phi(x) - 1 for x >= 0 (reflection principle).
double bm_sup_cdf(double x);

// P(sup_{[0,1]} |W| <= x) = sum_k (-1)^k [Phi((2k+1)x) - Phi((2k-1)x)].
double bm_abs_sup_cdf(double x);

// Kolmogorov distribution, the law of sup |B| for a standard Brownian
// bridge B: K(x) = 1 - 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 x^2).
// Series truncated once a term drops below 1e-12, capped at 100 terms.
double kolmogorov_cdf(double x);

// Covariance kernel of a standard Brownian motion: s ^ t.
double bm_covariance(double s, double t);

// Brownian-bridge kernel evaluated through a distribution function F:
// min{F(s), F(t)} - F(s) F(t).
double bridge_covariance(double s, double t, const Cdf& cdf);
// Same kernel with the probabilities supplied directly.
double bridge_covariance_from_probs(double p, double q);

// Kiefer-Muller kernel (s ^ t)(Pfg - Pf Pg). The moments must be exact
// under the sampling law; see donsker/test_functions.hpp for the catalog.
struct FunctionMoments {
  double pf = 0.0;
  double pg = 0.0;
  double pfg = 0.0;
};
double kiefer_muller_covariance(double s, double t, const FunctionMoments& m);

// One-dimensional limit laws the convergence suites test against.
struct LimitLaw {
  enum class Kind { normal_marginal, bm_sup, bm_abs_sup, bridge_sup, bridge_marginal };

  Kind kind = Kind::normal_marginal;
  double t = 1.0;  // normal_marginal: time parameter, variance of W(t)
  double p = 0.5;  // bridge_marginal: F(x), variance p(1-p)

  double cdf(double x) const;
  std::string describe() const;

  static LimitLaw normal_marginal(double t);
  static LimitLaw bm_sup();
  static LimitLaw bm_abs_sup();
  static LimitLaw bridge_sup();
  static LimitLaw bridge_marginal(double p);
};

// Mean of a nonnegative law via Simpson integration of 1 - cdf on [0, hi].
double mean_from_cdf(const Cdf& cdf, double hi, int panels = 20000);

}  // namespace donsker
