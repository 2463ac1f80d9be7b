#pragma once

#include <string>

#include "donsker/oracles.hpp"
#include "donsker/sampling.hpp"

namespace donsker {

// Catalog of test functions f for the sequential empirical process, each
// with closed-form moments Pf and Pfg under every sampling law:
//   identity        f(x) = x
//   square          f(x) = x^2
//   indicator       f(x) = 1{x <= c}
//   unit_uniform    f(x) = F(x), the probability transform of the law
//   unit_uniform_sq f(x) = F(x)^2
// The unit_* pair turns any continuous draw into an exact U(0,1) variate,
// so its moments are the plain uniform moments 1/2, 1/3, 1/4, 1/5
// independent of the law. They are rejected for discontinuous laws.
enum class FnKind { identity, square, indicator, unit_uniform, unit_uniform_sq };

struct TestFunction {
  FnKind kind = FnKind::identity;
  double c = 0.0;  // indicator threshold

  std::string name() const;
};

double eval(const TestFunction& fn, const DistributionSpec& spec, double x);

// Pf = E f(xi). Throws ConfigError when no exact moment exists for the
// (law, function) pair.
double mean_of(const DistributionSpec& spec, const TestFunction& fn);

// Pfg = E f(xi) g(xi), exact. Supported pairs: anything within
// {identity, square, indicator} for all laws, and anything within
// {unit_uniform, unit_uniform_sq} for continuous laws. Mixed pairs across
// the two groups throw ConfigError.
double cross_moment(const DistributionSpec& spec, const TestFunction& f,
                    const TestFunction& g);

FunctionMoments moments_for(const DistributionSpec& spec, const TestFunction& f,
                            const TestFunction& g);

}  // namespace donsker
