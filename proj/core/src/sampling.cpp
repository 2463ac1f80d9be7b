#include "donsker/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "donsker/errors.hpp"
#include "donsker/oracles.hpp"

namespace donsker {

namespace {
constexpr double kRoot3 = 1.7320508075688772935;
}

SampleSequence draw_iid(const DistributionSpec& spec, std::size_t n,
                        SeededStream stream) {
  if (!(spec.sigma > 0.0) || !std::isfinite(spec.sigma)) {
    throw ConfigError("draw_iid: sigma must be a positive finite real");
  }
  if (n == 0) {
    throw std::domain_error("draw_iid: n must be >= 1");
  }

  CounterRng rng(stream);
  SampleSequence out;
  out.spec = spec;
  out.values.resize(n);
  const double sigma = spec.sigma;

  switch (spec.kind) {
    case DistKind::rademacher:
      for (auto& v : out.values) v = (rng.next_u64() >> 63) ? sigma : -sigma;
      break;
    case DistKind::uniform_centered:
      for (auto& v : out.values)
        v = sigma * kRoot3 * (2.0 * rng.next_unit() - 1.0);
      break;
    case DistKind::normal:
      for (auto& v : out.values) v = sigma * rng.next_normal();
      break;
    case DistKind::exponential_centered:
      for (auto& v : out.values)
        v = sigma * (-std::log(rng.next_unit()) - 1.0);
      break;
  }
  return out;
}

double cdf_of(const DistributionSpec& spec, double x) {
  const double s = spec.sigma;
  switch (spec.kind) {
    case DistKind::rademacher:
      if (x < -s) return 0.0;
      if (x < s) return 0.5;
      return 1.0;
    case DistKind::uniform_centered: {
      const double a = s * kRoot3;
      if (x <= -a) return 0.0;
      if (x >= a) return 1.0;
      return (x + a) / (2.0 * a);
    }
    case DistKind::normal:
      return normal_cdf(x / s);
    case DistKind::exponential_centered: {
      const double w = x / s + 1.0;  // Exp(1) coordinate
      if (w <= 0.0) return 0.0;
      return -std::expm1(-w);
    }
  }
  return 0.0;  // unreachable
}

double quantile_of(const DistributionSpec& spec, double p) {
  if (!(p > 0.0) || !(p < 1.0)) {
    throw std::domain_error("quantile_of: p must lie in (0,1)");
  }
  const double s = spec.sigma;
  switch (spec.kind) {
    case DistKind::rademacher:
      return p <= 0.5 ? -s : s;
    case DistKind::uniform_centered:
      return s * kRoot3 * (2.0 * p - 1.0);
    case DistKind::normal: {
      // Bisection on the cdf; 200 halvings of [-40s, 40s] reach ~1e-10.
      double lo = -40.0 * s, hi = 40.0 * s;
      for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (cdf_of(spec, mid) < p ? lo : hi) = mid;
      }
      return 0.5 * (lo + hi);
    }
    case DistKind::exponential_centered:
      return s * (-std::log1p(-p) - 1.0);
  }
  return 0.0;  // unreachable
}

bool is_continuous(DistKind kind) { return kind != DistKind::rademacher; }

const char* to_string(DistKind kind) {
  switch (kind) {
    case DistKind::rademacher: return "rademacher";
    case DistKind::uniform_centered: return "uniform_centered";
    case DistKind::normal: return "normal";
    case DistKind::exponential_centered: return "exponential_centered";
  }
  return "?";
}

DistKind dist_kind_from_string(std::string_view name) {
  if (name == "rademacher") return DistKind::rademacher;
  if (name == "uniform_centered") return DistKind::uniform_centered;
  if (name == "normal") return DistKind::normal;
  if (name == "exponential_centered") return DistKind::exponential_centered;
  throw ConfigError("unknown distribution '" + std::string(name) + "'");
}

}  // namespace donsker
