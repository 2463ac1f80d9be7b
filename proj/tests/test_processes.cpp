#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "donsker/errors.hpp"
#include "donsker/processes.hpp"
#include "donsker/summation.hpp"

using namespace donsker;

namespace {

SampleSequence fixed_sample(std::vector<double> values, double sigma = 1.0) {
  SampleSequence s;
  s.values = std::move(values);
  s.spec = DistributionSpec{DistKind::rademacher, sigma};
  return s;
}

// Direct evaluation of the deleted partial sum: materialize each retained
// index set and add the terms in index order. The reference the builder
// is checked against.
double brute_force_deleted(const SampleSequence& sample,
                           const DeletionPlan& plan, std::uint64_t g,
                           Interpolation interp, Scaling scaling) {
  const std::uint64_t n = sample.size();
  const std::uint64_t m = plan.m_at(g);
  double acc = 0.0;
  for (std::uint64_t i = 1; i <= m; ++i) {
    const auto& del = plan.deleted[g];
    if (std::find(del.begin(), del.end(), static_cast<std::uint32_t>(i)) ==
        del.end()) {
      acc += sample.values[i - 1];
    }
  }
  const double nt = static_cast<double>(n) * plan.time_at(g);
  if (interp == Interpolation::polygonal) {
    const double frac = nt - std::floor(nt);
    if (frac > 0.0) acc += frac * sample.values[m];
  }
  if (scaling == Scaling::normalized) {
    acc /= sample.spec.sigma * std::sqrt(static_cast<double>(n));
  }
  return acc;
}

DeletionPlan empty_plan(std::uint64_t n, std::uint64_t grid) {
  DeletionPlan plan;
  plan.n = n;
  plan.grid_size = grid;
  plan.selection = SelectionRule::prefix;
  plan.deleted.assign(grid + 1, {});
  return plan;
}

}  // namespace

TEST_CASE("step partial sum at t=1") {
  const auto s = fixed_sample({1, -1, 1, 1});
  const auto path = build_partial_sum(s, 4, Interpolation::step);
  CHECK(path.values[4] == doctest::Approx(1.0));  // 2 / sqrt(4)
  CHECK(path.values[0] == 0.0);
}

TEST_CASE("polygonal fractional term at t=3/8") {
  const auto s = fixed_sample({1, -1, 1, 1});
  const auto path = build_partial_sum(s, 8, Interpolation::polygonal);
  // nt = 1.5: (S_1 + 0.5 xi_2)/2 = (1 - 0.5)/2.
  CHECK(path.values[3] == doctest::Approx(0.25));
}

TEST_CASE("deleted partial sum drops the chosen index") {
  const auto s = fixed_sample({1, -1, 1, 1});
  auto plan = empty_plan(4, 4);
  plan.deleted[4] = {3};
  const auto path =
      build_deleted_partial_sum(s, plan, Interpolation::step);
  CHECK(path.values[4] == doctest::Approx(0.5));  // (1-1+1)/2
}

TEST_CASE("empty deletion plan reproduces the complete path bit-exactly") {
  const DistributionSpec spec{DistKind::normal, 1.0};
  for (std::uint64_t rep = 0; rep < 20; ++rep) {
    const auto s = draw_iid(spec, 37, {400, rep});
    const auto plan = empty_plan(37, 9);
    for (auto interp : {Interpolation::step, Interpolation::polygonal}) {
      const auto complete = build_partial_sum(s, 9, interp);
      const auto deleted = build_deleted_partial_sum(s, plan, interp);
      for (std::uint64_t g = 0; g <= 9; ++g) {
        CHECK(complete.values[g] == deleted.values[g]);  // bitwise
      }
    }
  }
}

TEST_CASE("builder matches the brute-force index-set oracle") {
  const DistributionSpec spec{DistKind::exponential_centered, 1.7};
  std::uint64_t stream = 0;
  for (std::uint64_t n : {8ull, 13ull, 64ull}) {
    for (const auto& sched :
         {DeletionSchedule{ScheduleKind::fixed_k, 3, 0.5},
          DeletionSchedule{ScheduleKind::power_law, 0, 0.6}}) {
      for (auto sel : {SelectionRule::prefix, SelectionRule::suffix,
                       SelectionRule::random_per_time,
                       SelectionRule::static_random}) {
        const auto s = draw_iid(spec, n, {900, stream});
        const auto plan = make_plan(sched, sel, n, 8, {901, stream});
        ++stream;
        for (auto interp : {Interpolation::step, Interpolation::polygonal}) {
          for (auto scaling : {Scaling::normalized, Scaling::raw}) {
            const auto path =
                build_deleted_partial_sum(s, plan, interp, scaling);
            for (std::uint64_t g = 0; g <= 8; ++g) {
              CHECK(path.values[g] ==
                    doctest::Approx(
                        brute_force_deleted(s, plan, g, interp, scaling))
                        .epsilon(1e-12));
            }
          }
        }
      }
    }
  }
}

TEST_CASE("step and polygonal agree where nt is integral") {
  const DistributionSpec spec{DistKind::normal, 1.0};
  const auto s = draw_iid(spec, 24, {41, 0});
  // grid divides n, so nt is integral at every grid time.
  const auto step = build_partial_sum(s, 8, Interpolation::step);
  const auto poly = build_partial_sum(s, 8, Interpolation::polygonal);
  for (std::uint64_t g = 0; g <= 8; ++g) {
    CHECK(step.values[g] == poly.values[g]);
  }
}

TEST_CASE("path construction error cases") {
  const auto s = fixed_sample({1, -1});
  SampleSequence empty;
  empty.spec = s.spec;
  CHECK_THROWS_AS(build_partial_sum(empty, 4, Interpolation::step),
                  std::domain_error);
  const auto plan = empty_plan(5, 4);  // wrong n
  CHECK_THROWS_AS(build_deleted_partial_sum(s, plan, Interpolation::step),
                  std::domain_error);
}

TEST_CASE("empirical df basics") {
  const auto s = fixed_sample({0.2, 0.8});
  const Cdf uniform01 = [](double x) {
    return x < 0.0 ? 0.0 : (x > 1.0 ? 1.0 : x);
  };
  const auto raw = build_empirical(s, {}, {0.5}, EmpiricalFlavor::raw_df);
  CHECK(raw.values[0] == doctest::Approx(0.5));
  const auto cen =
      build_empirical(s, uniform01, {0.5}, EmpiricalFlavor::centered);
  CHECK(cen.values[0] == doctest::Approx(0.0));
  CHECK(cen.truth_values[0] == doctest::Approx(0.5));
}

TEST_CASE("scaled flavor is exactly sqrt(n) times centered") {
  const DistributionSpec spec{DistKind::uniform_centered, 1.0};
  const auto s = draw_iid(spec, 6, {77, 0});
  auto plan = empty_plan(6, 6);
  plan.deleted[6] = {2, 5};
  const Cdf truth = [&](double x) { return cdf_of(spec, x); };
  std::vector<double> xs;
  for (int i = -20; i <= 20; ++i) xs.push_back(i * 0.1);
  const auto cen =
      build_empirical(s, truth, xs, EmpiricalFlavor::centered, &plan);
  const auto sca =
      build_empirical(s, truth, xs, EmpiricalFlavor::scaled, &plan);
  const double root_n = std::sqrt(6.0);
  for (std::size_t j = 0; j < xs.size(); ++j) {
    CHECK(sca.values[j] == root_n * cen.values[j]);  // exact identity
  }
}

TEST_CASE("raw df is monotone in [0,1]; deletion caps the sup") {
  const DistributionSpec spec{DistKind::normal, 1.0};
  const auto s = draw_iid(spec, 50, {78, 0});
  DeletionPlan plan = empty_plan(50, 5);
  plan.deleted[5] = {1, 10, 20, 30, 40};  // k* = 5 at the full sample
  std::vector<double> xs;
  for (int i = -60; i <= 60; ++i) xs.push_back(i * 0.2);
  const auto raw =
      build_empirical(s, {}, xs, EmpiricalFlavor::raw_df, &plan);
  double prev = 0.0;
  for (double v : raw.values) {
    CHECK(v >= prev);
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
    prev = v;
  }
  CHECK(raw.values.back() == doctest::Approx((50.0 - 5.0) / 50.0));
}

TEST_CASE("empirical rejects unsorted evaluation grids") {
  const auto s = fixed_sample({0.2, 0.8});
  CHECK_THROWS_AS(
      build_empirical(s, {}, {0.5, 0.1}, EmpiricalFlavor::raw_df),
      std::domain_error);
}

TEST_CASE("sequential field: constant-like function vanishes") {
  // indicator with threshold above the support has f == 1, so f - Pf == 0.
  const DistributionSpec spec{DistKind::uniform_centered, 1.0};
  const auto s = draw_iid(spec, 32, {80, 0});
  const auto field = build_sequential_field(
      s, {TestFunction{FnKind::indicator, 10.0}}, 8);
  for (std::uint64_t g = 0; g <= 8; ++g) {
    CHECK(field.at(g, 0) == doctest::Approx(0.0).epsilon(1e-14));
  }
}

TEST_CASE("sequential field arithmetic on a pinned pair") {
  // Probability-transform values 0.9 and 0.1 with Pf = 1/2:
  // (0.4 + (-0.4)) / sqrt(2) = 0.
  const DistributionSpec spec{DistKind::uniform_centered, 1.0};
  SampleSequence s;
  s.spec = spec;
  s.values = {quantile_of(spec, 0.9), quantile_of(spec, 0.1)};
  const auto field =
      build_sequential_field(s, {TestFunction{FnKind::unit_uniform}}, 2);
  CHECK(field.at(0, 0) == 0.0);
  CHECK(field.at(2, 0) == doctest::Approx(0.0).epsilon(1e-12));
  // At t = 1/2 only the first value contributes: 0.4/sqrt(2).
  CHECK(field.at(1, 0) == doctest::Approx(0.4 / std::sqrt(2.0)));
}

TEST_CASE("sequential field matches a brute-force oracle under deletion") {
  const DistributionSpec spec{DistKind::uniform_centered, 1.0};
  const std::uint64_t n = 8, grid = 8;
  const auto s = draw_iid(spec, n, {82, 3});
  const auto plan = make_plan({ScheduleKind::fixed_k, 2, 0.5},
                              SelectionRule::random_per_time, n, grid, {83, 1});
  const TestFunction f{FnKind::identity};
  const TestFunction g{FnKind::square};
  const auto field = build_sequential_field(s, {f, g}, grid, &plan);
  for (std::uint64_t gg = 0; gg <= grid; ++gg) {
    const std::uint64_t m = n * gg / grid;
    double acc_f = 0.0, acc_g = 0.0;
    for (std::uint64_t i = 1; i <= m; ++i) {
      const auto& del = plan.deleted[gg];
      if (std::find(del.begin(), del.end(), static_cast<std::uint32_t>(i)) !=
          del.end()) {
        continue;
      }
      acc_f += eval(f, spec, s.values[i - 1]) - mean_of(spec, f);
      acc_g += eval(g, spec, s.values[i - 1]) - mean_of(spec, g);
    }
    CHECK(field.at(gg, 0) ==
          doctest::Approx(acc_f / std::sqrt(8.0)).epsilon(1e-12));
    CHECK(field.at(gg, 1) ==
          doctest::Approx(acc_g / std::sqrt(8.0)).epsilon(1e-12));
  }
}

TEST_CASE("sequential field configuration errors") {
  const DistributionSpec rad{DistKind::rademacher, 1.0};
  const auto s = draw_iid(rad, 16, {84, 0});
  CHECK_THROWS_AS(
      build_sequential_field(s, {TestFunction{FnKind::unit_uniform}}, 4),
      ConfigError);
}

TEST_CASE("deleted raw-sum variance matches (floor(nt)-k*) sigma^2") {
  const DistributionSpec spec{DistKind::normal, 1.0};
  const std::uint64_t n = 200, grid = 10, reps = 5000;
  const DeletionSchedule sched{ScheduleKind::fixed_k, 14, 0.5};
  std::vector<double> mid(reps);
  for (std::uint64_t rep = 0; rep < reps; ++rep) {
    const auto s = draw_iid(spec, n, {85, 2 * rep});
    const auto plan =
        make_plan(sched, SelectionRule::random_per_time, n, grid,
                  {85, 2 * rep + 1});
    const auto path = build_deleted_partial_sum(s, plan, Interpolation::step,
                                                Scaling::raw);
    mid[rep] = path.values[grid / 2];
  }
  const double mean = pairwise_mean(mid);
  std::vector<double> sq(reps);
  for (std::uint64_t i = 0; i < reps; ++i) {
    sq[i] = (mid[i] - mean) * (mid[i] - mean);
  }
  const double var = pairwise_sum(sq) / static_cast<double>(reps - 1);
  const double target = 100.0 - 14.0;  // floor(nt)=100, k*(100)=14
  const double se = target * std::sqrt(2.0 / static_cast<double>(reps - 1));
  CHECK(std::abs(var - target) <= 4.0 * se);
}
