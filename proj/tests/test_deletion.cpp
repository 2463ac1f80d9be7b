#include <algorithm>
#include <cmath>
#include <set>

#include "doctest.h"
#include "donsker/deletion.hpp"
#include "donsker/errors.hpp"

using namespace donsker;

TEST_CASE("fixed_k k=0 deletes nothing") {
  const DeletionSchedule sched{ScheduleKind::fixed_k, 0, 0.5};
  for (auto sel : {SelectionRule::prefix, SelectionRule::suffix,
                   SelectionRule::random_per_time, SelectionRule::static_random}) {
    const auto plan = make_plan(sched, sel, 10, 10, {7, 0});
    CHECK(plan.empty());
  }
}

TEST_CASE("prefix rule with k* < m") {
  const DeletionSchedule sched{ScheduleKind::fixed_k, 1, 0.5};
  const auto plan = make_plan(sched, SelectionRule::prefix, 4, 4, {7, 0});
  // m_g = 0,1,2,3,4: k*(1)=0 so the first two grid times delete nothing.
  REQUIRE(plan.deleted.size() == 5);
  CHECK(plan.deleted[0].empty());
  CHECK(plan.deleted[1].empty());
  for (std::uint64_t g : {2, 3, 4}) {
    REQUIRE(plan.deleted[g].size() == 1);
    CHECK(plan.deleted[g][0] == 1);
  }
}

TEST_CASE("power_law examples") {
  const DeletionSchedule sched{ScheduleKind::power_law, 0, 0.5};
  CHECK(k_star(sched, 10000) == 100);
  CHECK(negligibility_ratio(sched, 10000) == doctest::Approx(0.01));
  CHECK(negligibility_ratio(sched, 100) == doctest::Approx(0.1));
}

TEST_CASE("negligibility ratio trivia") {
  CHECK(negligibility_ratio({ScheduleKind::fixed_k, 5, 0.5}, 1000) ==
        doctest::Approx(0.005));
}

TEST_CASE("power_law ratios decrease along a doubling sequence") {
  const DeletionSchedule sched{ScheduleKind::power_law, 0, 0.9};
  double prev = 1.0;
  for (int e = 10; e <= 20; ++e) {
    const double ratio = negligibility_ratio(sched, 1ull << e);
    CHECK(ratio < prev);
    prev = ratio;
  }
}

TEST_CASE("ratio bounded by n^(r-1) + 1/n") {
  for (double r : {0.3, 0.5, 0.7, 0.9}) {
    const DeletionSchedule sched{ScheduleKind::power_law, 0, r};
    for (std::uint64_t n = 1; n <= 2000; n = n * 3 / 2 + 1) {
      CHECK(negligibility_ratio(sched, n) <=
            std::pow(static_cast<double>(n), r - 1.0) +
                1.0 / static_cast<double>(n));
    }
  }
}

TEST_CASE("plan invariants hold exhaustively for n <= 64") {
  std::uint64_t stream = 0;
  for (std::uint64_t n : {1ull, 2ull, 5ull, 17ull, 64ull}) {
    for (std::uint64_t grid : {1ull, 4ull, 9ull}) {
      for (auto sel :
           {SelectionRule::prefix, SelectionRule::suffix,
            SelectionRule::random_per_time, SelectionRule::static_random}) {
        for (const auto& sched :
             {DeletionSchedule{ScheduleKind::fixed_k, 3, 0.5},
              DeletionSchedule{ScheduleKind::power_law, 0, 0.6}}) {
          const auto plan = make_plan(sched, sel, n, grid, {31, stream++});
          REQUIRE(plan.deleted.size() == grid + 1);
          for (std::uint64_t g = 0; g <= grid; ++g) {
            const std::uint64_t m = plan.m_at(g);
            const auto& d = plan.deleted[g];
            CHECK(std::is_sorted(d.begin(), d.end()));
            CHECK(std::adjacent_find(d.begin(), d.end()) == d.end());
            for (auto idx : d) {
              CHECK(idx >= 1);
              CHECK(idx <= m);
            }
            if (sel != SelectionRule::static_random) {
              CHECK(d.size() == k_star(sched, m));
            }
          }
          if (sel == SelectionRule::static_random) {
            // deleted(g) = D cap {1..m_g}: monotone under grid refinement.
            for (std::uint64_t g = 0; g < grid; ++g) {
              const auto& a = plan.deleted[g];
              const auto& b = plan.deleted[g + 1];
              CHECK(std::includes(b.begin(), b.end(), a.begin(), a.end()));
            }
            CHECK(plan.deleted[grid].size() == k_star(sched, n));
          }
        }
      }
    }
  }
}

TEST_CASE("fixed_k with k >= n clamps and records a warning") {
  const DeletionSchedule sched{ScheduleKind::fixed_k, 50, 0.5};
  const auto plan = make_plan(sched, SelectionRule::prefix, 10, 5, {3, 0});
  REQUIRE_FALSE(plan.warnings.empty());
  CHECK(plan.deleted[5].size() == 9);  // clamped to n-1
}

TEST_CASE("power_law r outside (0,1) is a configuration error") {
  CHECK_THROWS_AS(
      make_plan({ScheduleKind::power_law, 0, 1.0}, SelectionRule::prefix, 10,
                5, {3, 0}),
      ConfigError);
  CHECK_THROWS_AS(k_star({ScheduleKind::power_law, 0, -0.5}, 10), ConfigError);
}

TEST_CASE("full overlap yields nested deleted sets") {
  const DeletionSchedule sched{ScheduleKind::fixed_k, 3, 0.5};
  const auto plan = make_overlapping_pair(sched, 40, 10, 1.0, {11, 0});
  for (std::uint64_t g = 0; g < 10; ++g) {
    const std::uint64_t m1 = plan.m_at(g);
    const std::uint64_t m2 = plan.m_at(g + 1);
    if (m2 > m1 && m1 >= 3) {
      const auto& a = plan.deleted[g];
      const auto& b = plan.deleted[g + 1];
      CHECK(std::includes(b.begin(), b.end(), a.begin(), a.end()));
    }
  }
}

TEST_CASE("half overlap keeps the declared minimum intersection") {
  const DeletionSchedule sched{ScheduleKind::fixed_k, 4, 0.5};
  const auto plan = make_overlapping_pair(sched, 60, 12, 0.5, {13, 0});
  for (std::uint64_t g = 0; g < 12; ++g) {
    const auto& a = plan.deleted[g];
    const auto& b = plan.deleted[g + 1];
    if (a.empty() || b.empty()) continue;
    std::vector<std::uint32_t> common;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                          std::back_inserter(common));
    const auto required = static_cast<std::size_t>(
        std::ceil(0.5 * static_cast<double>(a.size())));
    CHECK(common.size() >= required);
    if (std::min(a.size(), b.size()) == 4) CHECK(common.size() >= 2);
  }
}

TEST_CASE("overlap plan sizes follow the schedule rule") {
  // Brute-force re-verification of the generated plan: sizes, range, and
  // the pairwise minimum intersection, recomputed with std::set.
  const DeletionSchedule sched{ScheduleKind::power_law, 0, 0.7};
  const auto plan = make_overlapping_pair(sched, 200, 10, 0.8, {17, 0});
  for (std::uint64_t g = 0; g <= 10; ++g) {
    const std::uint64_t m = plan.m_at(g);
    CHECK(plan.deleted[g].size() == k_star(sched, m));
    for (auto idx : plan.deleted[g]) CHECK(idx <= m);
  }
  for (std::uint64_t g = 0; g < 10; ++g) {
    const std::set<std::uint32_t> a(plan.deleted[g].begin(),
                                    plan.deleted[g].end());
    std::size_t shared = 0;
    for (auto idx : plan.deleted[g + 1]) shared += a.count(idx);
    CHECK(shared >= static_cast<std::size_t>(
                        std::ceil(0.8 * static_cast<double>(a.size()))));
  }
}

TEST_CASE("overlap with a never-deleting schedule is a domain error") {
  CHECK_THROWS_AS(make_overlapping_pair({ScheduleKind::fixed_k, 0, 0.5}, 20,
                                        5, 1.0, {1, 0}),
                  std::domain_error);
  CHECK_THROWS_AS(make_overlapping_pair({ScheduleKind::fixed_k, 2, 0.5}, 20,
                                        5, 0.0, {1, 0}),
                  ConfigError);
}

TEST_CASE("plan JSON round trip") {
  const DeletionSchedule sched{ScheduleKind::fixed_k, 2, 0.5};
  const auto plan =
      make_plan(sched, SelectionRule::random_per_time, 12, 6, {23, 5});
  const auto text = plan_to_json(plan);
  CHECK(text.find("\"n\":12") != std::string::npos);
  CHECK(text.find("\"grid\":6") != std::string::npos);
  CHECK(text.find("\"selection\":\"random_per_time\"") != std::string::npos);
  CHECK(text.find("\"deleted\":") != std::string::npos);
  const auto back = plan_from_json(text);
  CHECK(back.n == plan.n);
  CHECK(back.grid_size == plan.grid_size);
  CHECK(back.selection == plan.selection);
  CHECK(back.deleted == plan.deleted);
}

TEST_CASE("random plans are reproducible per stream") {
  const DeletionSchedule sched{ScheduleKind::power_law, 0, 0.5};
  const auto a = make_plan(sched, SelectionRule::random_per_time, 100, 10, {5, 1});
  const auto b = make_plan(sched, SelectionRule::random_per_time, 100, 10, {5, 1});
  const auto c = make_plan(sched, SelectionRule::random_per_time, 100, 10, {5, 2});
  CHECK(a.deleted == b.deleted);
  CHECK(a.deleted != c.deleted);
}
