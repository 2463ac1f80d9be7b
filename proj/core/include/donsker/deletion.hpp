#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "donsker/rng.hpp"

namespace donsker {

// How many of the first m indices are deleted. fixed_k clamps to m-1 so
// the retained set is never empty; power_law uses floor(m^r) with
// 0 < r < 1, which satisfies the negligibility condition k*(m)/m -> 0.
enum class ScheduleKind { none, fixed_k, power_law };

struct DeletionSchedule {
  ScheduleKind kind = ScheduleKind::none;
  std::uint64_t k = 0;  // fixed_k
  double r = 0.5;       // power_law exponent

  std::string describe() const;
};

// k*(m) under the schedule, always < m for m >= 1 and 0 for m <= 1.
std::uint64_t k_star(const DeletionSchedule& schedule, std::uint64_t m);

// k*(n)/n; callers assert monotone decay of this across an n-grid.
double negligibility_ratio(const DeletionSchedule& schedule, std::uint64_t n);

// Which k*(m) indices of {1..m} get deleted at each grid time.
//   prefix          {1..k*}
//   suffix          {m-k*+1..m}
//   random_per_time fresh uniform k*-subset at every grid time
//   static_random   one fixed D of size k*(n); deleted(g) = D cap {1..m_g}
enum class SelectionRule { prefix, suffix, random_per_time, static_random };

// Deletion schedule materialized on the uniform grid t_g = g/grid_size,
// g = 0..grid_size. Indices are 1-based (deleted(g) is a subset of
// {1..m_g} with m_g = floor(n t_g), computed in exact integer
// arithmetic). Immutable once built; safe to share across workers.
struct DeletionPlan {
  std::uint64_t n = 0;
  std::uint64_t grid_size = 0;
  SelectionRule selection = SelectionRule::random_per_time;
  std::vector<std::vector<std::uint32_t>> deleted;  // one sorted set per g
  std::vector<std::string> warnings;

  std::uint64_t m_at(std::uint64_t g) const { return n * g / grid_size; }
  double time_at(std::uint64_t g) const {
    return static_cast<double>(g) / static_cast<double>(grid_size);
  }
  bool empty() const;  // true iff deleted(g) is empty for all g
};

DeletionPlan make_plan(const DeletionSchedule& schedule, SelectionRule selection,
                       std::uint64_t n, std::uint64_t grid_size,
                       SeededStream stream);

// Uniform random k-subset of {1..m}, sorted (Floyd's algorithm). The
// primitive behind the random selection rules; exposed for callers that
// apply one static deletion set without materializing a plan.
std::vector<std::uint32_t> sample_index_subset(std::uint64_t m, std::uint64_t k,
                                               CounterRng& rng);

// random_per_time plan in which deleted(g) and deleted(g+1) share at
// least ceil(overlap_fraction * |deleted(g)|) indices. Carrying deleted
// indices across grid times is the device that makes increments of the
// deleted partial sum correlated. Throws std::domain_error when the
// schedule never deletes anything.
DeletionPlan make_overlapping_pair(const DeletionSchedule& schedule,
                                   std::uint64_t n, std::uint64_t grid_size,
                                   double overlap_fraction, SeededStream stream);

// {"n":..., "grid":..., "selection":..., "deleted":[[...],...]}
std::string plan_to_json(const DeletionPlan& plan);
DeletionPlan plan_from_json(std::string_view text);

const char* to_string(SelectionRule rule);
SelectionRule selection_from_string(std::string_view name);
const char* to_string(ScheduleKind kind);
ScheduleKind schedule_kind_from_string(std::string_view name);

}  // namespace donsker
