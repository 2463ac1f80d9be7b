#include "donsker/deletion.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "donsker/errors.hpp"

namespace donsker {

namespace {

void check_schedule(const DeletionSchedule& s) {
  if (s.kind == ScheduleKind::power_law && !(s.r > 0.0 && s.r < 1.0)) {
    throw ConfigError("power_law schedule requires r in (0,1)");
  }
}

}  // namespace

std::vector<std::uint32_t> sample_index_subset(std::uint64_t m, std::uint64_t k,
                                               CounterRng& rng) {
  if (k > m) throw std::domain_error("sample_index_subset: k > m");
  std::vector<std::uint32_t> out;
  if (k == 0) return out;
  out.reserve(k);

  // Algorithm choice depends only on (m, k), so streams stay reproducible.
  if (k <= 128) {
    // Floyd with linear membership scan; k is small enough that the scan
    // beats any set structure.
    for (std::uint64_t j = m - k + 1; j <= m; ++j) {
      const std::uint64_t t = 1 + rng.next_below(j);
      if (std::find(out.begin(), out.end(), static_cast<std::uint32_t>(t)) !=
          out.end()) {
        out.push_back(static_cast<std::uint32_t>(j));
      } else {
        out.push_back(static_cast<std::uint32_t>(t));
      }
    }
  } else if (k * 8 < m) {
    std::unordered_set<std::uint32_t> seen;
    seen.reserve(2 * k);
    for (std::uint64_t j = m - k + 1; j <= m; ++j) {
      const std::uint64_t t = 1 + rng.next_below(j);
      if (!seen.insert(static_cast<std::uint32_t>(t)).second) {
        seen.insert(static_cast<std::uint32_t>(j));
        out.push_back(static_cast<std::uint32_t>(j));
      } else {
        out.push_back(static_cast<std::uint32_t>(t));
      }
    }
  } else {
    // Dense draw: partial Fisher-Yates over {1..m}.
    std::vector<std::uint32_t> pool(m);
    for (std::uint64_t i = 0; i < m; ++i) {
      pool[i] = static_cast<std::uint32_t>(i + 1);
    }
    for (std::uint64_t i = 0; i < k; ++i) {
      const std::uint64_t j = i + rng.next_below(m - i);
      std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
    out = std::move(pool);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string DeletionSchedule::describe() const {
  switch (kind) {
    case ScheduleKind::none: return "none";
    case ScheduleKind::fixed_k: return "fixed_k(k=" + std::to_string(k) + ")";
    case ScheduleKind::power_law: {
      char buf[48];
      std::snprintf(buf, sizeof buf, "power_law(r=%g)", r);
      return buf;
    }
  }
  return "?";
}

std::uint64_t k_star(const DeletionSchedule& schedule, std::uint64_t m) {
  check_schedule(schedule);
  if (m <= 1) return 0;
  switch (schedule.kind) {
    case ScheduleKind::none:
      return 0;
    case ScheduleKind::fixed_k:
      return std::min(schedule.k, m - 1);
    case ScheduleKind::power_law:
      return std::min<std::uint64_t>(
          static_cast<std::uint64_t>(
              std::floor(std::pow(static_cast<double>(m), schedule.r))),
          m - 1);
  }
  return 0;
}

double negligibility_ratio(const DeletionSchedule& schedule, std::uint64_t n) {
  if (n == 0) throw std::domain_error("negligibility_ratio: n must be >= 1");
  return static_cast<double>(k_star(schedule, n)) / static_cast<double>(n);
}

bool DeletionPlan::empty() const {
  return std::all_of(deleted.begin(), deleted.end(),
                     [](const auto& d) { return d.empty(); });
}

DeletionPlan make_plan(const DeletionSchedule& schedule, SelectionRule selection,
                       std::uint64_t n, std::uint64_t grid_size,
                       SeededStream stream) {
  check_schedule(schedule);
  if (n < 1 || grid_size < 1) {
    throw std::domain_error("make_plan: n and grid_size must be >= 1");
  }

  DeletionPlan plan;
  plan.n = n;
  plan.grid_size = grid_size;
  plan.selection = selection;
  plan.deleted.resize(grid_size + 1);

  if (schedule.kind == ScheduleKind::fixed_k && schedule.k >= n) {
    plan.warnings.push_back("fixed_k k=" + std::to_string(schedule.k) +
                            " >= n=" + std::to_string(n) + "; clamped to n-1");
  }

  CounterRng rng(stream);

  std::vector<std::uint32_t> static_pool;
  if (selection == SelectionRule::static_random) {
    const std::uint64_t kn = k_star(schedule, n);
    if (kn > 0) static_pool = sample_index_subset(n, kn, rng);
  }

  for (std::uint64_t g = 0; g <= grid_size; ++g) {
    const std::uint64_t m = plan.m_at(g);
    const std::uint64_t k = k_star(schedule, m);
    auto& dst = plan.deleted[g];
    if (selection == SelectionRule::static_random) {
      const auto end = std::upper_bound(static_pool.begin(), static_pool.end(),
                                        static_cast<std::uint32_t>(m));
      dst.assign(static_pool.begin(), end);
      continue;
    }
    if (k == 0) continue;
    switch (selection) {
      case SelectionRule::prefix:
        dst.resize(k);
        for (std::uint64_t i = 0; i < k; ++i)
          dst[i] = static_cast<std::uint32_t>(i + 1);
        break;
      case SelectionRule::suffix:
        dst.resize(k);
        for (std::uint64_t i = 0; i < k; ++i)
          dst[i] = static_cast<std::uint32_t>(m - k + 1 + i);
        break;
      case SelectionRule::random_per_time:
        dst = sample_index_subset(m, k, rng);
        break;
      case SelectionRule::static_random:
        break;  // handled above
    }
  }
  return plan;
}

DeletionPlan make_overlapping_pair(const DeletionSchedule& schedule,
                                   std::uint64_t n, std::uint64_t grid_size,
                                   double overlap_fraction, SeededStream stream) {
  check_schedule(schedule);
  if (!(overlap_fraction > 0.0) || overlap_fraction > 1.0) {
    throw ConfigError("make_overlapping_pair: overlap_fraction must be in (0,1]");
  }
  if (n < 1 || grid_size < 1) {
    throw std::domain_error("make_overlapping_pair: n and grid_size must be >= 1");
  }
  if (k_star(schedule, n) == 0) {
    throw std::domain_error(
        "make_overlapping_pair: schedule never deletes, overlap impossible");
  }

  DeletionPlan plan;
  plan.n = n;
  plan.grid_size = grid_size;
  plan.selection = SelectionRule::random_per_time;
  plan.deleted.resize(grid_size + 1);

  CounterRng rng(stream);
  std::vector<std::uint32_t> prev;

  for (std::uint64_t g = 0; g <= grid_size; ++g) {
    const std::uint64_t m = plan.m_at(g);
    const std::uint64_t k = k_star(schedule, m);
    auto& dst = plan.deleted[g];
    if (k == 0) {
      prev.clear();
      continue;
    }

    // k*(m) is nondecreasing in m, so all of prev still fits below m.
    const std::uint64_t required = std::min<std::uint64_t>(
        prev.size(),
        static_cast<std::uint64_t>(
            std::ceil(overlap_fraction * static_cast<double>(prev.size()))));

    std::vector<std::uint32_t> chosen;
    if (required == prev.size()) {
      chosen = prev;
    } else if (required > 0) {
      const auto pick = sample_index_subset(prev.size(), required, rng);
      chosen.reserve(required);
      for (auto pos : pick) chosen.push_back(prev[pos - 1]);
      std::sort(chosen.begin(), chosen.end());
    }

    // Top up with fresh indices from {1..m} \ chosen.
    std::uint64_t need = k - chosen.size();
    if (need > 0) {
      if (2 * k > m) {
        // Dense regime: enumerate the complement and subsample it.
        std::vector<std::uint32_t> pool;
        pool.reserve(m - chosen.size());
        std::size_t c = 0;
        for (std::uint64_t i = 1; i <= m; ++i) {
          if (c < chosen.size() && chosen[c] == i) {
            ++c;
          } else {
            pool.push_back(static_cast<std::uint32_t>(i));
          }
        }
        const auto pick = sample_index_subset(pool.size(), need, rng);
        for (auto pos : pick) chosen.push_back(pool[pos - 1]);
      } else {
        std::vector<std::uint32_t> sorted_view = chosen;
        std::sort(sorted_view.begin(), sorted_view.end());
        while (need > 0) {
          const auto cand = static_cast<std::uint32_t>(1 + rng.next_below(m));
          if (std::binary_search(sorted_view.begin(), sorted_view.end(), cand)) {
            continue;
          }
          chosen.push_back(cand);
          sorted_view.insert(std::upper_bound(sorted_view.begin(),
                                              sorted_view.end(), cand),
                             cand);
          --need;
        }
      }
    }
    std::sort(chosen.begin(), chosen.end());
    dst = chosen;
    prev = std::move(chosen);
  }
  return plan;
}

std::string plan_to_json(const DeletionPlan& plan) {
  nlohmann::json j;
  j["n"] = plan.n;
  j["grid"] = plan.grid_size;
  j["selection"] = to_string(plan.selection);
  j["deleted"] = plan.deleted;
  if (!plan.warnings.empty()) j["warnings"] = plan.warnings;
  return j.dump();
}

DeletionPlan plan_from_json(std::string_view text) {
  nlohmann::json j = nlohmann::json::parse(text);
  DeletionPlan plan;
  plan.n = j.at("n").get<std::uint64_t>();
  plan.grid_size = j.at("grid").get<std::uint64_t>();
  plan.selection = selection_from_string(j.at("selection").get<std::string>());
  plan.deleted = j.at("deleted").get<std::vector<std::vector<std::uint32_t>>>();
  if (j.contains("warnings"))
    plan.warnings = j["warnings"].get<std::vector<std::string>>();
  if (plan.deleted.size() != plan.grid_size + 1) {
    throw std::domain_error("plan_from_json: deleted array size mismatch");
  }
  return plan;
}

const char* to_string(SelectionRule rule) {
  switch (rule) {
    case SelectionRule::prefix: return "prefix";
    case SelectionRule::suffix: return "suffix";
    case SelectionRule::random_per_time: return "random_per_time";
    case SelectionRule::static_random: return "static_random";
  }
  return "?";
}

SelectionRule selection_from_string(std::string_view name) {
  if (name == "prefix") return SelectionRule::prefix;
  if (name == "suffix") return SelectionRule::suffix;
  if (name == "random_per_time") return SelectionRule::random_per_time;
  if (name == "static_random") return SelectionRule::static_random;
  throw ConfigError("unknown selection rule '" + std::string(name) + "'");
}

const char* to_string(ScheduleKind kind) {
  switch (kind) {
    case ScheduleKind::none: return "none";
    case ScheduleKind::fixed_k: return "fixed_k";
    case ScheduleKind::power_law: return "power_law";
  }
  return "?";
}

ScheduleKind schedule_kind_from_string(std::string_view name) {
  if (name == "none") return ScheduleKind::none;
  if (name == "fixed_k") return ScheduleKind::fixed_k;
  if (name == "power_law") return ScheduleKind::power_law;
  throw ConfigError("unknown schedule kind '" + std::string(name) + "'");
}

}  // namespace donsker
