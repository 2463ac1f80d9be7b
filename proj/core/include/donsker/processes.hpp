#pragma once

#include <cstdint>
#include <vector>

#include "donsker/deletion.hpp"
#include "donsker/oracles.hpp"
#include "donsker/sampling.hpp"
#include "donsker/test_functions.hpp"

namespace donsker {

enum class Interpolation { step, polygonal };

// normalized applies the 1/(sigma sqrt(n)) Donsker scaling; raw keeps
// plain sums (used by the variance/structure checks).
enum class Scaling { normalized, raw };

// A scalar path sampled on the uniform grid t_g = g/grid_size. values[0]
// corresponds to t = 0 and is 0 for every partial-sum construction.
struct PathOnGrid {
  std::uint64_t grid_size = 0;
  std::vector<double> values;  // grid_size + 1 entries
  Interpolation interpolation = Interpolation::step;
  double scale = 1.0;  // factor actually applied to the raw sums

  double time_at(std::uint64_t g) const {
    return static_cast<double>(g) / static_cast<double>(grid_size);
  }
};

// Step: value at t_g is S_{floor(n t_g)} * scale. Polygonal additionally
// carries the fractional term (n t - floor(n t)) xi_{floor(n t)+1}.
PathOnGrid build_partial_sum(const SampleSequence& sample,
                             std::uint64_t grid_size, Interpolation interp,
                             Scaling scaling = Scaling::normalized);

// Same construction summing only retained indices {1..m_g} \ deleted(g).
// The polygonal fractional term always references the raw sequence entry
// xi_{floor(nt)+1}, even if that index is deleted at a later grid time.
// A plan with every deleted(g) empty reproduces build_partial_sum
// bit-exactly.
PathOnGrid build_deleted_partial_sum(const SampleSequence& sample,
                                     const DeletionPlan& plan,
                                     Interpolation interp,
                                     Scaling scaling = Scaling::normalized);

enum class EmpiricalFlavor { raw_df, centered, scaled };

// Empirical distribution function data on a sorted evaluation grid.
// raw_df:   (1/n) sum over retained i of 1{xi_i <= x}
// centered: (1/n) sum over retained i of (1{xi_i <= x} - F(x))
// scaled:   sqrt(n) * centered (exact pointwise identity)
// The normalizer is always n, not n - k*.
struct EmpiricalPath {
  std::vector<double> xs;
  std::vector<double> values;
  std::vector<double> truth_values;  // F at xs; empty for raw_df
  EmpiricalFlavor flavor = EmpiricalFlavor::raw_df;
};

// With a plan, retained indices are {1..n} minus the plan's deletion set
// at its final grid time (where m = n). truth may be empty for raw_df.
EmpiricalPath build_empirical(const SampleSequence& sample, const Cdf& truth,
                              std::vector<double> xs, EmpiricalFlavor flavor,
                              const DeletionPlan* plan = nullptr);

// Sequential empirical process values (1/sqrt(n)) * sum over retained
// i <= m_g of (f(xi_i) - Pf), one column per test function.
struct SequentialField {
  std::uint64_t grid_size = 0;
  std::vector<TestFunction> functions;
  std::vector<double> values;  // row-major (grid_size+1) x functions

  double at(std::uint64_t g, std::size_t j) const {
    return values[g * functions.size() + j];
  }
  double time_at(std::uint64_t g) const {
    return static_cast<double>(g) / static_cast<double>(grid_size);
  }
};

SequentialField build_sequential_field(const SampleSequence& sample,
                                       std::vector<TestFunction> functions,
                                       std::uint64_t grid_size,
                                       const DeletionPlan* plan = nullptr);

}  // namespace donsker
