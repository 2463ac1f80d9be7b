#include "donsker/processes.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "donsker/errors.hpp"

namespace donsker {

namespace {

PathOnGrid build_sum_path(const SampleSequence& sample, std::uint64_t grid_size,
                          Interpolation interp, Scaling scaling,
                          const DeletionPlan* plan) {
  const std::uint64_t n = sample.size();
  if (n == 0) throw std::domain_error("partial sum of an empty sample");
  if (grid_size < 1) throw std::domain_error("grid_size must be >= 1");
  if (plan && plan->n != n) {
    throw std::domain_error("deletion plan built for a different n");
  }

  const double scale = scaling == Scaling::normalized
                           ? 1.0 / (sample.spec.sigma *
                                    std::sqrt(static_cast<double>(n)))
                           : 1.0;

  std::vector<double> prefix(n + 1, 0.0);
  for (std::uint64_t i = 0; i < n; ++i) {
    prefix[i + 1] = prefix[i] + sample.values[i];
  }

  PathOnGrid path;
  path.grid_size = grid_size;
  path.interpolation = interp;
  path.scale = scale;
  path.values.resize(grid_size + 1);

  for (std::uint64_t g = 0; g <= grid_size; ++g) {
    const std::uint64_t m = n * g / grid_size;  // exact floor(n t_g)
    const std::uint64_t rem = n * g % grid_size;
    double deleted_sum = 0.0;
    if (plan) {
      for (std::uint32_t idx : plan->deleted[g]) {
        deleted_sum += sample.values[idx - 1];
      }
    }
    double value = prefix[m] - deleted_sum;
    if (interp == Interpolation::polygonal && rem != 0) {
      value += (static_cast<double>(rem) / static_cast<double>(grid_size)) *
               sample.values[m];
    }
    path.values[g] = value * scale;
  }
  return path;
}

}  // namespace

PathOnGrid build_partial_sum(const SampleSequence& sample,
                             std::uint64_t grid_size, Interpolation interp,
                             Scaling scaling) {
  return build_sum_path(sample, grid_size, interp, scaling, nullptr);
}

PathOnGrid build_deleted_partial_sum(const SampleSequence& sample,
                                     const DeletionPlan& plan,
                                     Interpolation interp, Scaling scaling) {
  return build_sum_path(sample, plan.grid_size, interp, scaling, &plan);
}

EmpiricalPath build_empirical(const SampleSequence& sample, const Cdf& truth,
                              std::vector<double> xs, EmpiricalFlavor flavor,
                              const DeletionPlan* plan) {
  if (!std::is_sorted(xs.begin(), xs.end())) {
    throw std::domain_error("build_empirical: xs must be sorted");
  }
  if (flavor != EmpiricalFlavor::raw_df && !truth) {
    throw ConfigError("centered/scaled empirical flavors require the true df");
  }
  const std::uint64_t n = sample.size();
  if (n == 0) throw std::domain_error("empirical df of an empty sample");
  if (plan && plan->n != n) {
    throw std::domain_error("deletion plan built for a different n");
  }

  // Retained sample, sorted. Deletion acts on the whole sample, i.e. the
  // plan's final grid time where m = n.
  std::vector<double> retained;
  retained.reserve(n);
  if (plan) {
    const auto& del = plan->deleted[plan->grid_size];
    std::size_t d = 0;
    for (std::uint64_t i = 1; i <= n; ++i) {
      if (d < del.size() && del[d] == i) {
        ++d;
      } else {
        retained.push_back(sample.values[i - 1]);
      }
    }
  } else {
    retained = sample.values;
  }
  std::sort(retained.begin(), retained.end());
  const double r_count = static_cast<double>(retained.size());
  const double inv_n = 1.0 / static_cast<double>(n);
  const double root_n = std::sqrt(static_cast<double>(n));

  EmpiricalPath out;
  out.flavor = flavor;
  out.values.resize(xs.size());
  if (flavor != EmpiricalFlavor::raw_df) out.truth_values.resize(xs.size());

  for (std::size_t j = 0; j < xs.size(); ++j) {
    const double count = static_cast<double>(
        std::upper_bound(retained.begin(), retained.end(), xs[j]) -
        retained.begin());
    switch (flavor) {
      case EmpiricalFlavor::raw_df:
        out.values[j] = count * inv_n;
        break;
      case EmpiricalFlavor::centered: {
        const double f = truth(xs[j]);
        out.truth_values[j] = f;
        out.values[j] = (count - r_count * f) * inv_n;
        break;
      }
      case EmpiricalFlavor::scaled: {
        const double f = truth(xs[j]);
        out.truth_values[j] = f;
        out.values[j] = root_n * ((count - r_count * f) * inv_n);
        break;
      }
    }
  }
  out.xs = std::move(xs);
  return out;
}

SequentialField build_sequential_field(const SampleSequence& sample,
                                       std::vector<TestFunction> functions,
                                       std::uint64_t grid_size,
                                       const DeletionPlan* plan) {
  const std::uint64_t n = sample.size();
  if (n == 0) throw std::domain_error("sequential field of an empty sample");
  if (grid_size < 1) throw std::domain_error("grid_size must be >= 1");
  if (plan && (plan->n != n || plan->grid_size != grid_size)) {
    throw std::domain_error("deletion plan does not match sample/grid");
  }

  const std::size_t nf = functions.size();
  std::vector<double> pf(nf);
  for (std::size_t j = 0; j < nf; ++j) {
    pf[j] = mean_of(sample.spec, functions[j]);  // ConfigError if no moment
  }

  // Per-function prefix sums of the centered evaluations.
  std::vector<std::vector<double>> prefix(nf);
  for (std::size_t j = 0; j < nf; ++j) {
    prefix[j].resize(n + 1);
    prefix[j][0] = 0.0;
    for (std::uint64_t i = 0; i < n; ++i) {
      prefix[j][i + 1] =
          prefix[j][i] + (eval(functions[j], sample.spec, sample.values[i]) -
                          pf[j]);
    }
  }

  SequentialField field;
  field.grid_size = grid_size;
  field.values.resize((grid_size + 1) * nf);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));

  for (std::uint64_t g = 0; g <= grid_size; ++g) {
    const std::uint64_t m = n * g / grid_size;
    for (std::size_t j = 0; j < nf; ++j) {
      double value = prefix[j][m];
      if (plan) {
        for (std::uint32_t idx : plan->deleted[g]) {
          value -=
              eval(functions[j], sample.spec, sample.values[idx - 1]) - pf[j];
        }
      }
      field.values[g * nf + j] = value * scale;
    }
  }
  field.functions = std::move(functions);
  return field;
}

}  // namespace donsker
