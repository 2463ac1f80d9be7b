#include <benchmark/benchmark.h>

#include "donsker/deletion.hpp"
#include "donsker/oracles.hpp"
#include "donsker/processes.hpp"
#include "donsker/sampling.hpp"
#include "donsker/stats.hpp"

namespace {

using namespace donsker;

void BM_draw_iid_normal(benchmark::State& state) {
  const DistributionSpec spec{DistKind::normal, 1.0};
  const auto n = static_cast<std::size_t>(state.range(0));
  std::uint64_t rep = 0;
  for (auto _ : state) {
    auto s = draw_iid(spec, n, SeededStream{42, rep++});
    benchmark::DoNotOptimize(s.values.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_draw_iid_normal)->Arg(1 << 12)->Arg(1 << 16);

void BM_build_deleted_partial_sum(benchmark::State& state) {
  const DistributionSpec spec{DistKind::normal, 1.0};
  const auto n = static_cast<std::uint64_t>(state.range(0));
  const auto sample = draw_iid(spec, n, SeededStream{42, 0});
  const DeletionSchedule schedule{ScheduleKind::power_law, 0, 0.5};
  const auto plan = make_plan(schedule, SelectionRule::random_per_time, n, 100,
                              SeededStream{42, 1});
  for (auto _ : state) {
    auto path =
        build_deleted_partial_sum(sample, plan, Interpolation::polygonal);
    benchmark::DoNotOptimize(path.values.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_build_deleted_partial_sum)->Arg(1 << 12)->Arg(1 << 16);

void BM_ks_one_sample(benchmark::State& state) {
  const DistributionSpec spec{DistKind::normal, 1.0};
  const auto m = static_cast<std::size_t>(state.range(0));
  const auto sample = draw_iid(spec, m, SeededStream{7, 0});
  const auto law = LimitLaw::normal_marginal(1.0);
  for (auto _ : state) {
    auto report = ks_one_sample(sample.values,
                                [&](double x) { return law.cdf(x); });
    benchmark::DoNotOptimize(report.statistic);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ks_one_sample)->Arg(1 << 12)->Arg(1 << 14);

void BM_kolmogorov_cdf(benchmark::State& state) {
  double x = 0.3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(donsker::kolmogorov_cdf(x));
    x += 1e-6;
  }
}
BENCHMARK(BM_kolmogorov_cdf);

}  // namespace

BENCHMARK_MAIN();
