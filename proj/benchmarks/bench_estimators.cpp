// Microbenchmarks for the hot paths of a fit: kernel weights, the two least-squares
// blocks, the full estimator chain and the cross-validation score.

#include <benchmark/benchmark.h>

#include <optional>

#include "esdr/estimators.hpp"
#include "esdr/families.hpp"
#include "esdr/order.hpp"
#include "esdr/pipeline.hpp"
#include "esdr/random.hpp"
#include "esdr/simgen.hpp"
#include "esdr/smoothing.hpp"

namespace {

using namespace esdr;

struct Problem {
  Matrix x;
  ResponsePanel panel;
  WeightPlan plan;
  Basis basis;
};

// Standardized Model D data with a 15-member characteristic panel.
Problem make_problem(Index n, Index p, Index d) {
  const FitConfig cfg;
  const auto sim = generate({Model::modelD, n, p, 1});
  Problem pr{working_predictors(sim.data.x(), cfg).z, {}, {}, sim.b0};
  Engine engine = derive_engine(1, {stream_tag("bench")});
  pr.panel = evaluate(sample_cf_family(1, cfg.m, engine), sim.data.y());
  pr.plan = full_weights(pr.x, bandwidth_initial(n, p, cfg.c0), cfg.kernel, cfg.trim_quantile);
  pr.basis = orthonormalize(standard_normal(p, d, engine));
  return pr;
}

void BM_FullWeights(benchmark::State& state) {
  const Problem pr = make_problem(state.range(0), 10, 1);
  for (auto _ : state) benchmark::DoNotOptimize(full_weights(pr.x, pr.plan.h, Kernel::biweight));
}
BENCHMARK(BM_FullWeights)->Arg(200)->Arg(400)->Arg(800)->Unit(benchmark::kMillisecond);

void BM_LocalStep(benchmark::State& state) {
  const Problem pr = make_problem(state.range(0), 10, 2);
  for (auto _ : state) benchmark::DoNotOptimize(mave_step_local(pr.x, pr.panel, pr.plan, pr.basis));
}
BENCHMARK(BM_LocalStep)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_GlobalStep(benchmark::State& state) {
  const Problem pr = make_problem(state.range(0), 10, 2);
  const LocalFit fits = mave_step_local(pr.x, pr.panel, pr.plan, pr.basis);
  for (auto _ : state) benchmark::DoNotOptimize(mave_step_global(pr.x, pr.panel, pr.plan, fits));
}
BENCHMARK(BM_GlobalStep)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_OpgEnsemble(benchmark::State& state) {
  const Problem pr = make_problem(state.range(0), 10, 1);
  const FitConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(opg_ensemble(pr.x, pr.panel, 1, cfg));
}
BENCHMARK(BM_OpgEnsemble)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_FitModelD(benchmark::State& state) {
  const auto sim = generate({Model::modelD, state.range(0), 10, 3});
  const FitConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(fit_dataset(sim.data, FamilySpec{}, Method::rmave, 1, cfg));
}
BENCHMARK(BM_FitModelD)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_CvScore(benchmark::State& state) {
  const Problem pr = make_problem(400, 10, state.range(0));
  const FitConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(cv_score(pr.x, pr.panel, std::optional<Basis>(pr.basis), cfg));
}
BENCHMARK(BM_CvScore)->Arg(1)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
