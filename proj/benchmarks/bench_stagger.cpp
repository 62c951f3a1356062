#include <random>
#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "stagger/closures.hpp"
#include "stagger/config.hpp"
#include "stagger/driver.hpp"
#include "stagger/limiters.hpp"
#include "stagger/scheme.hpp"
#include "support/stage_samples.hpp"

using namespace stagger;

namespace {

std::vector<testing::StageSample> stages(const Moment13Model& model, int n) {
  std::mt19937 rng(7);
  std::vector<testing::StageSample> out;
  for (int i = 0; i < n; ++i) out.push_back(testing::random_stage(model, rng));
  return out;
}

void BM_LimitedDerivative(benchmark::State& state) {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<StencilWindow> windows(1024);
  for (auto& w : windows)
    for (double& x : w.f) x = u(rng);
  for (auto _ : state)
    for (const auto& w : windows) benchmark::DoNotOptimize(limited_derivative(w));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(windows.size()));
}
BENCHMARK(BM_LimitedDerivative);

void BM_StageScalar(benchmark::State& state) {
  const Moment13Model model(preset("paper-case-1").params);
  const auto samples = stages(model, 64);
  for (auto _ : state)
    for (const auto& s : samples)
      benchmark::DoNotOptimize(solve_stage_scalar(model, s.target, 0.0, SolverConfig{}));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(samples.size()));
}
BENCHMARK(BM_StageScalar);

void BM_StageFull(benchmark::State& state) {
  const Moment13Model model(preset("paper-case-1").params);
  const auto samples = stages(model, 64);
  for (auto _ : state)
    for (const auto& s : samples)
      benchmark::DoNotOptimize(solve_stage_entropic(model, s.target, 0.0, SolverConfig{}));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(samples.size()));
}
BENCHMARK(BM_StageFull);

void BM_CaseOneStep(benchmark::State& state) {
  auto cfg = preset("paper-case-1");
  cfg.closure = static_cast<ClosureKind>(state.range(0));
  const Moment13Model model(cfg.params);
  const double dx = 1.0 / cfg.grid.N;
  SchemeOptions opts;
  opts.closure = cfg.closure;
  CentralScheme<Moment13Model> scheme(model, dx, opts);
  const auto ic = moment_initial_field(cfg);
  const double dt = cfg.grid.lambda * dx;
  for (auto _ : state) benchmark::DoNotOptimize(scheme.step(ic, dt));
  state.SetLabel(std::string(to_string(cfg.closure)));
}
BENCHMARK(BM_CaseOneStep)
    ->Arg(static_cast<int>(ClosureKind::Naive))
    ->Arg(static_cast<int>(ClosureKind::EntropicScalar))
    ->Arg(static_cast<int>(ClosureKind::EntropicFull))
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
