#include <benchmark/benchmark.h>

#include <vector>

#include "wsndet/fusion.hpp"
#include "wsndet/montecarlo.hpp"
#include "wsndet/rng.hpp"

using namespace wsndet;

namespace {

struct Setup {
  Scene scene;
  GridSpec grid;
  std::vector<Trial> trials;
};

// K = 49 boundary grid, unit-variance Gaussian noise, tau = 0, Nc x Nc positions
// and the 63-point amplitude grid. Reports are drawn under H1 at 5 dB.
Setup make_setup(int nc, std::size_t n_trials) {
  const Region unit = Region::unit_square();
  Scene scene = Scene::homogeneous(preset_grid_wsn(7, unit), NoiseModel::gaussian(1.0), 0.0, 0.0,
                                   0.2, 4.0, unit);
  const auto snr = db_range(-10, 20);
  GridSpec grid = default_grids(unit, nc, snr);
  std::vector<Trial> trials;
  RandomStream rng(42);
  for (std::size_t t = 0; t < n_trials; ++t) {
    Point x = unit.sample(rng);
    trials.push_back({simulate_report(scene, TargetState{snr_db_to_theta(5.0), x}, rng), x});
  }
  return {std::move(scene), std::move(grid), std::move(trials)};
}

template <class Evaluator>
void run(benchmark::State& state) {
  const auto s = make_setup(static_cast<int>(state.range(0)), 64);
  const Evaluator eval(s.scene, s.grid);
  std::vector<double> out(s.trials.size());
  for (auto _ : state) {
    eval.evaluate(s.trials, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(s.trials.size()));
}

void BM_GRao(benchmark::State& state) { run<GRaoEvaluator>(state); }
void BM_Glr(benchmark::State& state) { run<GlrEvaluator>(state); }

void BM_GRaoDirect(benchmark::State& state) {
  const auto s = make_setup(static_cast<int>(state.range(0)), 8);
  std::size_t t = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(grao_statistic(s.trials[t++ % 8].report, s.scene, s.grid).value);
  }
}

}  // namespace

BENCHMARK(BM_GRao)->Arg(50)->Arg(100)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Glr)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GRaoDirect)->Arg(50)->Unit(benchmark::kMicrosecond);
BENCHMARK_MAIN();
