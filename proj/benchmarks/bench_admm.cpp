#include <benchmark/benchmark.h>

#include "nashadmm/admm.hpp"
#include "nashadmm/presets.hpp"

using namespace nashadmm;

namespace {

struct Fixture {
  CournotGame game;
  CommGraph graph;
  AdmmParams params;
  AugmentedState state;

  explicit Fixture(std::size_t n)
      : game(presets::generate_cournot(
            presets::CournotFamily{presets::random_participation(std::max<std::size_t>(2, n / 3), n, 3, 7)}, 7)),
        graph(presets::random_connected_graph(n, n / 2, 11)),
        params(AdmmParams::uniform(1.0, 30.0, 10.0, n)),
        state(initial_state(game, InitSpec{Interval{0, 0.5}, {0, 1}, 13})) {}
};

void BM_Step(benchmark::State& st) {
  Fixture f(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) {
    f.state = step(f.state, f.game, f.graph, f.params);
    benchmark::DoNotOptimize(f.state.x.data());
  }
}
BENCHMARK(BM_Step)->Arg(8)->Arg(20)->Arg(64)->Arg(128);

void BM_StepVectorized(benchmark::State& st) {
  Fixture f(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) {
    f.state = step_vectorized(f.state, f.game, f.graph, f.params);
    benchmark::DoNotOptimize(f.state.x.data());
  }
}
BENCHMARK(BM_StepVectorized)->Arg(8)->Arg(20)->Arg(64);

void BM_Run(benchmark::State& st) {
  Fixture f(static_cast<std::size_t>(st.range(0)));
  StoppingRule stop;
  stop.max_iterations = 1000;
  stop.tolerance = 0.0;
  RunOptions opts;
  opts.threads = static_cast<std::size_t>(st.range(1));
  for (auto _ : st) benchmark::DoNotOptimize(run(f.game, f.graph, f.params, f.state, stop, opts).iterations);
}
BENCHMARK(BM_Run)->Args({64, 1})->Args({64, 4})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
