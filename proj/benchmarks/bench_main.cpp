#include "whatif/datagen.hpp"
#include "whatif/describer.hpp"
#include "whatif/effects.hpp"
#include "whatif/metrics.hpp"
#include "whatif/parser.hpp"
#include "whatif/physics.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace whatif;

namespace {

const std::vector<Example>& batch() {
  static const std::vector<Example> b = datagen::gen_batch(0, 1);
  return b;
}

const Example& example_of(ActionKind kind) {
  for (const auto& e : batch())
    if (e.action.kind == kind) return e;
  return batch().front();
}

const parser::LinearModel& linear_model() {
  static const parser::LinearModel m = [] {
    std::vector<std::pair<std::string, Action>> corpus;
    for (int b = 0; b < 4; ++b)
      for (const auto& e : datagen::gen_batch(b, 2)) corpus.emplace_back(e.action_text, e.action);
    return parser::train_linear(corpus);
  }();
  return m;
}

void BM_Simulate(benchmark::State& state) {
  const Example& e = example_of(static_cast<ActionKind>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(physics::simulate(e.scene, e.action, 0));
  state.SetLabel(std::string(action_kind_id(e.action.kind)));
}
BENCHMARK(BM_Simulate)->DenseRange(0, kNumActionKinds - 1)->Unit(benchmark::kMillisecond);

void BM_Settle(benchmark::State& state) {
  const Scene s = batch().front().scene;
  for (auto _ : state) benchmark::DoNotOptimize(physics::settle(s, 0));
}
BENCHMARK(BM_Settle)->Unit(benchmark::kMillisecond);

void BM_ParseRules(benchmark::State& state) {
  std::size_t i = 0;
  for (auto _ : state) {
    const Example& e = batch()[i++ % batch().size()];
    benchmark::DoNotOptimize(parser::parse_rules(e.action_text, &e.scene));
  }
}
BENCHMARK(BM_ParseRules);

void BM_ParseLinear(benchmark::State& state) {
  const auto& m = linear_model();
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(parser::parse_linear(m, batch()[i++ % batch().size()].action_text));
}
BENCHMARK(BM_ParseLinear);

void BM_Metrics(benchmark::State& state) {
  const std::string p = "the foam is pushed a little by the screw driver";
  const std::string r = "the foam brick is pushed by the screwdriver";
  for (auto _ : state) {
    benchmark::DoNotOptimize(metrics::bleu(p, r));
    benchmark::DoNotOptimize(metrics::rouge_l(p, r));
    benchmark::DoNotOptimize(metrics::com(p, r));
  }
}
BENCHMARK(BM_Metrics);

void BM_GridSearch(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 0.05);
  std::vector<effects::LabeledSummary> ex;
  for (int i = 0; i < state.range(0); ++i) {
    const double st = u(rng), sr = 10 * u(rng);
    ex.push_back({{st, sr}, st > 0.02 || sr > 0.3});
  }
  for (auto _ : state) benchmark::DoNotOptimize(effects::grid_search(ex));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_GridSearch)->RangeMultiplier(4)->Range(64, 4096)->Complexity();

void BM_Describe(benchmark::State& state) {
  const Example& e = example_of(ActionKind::Push);
  const auto sim = physics::simulate(e.scene, e.action, 0);
  const auto stats = effects::PoseStats::identity();
  for (auto _ : state) benchmark::DoNotOptimize(describer::describe_all(sim, e.action, stats, {0.001, 0.01}));
}
BENCHMARK(BM_Describe);

}  // namespace

BENCHMARK_MAIN();
