// Microbenchmarks for the hot paths: grammar parsing and validation, greedy
// matching, full composite scoring, and one optimizer iteration on the toy
// task. Run with --benchmark_filter=... to narrow.

#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "hoirl/grammar.hpp"
#include "hoirl/grpo.hpp"
#include "hoirl/judge.hpp"
#include "hoirl/rewards.hpp"
#include "hoirl/toy_env.hpp"
#include "hoirl/types.hpp"

namespace {

using namespace hoirl;

HoiTriplet bench_triplet(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> cell(0, 15);
  auto box = [&] {
    const int x0 = cell(rng), y0 = cell(rng);
    return BoundingBox{x0 / 16.0, y0 / 16.0, (x0 + 1 + cell(rng) % (16 - x0)) / 16.0,
                       (y0 + 1 + cell(rng) % (16 - y0)) / 16.0};
  };
  HoiTriplet t;
  t.subject_label = "human";
  t.verb_label = cell(rng) % 2 ? "hold" : "ride";
  t.object_label = cell(rng) % 2 ? "cup" : "bicycle";
  t.human_box = box();
  t.object_box = box();
  return t;
}

std::string bench_output_text(std::mt19937_64& rng, int n_triplets) {
  std::vector<HoiTriplet> triplets;
  for (int i = 0; i < n_triplets; ++i) triplets.push_back(bench_triplet(rng));
  return render_output({"the human reaches toward the object", "so the human will hold the cup"},
                       triplets);
}

void BM_parse_output(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const std::string text = bench_output_text(rng, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(parse_output(text));
  state.SetBytesProcessed(static_cast<int64_t>(state.iterations()) *
                          static_cast<int64_t>(text.size()));
}
BENCHMARK(BM_parse_output)->Arg(1)->Arg(4);

void BM_check_format(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const std::string text = bench_output_text(rng, 2);
  for (auto _ : state) benchmark::DoNotOptimize(check_format(text));
}
BENCHMARK(BM_check_format);

void BM_match_predictions(benchmark::State& state) {
  std::mt19937_64 rng(3);
  const int n = static_cast<int>(state.range(0));
  std::vector<HoiTriplet> preds, gts;
  for (int i = 0; i < n; ++i) {
    preds.push_back(bench_triplet(rng));
    gts.push_back(bench_triplet(rng));
  }
  for (auto _ : state) benchmark::DoNotOptimize(match_predictions(preds, gts));
}
BENCHMARK(BM_match_predictions)->Arg(2)->Arg(4);

void BM_composite_reward(benchmark::State& state) {
  std::mt19937_64 rng(4);
  GroundTruthSample scene;
  scene.sample_id = "bench";
  scene.query = "what is the human doing";
  scene.gt_triplets = {bench_triplet(rng), bench_triplet(rng)};
  const StructuredOutput out = parse_output(bench_output_text(rng, 2));
  ReferenceJudge judge;
  const RewardWeights w;
  for (auto _ : state) benchmark::DoNotOptimize(composite_reward(out, scene, w, judge));
}
BENCHMARK(BM_composite_reward);

void BM_train_iteration(benchmark::State& state) {
  SceneSpec spec; // 256 templates
  spec.rng_seed = 5;
  const auto scene = generate_scene(spec);
  const TemplatePolicy policy(build_template_table(spec));
  ReferenceJudge judge;
  const RewardWeights w;
  std::vector<double> composites;
  for (const auto& out : policy.table().outputs)
    composites.push_back(composite_reward(out, scene, w, judge).composite);
  const RewardFn reward_fn = [&](const std::string& raw, const GroundTruthSample&) {
    RewardBreakdown b;
    b.composite = composites[static_cast<std::size_t>(policy.table().index_of(raw))];
    return b;
  };
  GrpoConfig cfg;
  cfg.iterations = 1;
  cfg.beta_kl = 0.0;
  for (auto _ : state) {
    cfg.rng_seed = static_cast<std::uint64_t>(state.iterations());
    benchmark::DoNotOptimize(train(policy, {scene}, reward_fn, cfg));
  }
}
BENCHMARK(BM_train_iteration)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
