#include "hoirl/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <unordered_map>

#include <json.hpp>

#include "hoirl/errors.hpp"
#include "hoirl/grammar.hpp"
#include "hoirl/jsonl.hpp"
#include "hoirl/rewards.hpp"

namespace hoirl {

namespace {

std::string joined(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

void ensure_out_dir(const RunConfig& c) {
  std::error_code ec;
  std::filesystem::create_directories(c.out_dir, ec);
  if (ec) throw IoError("cannot create output directory " + c.out_dir + ": " + ec.message());
}

} // namespace

std::unique_ptr<CotJudge> make_judge(const RunConfig& c) {
  if (c.judge == JudgeKind::reference) return std::make_unique<ReferenceJudge>();
  return std::make_unique<FallbackJudge>(std::make_unique<ExternalJudge>(c.external_judge),
                                         std::make_unique<ReferenceJudge>());
}

ExpectedMetrics expected_metrics(const TemplatePolicy& policy, std::span<const double> params,
                                 const GroundTruthSample& scene) {
  const auto probs = policy.probabilities(params);
  ExpectedMetrics e;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    const SampleMetrics m =
        sample_metrics(policy.table().outputs[i].triplets, scene.gt_triplets);
    e.h_miou += probs[i] * m.h_miou;
    e.o_miou += probs[i] * m.o_miou;
    e.a_acc += probs[i] * m.a_acc;
    if (m.map_pass) e.map_rate += probs[i];
  }
  return e;
}

double expected_composite(const TemplatePolicy& policy, std::span<const double> params,
                          const GroundTruthSample& scene, const RewardWeights& w,
                          CotJudge& judge) {
  const auto probs = policy.probabilities(params);
  double total = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i)
    total += probs[i] * composite_reward(policy.table().outputs[i], scene, w, judge).composite;
  return total;
}

GenResult run_gen(const RunConfig& c) {
  ensure_out_dir(c);
  GenResult result;
  for (int i = 0; i < c.gen_count; ++i) {
    SceneSpec spec = c.scene;
    spec.rng_seed = c.seed + static_cast<std::uint64_t>(i);
    result.samples.push_back(generate_scene(spec));
  }
  result.dataset_path = joined(c.out_dir, "synthetic.jsonl");
  write_dataset(result.dataset_path, result.samples);
  return result;
}

TrainRunResult run_train(const RunConfig& c) {
  ensure_out_dir(c);
  TrainRunResult result;
  result.scene = generate_scene(c.scene);
  const TemplatePolicy policy(build_template_table(c.scene));
  const auto judge = make_judge(c);

  // Each template's score against the scene is fixed, so score once and look
  // the rest up instead of re-running matching and the judge per rollout.
  std::unordered_map<std::string, double> composite_of;
  for (int i = 0; i < policy.table().size(); ++i) {
    const auto& out = policy.table().outputs[static_cast<std::size_t>(i)];
    composite_of[out.raw_text] =
        composite_reward(out, result.scene, c.rewards, *judge).composite;
  }
  const RewardFn reward_fn = [&](const std::string& raw, const GroundTruthSample& sample) {
    RewardBreakdown b;
    const auto it = composite_of.find(raw);
    b.composite = it != composite_of.end()
                      ? it->second
                      : score_output(raw, sample, c.rewards, *judge).composite;
    return b;
  };

  result.train = train(policy, {result.scene}, reward_fn, c.grpo);
  result.optimal_reward =
      optimal_expected_reward(result.scene, policy.table(), c.rewards, *judge);
  result.final_expected_reward =
      expected_composite(policy, result.train.params, result.scene, c.rewards, *judge);

  result.history_path = joined(c.out_dir, "history.jsonl");
  write_history(result.history_path, result.train.history);
  result.params_path = joined(c.out_dir, "params.json");
  write_params(result.params_path, result.train.params);

  const auto probs = policy.probabilities(result.train.params);
  const auto best =
      static_cast<std::size_t>(std::max_element(probs.begin(), probs.end()) - probs.begin());
  result.predictions_path = joined(c.out_dir, "predictions.jsonl");
  write_predictions(result.predictions_path,
                    {{result.scene.sample_id, policy.table().outputs[best].triplets}});
  return result;
}

ScoreResult run_score(const RunConfig& c) {
  ensure_out_dir(c);
  const auto outputs = read_raw_outputs(c.predictions);
  const auto dataset = read_dataset(c.dataset);
  const auto judge = make_judge(c);

  std::unordered_map<std::string, const GroundTruthSample*> gt_by_id;
  for (const auto& s : dataset) gt_by_id.emplace(s.sample_id, &s);

  ScoreResult result;
  result.scores_path = joined(c.out_dir, "scores.jsonl");
  std::ofstream out(result.scores_path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + result.scores_path);
  for (const auto& record : outputs) {
    const auto it = gt_by_id.find(record.sample_id);
    if (it == gt_by_id.end()) {
      result.errors.push_back(record.sample_id + ": no ground truth for this output");
      continue;
    }
    // A malformed output_text is not an error: format gating scores it zero.
    const RewardBreakdown b = score_output(record.output_text, *it->second, c.rewards, *judge);
    out << breakdown_to_json_line(record.sample_id, b) << "\n";
    ++result.scored;
  }
  if (!out) throw IoError("write failed for " + result.scores_path);
  return result;
}

EvalRunResult run_eval(const RunConfig& c) {
  ensure_out_dir(c);
  EvalRunResult result;
  result.report = evaluate(read_predictions(c.predictions), read_dataset(c.dataset));
  result.report_path = joined(c.out_dir, "report.json");
  std::ofstream out(result.report_path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + result.report_path);
  out << report_to_json(result.report) << "\n";
  if (!out) throw IoError("write failed for " + result.report_path);
  return result;
}

namespace {

// Zeroes one composite weight and spreads its mass over the others, keeping
// the sum-to-1 invariant (and so the composite's [0,1] range) intact.
RewardWeights without_term(const RewardWeights& w, double RewardWeights::* term) {
  RewardWeights out = w;
  const double removed = out.*term;
  const double rest = 1.0 - removed;
  if (rest <= 0.0)
    throw TrainError("cannot ablate a reward term carrying all of the composite weight");
  out.*term = 0.0;
  out.w_format /= rest;
  out.w_det /= rest;
  out.w_int /= rest;
  out.w_cot /= rest;
  return out;
}

} // namespace

std::vector<AblationRow> run_ablate(const RunConfig& c) {
  ensure_out_dir(c);
  const GroundTruthSample scene = generate_scene(c.scene);
  const TemplatePolicy policy(build_template_table(c.scene));
  const auto judge = make_judge(c);

  struct Variant {
    std::string name;
    RewardWeights weights;
    bool post_train;
  };
  const std::vector<Variant> variants = {
      {"full", c.rewards, true},
      {"wo_pt", c.rewards, false},
      {"wo_fr", without_term(c.rewards, &RewardWeights::w_format), true},
      {"wo_dr", without_term(c.rewards, &RewardWeights::w_det), true},
      {"wo_ir", without_term(c.rewards, &RewardWeights::w_int), true},
      {"wo_cotr", without_term(c.rewards, &RewardWeights::w_cot), true},
  };

  std::vector<AblationRow> rows;
  for (const auto& variant : variants) {
    std::vector<double> params;
    if (variant.post_train) {
      std::unordered_map<std::string, double> composite_of;
      for (const auto& out : policy.table().outputs)
        composite_of[out.raw_text] =
            composite_reward(out, scene, variant.weights, *judge).composite;
      const RewardFn reward_fn = [&](const std::string& raw, const GroundTruthSample&) {
        RewardBreakdown b;
        b.composite = composite_of.at(raw);
        return b;
      };
      params = train(policy, {scene}, reward_fn, c.grpo).params;
    } else {
      params = policy.initial_params();
    }
    AblationRow row;
    row.variant = variant.name;
    row.metrics = expected_metrics(policy, params, scene);
    row.expected_full_reward = expected_composite(policy, params, scene, c.rewards, *judge);
    rows.push_back(std::move(row));
  }

  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  for (const auto& row : rows) {
    j.push_back({{"variant", row.variant},
                 {"h_miou", row.metrics.h_miou},
                 {"o_miou", row.metrics.o_miou},
                 {"a_acc", row.metrics.a_acc},
                 {"map_rate", row.metrics.map_rate},
                 {"expected_full_reward", row.expected_full_reward}});
  }
  const std::string path = joined(c.out_dir, "ablation.json");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  out << j.dump(2) << "\n";
  if (!out) throw IoError("write failed for " + path);
  return rows;
}

std::string format_ablation_table(const std::vector<AblationRow>& rows) {
  std::string out;
  char line[160];
  std::snprintf(line, sizeof line, "%-8s %8s %8s %8s %8s %10s\n", "variant", "h_miou", "o_miou",
                "a_acc", "map_rate", "reward");
  out += line;
  for (const auto& row : rows) {
    std::snprintf(line, sizeof line, "%-8s %8.4f %8.4f %8.4f %8.4f %10.4f\n", row.variant.c_str(),
                  row.metrics.h_miou, row.metrics.o_miou, row.metrics.a_acc, row.metrics.map_rate,
                  row.expected_full_reward);
    out += line;
  }
  return out;
}

} // namespace hoirl
