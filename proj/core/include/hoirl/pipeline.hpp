#pragma once

#include <memory>
#include <string>
#include <vector>

#include "hoirl/config.hpp"
#include "hoirl/grpo.hpp"
#include "hoirl/judge.hpp"
#include "hoirl/metrics.hpp"
#include "hoirl/toy_env.hpp"

namespace hoirl {

/// Judge instance per the config: the reference judge, or the external
/// service wrapped so that transport failures fall back to the reference
/// judge instead of killing a run.
std::unique_ptr<CotJudge> make_judge(const RunConfig& c);

/// Expected per-sample metrics of a template policy on one scene: the
/// softmax-weighted average over the whole table, computed by enumeration
/// rather than sampling.
struct ExpectedMetrics {
  double h_miou = 0.0;
  double o_miou = 0.0;
  double a_acc = 0.0;
  double map_rate = 0.0; // probability of drawing a template passing the strict test
};

ExpectedMetrics expected_metrics(const TemplatePolicy& policy, std::span<const double> params,
                                 const GroundTruthSample& scene);

/// Softmax-weighted composite reward over the table.
double expected_composite(const TemplatePolicy& policy, std::span<const double> params,
                          const GroundTruthSample& scene, const RewardWeights& w, CotJudge& judge);

/// Writes gen_count scenes (seeds seed, seed+1, ...) to out_dir/synthetic.jsonl.
struct GenResult {
  std::vector<GroundTruthSample> samples;
  std::string dataset_path;
};

GenResult run_gen(const RunConfig& c);

/// Trains a template policy on the seeded synthetic task and writes
/// history.jsonl, params.json and predictions.jsonl (the argmax template's
/// triplets for the scene) to out_dir.
struct TrainRunResult {
  TrainResult train;
  GroundTruthSample scene;
  double optimal_reward = 0.0;        // best point-mass policy on this task
  double final_expected_reward = 0.0; // trained policy's expected composite
  std::string history_path, params_path, predictions_path;
};

TrainRunResult run_train(const RunConfig& c);

/// Scores a raw-output JSONL file against the ground-truth dataset, writing
/// one reward breakdown per scoreable line to out_dir/scores.jsonl. Lines
/// whose sample_id has no ground truth become errors; the run continues.
struct ScoreResult {
  int scored = 0;
  std::vector<std::string> errors;
  std::string scores_path;
};

ScoreResult run_score(const RunConfig& c);

/// Evaluates a predictions file against the dataset and writes
/// out_dir/report.json.
struct EvalRunResult {
  EvalReport report;
  std::string report_path;
};

EvalRunResult run_eval(const RunConfig& c);

/// One ablation variant: a reward configuration, its trained policy's
/// expected metrics on the scene, and its expected composite under the FULL
/// reward (so rows stay comparable).
struct AblationRow {
  std::string variant;
  ExpectedMetrics metrics;
  double expected_full_reward = 0.0;
};

/// Reruns training once per variant: the full reward, each reward term
/// zeroed (its weight redistributed over the rest), and a no-post-training
/// row evaluated at the initial parameters. Writes out_dir/ablation.json and
/// returns the rows in a fixed order:
///   full, wo_pt, wo_fr, wo_dr, wo_ir, wo_cotr.
std::vector<AblationRow> run_ablate(const RunConfig& c);

std::string format_ablation_table(const std::vector<AblationRow>& rows);

} // namespace hoirl
