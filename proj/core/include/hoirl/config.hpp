#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hoirl/judge.hpp"
#include "hoirl/toy_env.hpp"
#include "hoirl/types.hpp"

namespace hoirl {

enum class JudgeKind { reference, external };

std::string to_string(JudgeKind k);

/// Everything a command run needs: reward weights, optimizer settings, scene
/// recipe, judge selection, and file locations. One seed drives all
/// randomness (scene generation and rollout sampling alike).
struct RunConfig {
  RewardWeights rewards;
  GrpoConfig grpo;
  SceneSpec scene;
  JudgeKind judge = JudgeKind::reference;
  ExternalJudgeConfig external_judge;
  std::string dataset;     // ground-truth JSONL
  std::string predictions; // predictions / raw-output JSONL for eval and score
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  int gen_count = 8; // scenes emitted by dataset generation
};

std::vector<std::string> validate(const RunConfig& c);

/// Parses the plain-text key-value format:
///
///   # comment lines start with '#'
///   key = value
///
/// Recognized keys: seed, dataset, predictions, out_dir, gen_count,
/// judge, judge.endpoint, judge.timeout_ms, judge.max_inflight,
/// reward.{beta_det,gamma,lambda_cot,delta,iou_threshold,
///         w_format,w_det,w_int,w_cot,grm_group_size},
/// grpo.{group_size,clip_epsilon,beta_kl,learning_rate,iterations,std_guard},
/// scene.{grid_resolution,n_objects,verbs,objects,boxes_per_side,template_cap}.
///
/// Vocabulary values are comma-separated label lists. Unknown or duplicate
/// keys and malformed lines raise ConfigError with the line number; missing
/// keys keep their defaults. After parsing, every embedded config is
/// validated and all violations are reported in one ConfigError.
RunConfig parse_config_text(const std::string& text, const std::string& origin);

/// parse_config_text over a file's contents. Throws ConfigError when the
/// file cannot be read.
RunConfig load_config(const std::string& path);

} // namespace hoirl
