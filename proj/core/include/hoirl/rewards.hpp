#pragma once

#include <vector>

#include "hoirl/judge.hpp"
#include "hoirl/types.hpp"

namespace hoirl {

/// Intersection-over-union of two boxes; 0 when the union is degenerate.
double iou(const BoundingBox& a, const BoundingBox& b);

/// One greedily matched (prediction, ground truth) pair, keyed by the mean
/// of its human-box and object-box IoUs.
struct MatchPair {
  int pred_index = -1;
  int gt_index = -1;
  double mean_iou = 0.0;

  friend bool operator==(const MatchPair&, const MatchPair&) = default;
};

using Matching = std::vector<MatchPair>;

/// Greedy one-to-one assignment: rank every (pred, gt) pair by mean IoU
/// descending (ties: lower pred index, then lower gt index), take a pair when
/// both sides are still free, and never match pairs whose mean IoU is zero.
Matching match_predictions(const std::vector<HoiTriplet>& preds,
                           const std::vector<HoiTriplet>& gts);

/// 1 when the raw text obeys the output grammar, else 0.
double format_reward(const StructuredOutput& out);
double format_reward(const std::string& raw_text);

/// Localization quality over 2·|gt| box anchors (one human and one object
/// anchor per ground-truth triplet). r_iou credits an anchor when its IoU
/// clears the threshold; r_reg credits it when the mean absolute error of
/// the four coordinates is strictly below delta. Unmatched ground truth
/// leaves its anchors uncredited.
struct DetectionScore {
  double r_iou = 0.0;
  double r_reg = 0.0;
  double r_det = 0.0; // beta_det * r_iou + (1 - beta_det) * r_reg
};

DetectionScore detection_reward(const std::vector<HoiTriplet>& preds,
                                const std::vector<HoiTriplet>& gts, const Matching& matching,
                                const RewardWeights& w);

/// Label accuracy over matched pairs, denominated by |gt|: r_act for verbs,
/// r_obj for object categories, exact case-insensitive comparison.
struct InteractionScore {
  double r_act = 0.0;
  double r_obj = 0.0;
  double r_int = 0.0; // gamma * r_act + (1 - gamma) * r_obj
};

InteractionScore interaction_reward(const std::vector<HoiTriplet>& preds,
                                    const std::vector<HoiTriplet>& gts, const Matching& matching,
                                    const RewardWeights& w);

/// Reasoning quality from judge scores: r_prm averages the per-step scores,
/// r_grm the per-group scores. Throws JudgeError when either list is empty.
struct CotScore {
  double r_prm = 0.0;
  double r_grm = 0.0;
  double r_cot = 0.0; // lambda_cot * r_prm + (1 - lambda_cot) * r_grm
};

CotScore cot_reward(const JudgeResponse& resp, const RewardWeights& w);

/// Full scoring pipeline for one structured output against one sample. An
/// output that fails the grammar check is gated: every component and the
/// composite are zero and the judge is never consulted.
RewardBreakdown composite_reward(const StructuredOutput& out, const GroundTruthSample& sample,
                                 const RewardWeights& w, CotJudge& judge);

/// Parse raw text, then score it.
RewardBreakdown score_output(const std::string& raw_text, const GroundTruthSample& sample,
                             const RewardWeights& w, CotJudge& judge);

} // namespace hoirl
