#include "hoirl/rewards.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "hoirl/errors.hpp"
#include "hoirl/grammar.hpp"

namespace hoirl {

double iou(const BoundingBox& a, const BoundingBox& b) {
  const double ix = std::max(0.0, std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min));
  const double iy = std::max(0.0, std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min));
  const double inter = ix * iy;
  const double uni = box_area(a) + box_area(b) - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

Matching match_predictions(const std::vector<HoiTriplet>& preds,
                           const std::vector<HoiTriplet>& gts) {
  struct Candidate {
    double mean_iou;
    int p;
    int g;
  };
  std::vector<Candidate> candidates;
  candidates.reserve(preds.size() * gts.size());
  for (int p = 0; p < static_cast<int>(preds.size()); ++p) {
    for (int g = 0; g < static_cast<int>(gts.size()); ++g) {
      const double miou = 0.5 * (iou(preds[static_cast<std::size_t>(p)].human_box,
                                     gts[static_cast<std::size_t>(g)].human_box) +
                                 iou(preds[static_cast<std::size_t>(p)].object_box,
                                     gts[static_cast<std::size_t>(g)].object_box));
      if (miou > 0.0) candidates.push_back({miou, p, g});
    }
  }
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    if (a.mean_iou != b.mean_iou) return a.mean_iou > b.mean_iou;
    if (a.p != b.p) return a.p < b.p;
    return a.g < b.g;
  });

  std::vector<bool> pred_used(preds.size(), false), gt_used(gts.size(), false);
  Matching out;
  for (const auto& c : candidates) {
    if (pred_used[static_cast<std::size_t>(c.p)] || gt_used[static_cast<std::size_t>(c.g)])
      continue;
    pred_used[static_cast<std::size_t>(c.p)] = true;
    gt_used[static_cast<std::size_t>(c.g)] = true;
    out.push_back({c.p, c.g, c.mean_iou});
  }
  return out;
}

double format_reward(const StructuredOutput& out) { return out.format_valid ? 1.0 : 0.0; }

double format_reward(const std::string& raw_text) {
  return check_format(raw_text) ? 1.0 : 0.0;
}

namespace {

// Mean absolute error of the four box coordinates.
double box_mae(const BoundingBox& a, const BoundingBox& b) {
  return 0.25 * (std::abs(a.x_min - b.x_min) + std::abs(a.y_min - b.y_min) +
                 std::abs(a.x_max - b.x_max) + std::abs(a.y_max - b.y_max));
}

} // namespace

DetectionScore detection_reward(const std::vector<HoiTriplet>& preds,
                                const std::vector<HoiTriplet>& gts, const Matching& matching,
                                const RewardWeights& w) {
  if (gts.empty()) throw std::invalid_argument("detection reward needs ground truth");
  DetectionScore s;
  int iou_hits = 0, reg_hits = 0;
  for (const auto& m : matching) {
    const auto& p = preds.at(static_cast<std::size_t>(m.pred_index));
    const auto& g = gts.at(static_cast<std::size_t>(m.gt_index));
    if (iou(p.human_box, g.human_box) >= w.iou_threshold) ++iou_hits;
    if (iou(p.object_box, g.object_box) >= w.iou_threshold) ++iou_hits;
    if (box_mae(p.human_box, g.human_box) < w.delta) ++reg_hits;
    if (box_mae(p.object_box, g.object_box) < w.delta) ++reg_hits;
  }
  const double anchors = 2.0 * static_cast<double>(gts.size());
  s.r_iou = iou_hits / anchors;
  s.r_reg = reg_hits / anchors;
  s.r_det = w.beta_det * s.r_iou + (1.0 - w.beta_det) * s.r_reg;
  return s;
}

InteractionScore interaction_reward(const std::vector<HoiTriplet>& preds,
                                    const std::vector<HoiTriplet>& gts, const Matching& matching,
                                    const RewardWeights& w) {
  if (gts.empty()) throw std::invalid_argument("interaction reward needs ground truth");
  InteractionScore s;
  int act_hits = 0, obj_hits = 0;
  for (const auto& m : matching) {
    const auto& p = preds.at(static_cast<std::size_t>(m.pred_index));
    const auto& g = gts.at(static_cast<std::size_t>(m.gt_index));
    if (labels_equal(p.verb_label, g.verb_label)) ++act_hits;
    if (labels_equal(p.object_label, g.object_label)) ++obj_hits;
  }
  const double n = static_cast<double>(gts.size());
  s.r_act = act_hits / n;
  s.r_obj = obj_hits / n;
  s.r_int = w.gamma * s.r_act + (1.0 - w.gamma) * s.r_obj;
  return s;
}

CotScore cot_reward(const JudgeResponse& resp, const RewardWeights& w) {
  if (resp.step_scores.empty()) throw JudgeError("judge returned no step scores");
  if (resp.group_scores.empty()) throw JudgeError("judge returned no group scores");
  auto mean = [](const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  };
  CotScore s;
  s.r_prm = mean(resp.step_scores);
  s.r_grm = mean(resp.group_scores);
  s.r_cot = w.lambda_cot * s.r_prm + (1.0 - w.lambda_cot) * s.r_grm;
  return s;
}

RewardBreakdown composite_reward(const StructuredOutput& out, const GroundTruthSample& sample,
                                 const RewardWeights& w, CotJudge& judge) {
  if (sample.gt_triplets.empty())
    throw std::invalid_argument("sample '" + sample.sample_id + "' has no ground truth");

  RewardBreakdown b;
  b.r_format = format_reward(out);
  if (b.r_format == 0.0) return b; // malformed output earns nothing

  const Matching matching = match_predictions(out.triplets, sample.gt_triplets);
  const DetectionScore det = detection_reward(out.triplets, sample.gt_triplets, matching, w);
  const InteractionScore inter = interaction_reward(out.triplets, sample.gt_triplets, matching, w);

  JudgeRequest req;
  req.query = sample.query;
  req.trace = out.trace;
  req.gt_triplets = sample.gt_triplets;
  req.group_partition = partition_groups(out.trace, w.grm_group_size);
  const CotScore cot = cot_reward(judge.score(req), w);

  b.r_iou = det.r_iou;
  b.r_reg = det.r_reg;
  b.r_det = det.r_det;
  b.r_act = inter.r_act;
  b.r_obj = inter.r_obj;
  b.r_int = inter.r_int;
  b.r_prm = cot.r_prm;
  b.r_grm = cot.r_grm;
  b.r_cot = cot.r_cot;
  b.composite =
      w.w_format * b.r_format + w.w_det * b.r_det + w.w_int * b.r_int + w.w_cot * b.r_cot;
  return b;
}

RewardBreakdown score_output(const std::string& raw_text, const GroundTruthSample& sample,
                             const RewardWeights& w, CotJudge& judge) {
  return composite_reward(parse_output(raw_text), sample, w, judge);
}

} // namespace hoirl
