#include "hoirl/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <unordered_map>
#include <unordered_set>

#include "hoirl/rewards.hpp"

namespace hoirl {

SampleMetrics sample_metrics(const std::vector<HoiTriplet>& preds,
                             const std::vector<HoiTriplet>& gts) {
  SampleMetrics m;
  if (gts.empty()) return m;

  const Matching matching = match_predictions(preds, gts);
  std::vector<int> match_of(gts.size(), -1); // gt index -> pred index
  for (const auto& pair : matching)
    match_of[static_cast<std::size_t>(pair.gt_index)] = pair.pred_index;

  double h_sum = 0.0, o_sum = 0.0;
  int verb_hits = 0;
  for (std::size_t g = 0; g < gts.size(); ++g) {
    const int p = match_of[g];
    if (p < 0) continue; // unmatched ground truth scores zero everywhere
    const auto& pred = preds[static_cast<std::size_t>(p)];
    h_sum += iou(pred.human_box, gts[g].human_box);
    o_sum += iou(pred.object_box, gts[g].object_box);
    if (labels_equal(pred.verb_label, gts[g].verb_label)) ++verb_hits;
  }
  const double n = static_cast<double>(gts.size());
  m.h_miou = h_sum / n;
  m.o_miou = o_sum / n;
  m.a_acc = verb_hits / n;
  m.map_pass = m.h_miou > 0.5 && m.o_miou > 0.5;
  return m;
}

MetricAggregate aggregate_rows(const std::vector<SampleEval>& rows) {
  MetricAggregate agg;
  agg.n_samples = static_cast<int>(rows.size());
  if (rows.empty()) return agg;
  int passes = 0;
  for (const auto& row : rows) {
    agg.h_miou += row.metrics.h_miou;
    agg.o_miou += row.metrics.o_miou;
    agg.a_acc += row.metrics.a_acc;
    if (row.metrics.map_pass) ++passes;
  }
  const double n = static_cast<double>(rows.size());
  agg.h_miou /= n;
  agg.o_miou /= n;
  agg.a_acc /= n;
  agg.map_rate = passes / n;
  return agg;
}

EvalReport evaluate(const std::vector<PredictionRecord>& preds,
                    const std::vector<GroundTruthSample>& gts) {
  EvalReport report;

  std::unordered_map<std::string, const GroundTruthSample*> gt_by_id;
  for (const auto& gt : gts) {
    if (!gt_by_id.emplace(gt.sample_id, &gt).second)
      report.errors.push_back(gt.sample_id + ": duplicate ground-truth sample");
  }

  std::unordered_set<std::string> scored;
  for (const auto& pred : preds) {
    const auto it = gt_by_id.find(pred.sample_id);
    if (it == gt_by_id.end()) {
      report.errors.push_back(pred.sample_id + ": no ground truth for this prediction");
      continue;
    }
    if (!scored.insert(pred.sample_id).second) {
      report.errors.push_back(pred.sample_id + ": duplicate prediction");
      continue;
    }
    const GroundTruthSample& gt = *it->second;
    report.rows.push_back(
        {gt.sample_id, gt.split, gt.annotation_scheme, sample_metrics(pred.triplets, gt.gt_triplets)});
  }
  for (const auto& gt : gts)
    if (!scored.count(gt.sample_id))
      report.errors.push_back(gt.sample_id + ": no prediction for this sample");

  report.overall = aggregate_rows(report.rows);
  std::map<Split, std::vector<SampleEval>> split_rows;
  std::map<AnnotationScheme, std::vector<SampleEval>> scheme_rows;
  for (const auto& row : report.rows) {
    split_rows[row.split].push_back(row);
    scheme_rows[row.annotation_scheme].push_back(row);
  }
  for (const auto& [split, rows] : split_rows) report.by_split[split] = aggregate_rows(rows);
  for (const auto& [scheme, rows] : scheme_rows) report.by_scheme[scheme] = aggregate_rows(rows);
  return report;
}

double h_miou(const std::vector<PredictionRecord>& preds,
              const std::vector<GroundTruthSample>& gts) {
  return evaluate(preds, gts).overall.h_miou;
}

double o_miou(const std::vector<PredictionRecord>& preds,
              const std::vector<GroundTruthSample>& gts) {
  return evaluate(preds, gts).overall.o_miou;
}

double a_acc(const std::vector<PredictionRecord>& preds,
             const std::vector<GroundTruthSample>& gts) {
  return evaluate(preds, gts).overall.a_acc;
}

double map_rate(const std::vector<PredictionRecord>& preds,
                const std::vector<GroundTruthSample>& gts) {
  return evaluate(preds, gts).overall.map_rate;
}

std::string format_report_table(const EvalReport& report) {
  std::string out;
  char line[160];
  auto emit = [&](const std::string& label, const MetricAggregate& agg) {
    std::snprintf(line, sizeof line, "%-16s %8.4f %8.4f %8.4f %8.4f %6d\n", label.c_str(),
                  agg.h_miou, agg.o_miou, agg.a_acc, agg.map_rate, agg.n_samples);
    out += line;
  };
  std::snprintf(line, sizeof line, "%-16s %8s %8s %8s %8s %6s\n", "slice", "h_miou", "o_miou",
                "a_acc", "map_rate", "n");
  out += line;
  emit("overall", report.overall);
  for (const auto& [split, agg] : report.by_split) emit("split:" + to_string(split), agg);
  for (const auto& [scheme, agg] : report.by_scheme) emit("scheme:" + to_string(scheme), agg);
  if (!report.errors.empty()) {
    out += "errors:\n";
    for (const auto& e : report.errors) out += "  " + e + "\n";
  }
  return out;
}

} // namespace hoirl
