#pragma once

#include <map>
#include <string>
#include <vector>

#include "hoirl/types.hpp"

namespace hoirl {

/// One model's predicted triplet set for a sample.
struct PredictionRecord {
  std::string sample_id;
  std::vector<HoiTriplet> triplets;

  friend bool operator==(const PredictionRecord&, const PredictionRecord&) = default;
};

/// Per-sample scores. The IoU means run over the sample's ground-truth
/// triplets with the same greedy matching the reward uses; an unmatched
/// ground truth contributes zero. map_pass records whether both means are
/// strictly above 0.5.
struct SampleMetrics {
  double h_miou = 0.0;
  double o_miou = 0.0;
  double a_acc = 0.0;
  bool map_pass = false;

  friend bool operator==(const SampleMetrics&, const SampleMetrics&) = default;
};

SampleMetrics sample_metrics(const std::vector<HoiTriplet>& preds,
                             const std::vector<HoiTriplet>& gts);

struct SampleEval {
  std::string sample_id;
  Split split = Split::seen;
  AnnotationScheme annotation_scheme = AnnotationScheme::precise;
  SampleMetrics metrics;
};

/// Means of per-sample rows; map_rate is the fraction of rows passing the
/// strict both-above-0.5 test.
struct MetricAggregate {
  double h_miou = 0.0;
  double o_miou = 0.0;
  double a_acc = 0.0;
  double map_rate = 0.0;
  int n_samples = 0;
};

MetricAggregate aggregate_rows(const std::vector<SampleEval>& rows);

/// Corpus scores plus per-sample rows and split / annotation-scheme
/// breakdowns. Samples present on only one side become error strings; the
/// run continues over the intersection.
struct EvalReport {
  MetricAggregate overall;
  std::vector<SampleEval> rows;
  std::map<Split, MetricAggregate> by_split;
  std::map<AnnotationScheme, MetricAggregate> by_scheme;
  std::vector<std::string> errors;
};

EvalReport evaluate(const std::vector<PredictionRecord>& preds,
                    const std::vector<GroundTruthSample>& gts);

// Corpus-level conveniences over the matched id intersection.
double h_miou(const std::vector<PredictionRecord>& preds,
              const std::vector<GroundTruthSample>& gts);
double o_miou(const std::vector<PredictionRecord>& preds,
              const std::vector<GroundTruthSample>& gts);
double a_acc(const std::vector<PredictionRecord>& preds,
             const std::vector<GroundTruthSample>& gts);
double map_rate(const std::vector<PredictionRecord>& preds,
                const std::vector<GroundTruthSample>& gts);

/// Aligned-column text rendering of a report.
std::string format_report_table(const EvalReport& report);

} // namespace hoirl
