#pragma once

#include <span>
#include <string>
#include <vector>

#include "hoirl/grpo.hpp"
#include "hoirl/metrics.hpp"
#include "hoirl/types.hpp"

namespace hoirl {

// Line formats, one JSON object per line:
//   dataset     {"sample_id","query","annotation_scheme","split",
//                "gt":[{"subject","verb","object","human_box":[4],"object_box":[4]}]}
//   predictions {"sample_id","triplets":[ same triplet shape ]}
//   raw outputs {"sample_id","output_text"}
//   scores      {"sample_id", <RewardBreakdown fields>}
//   history     {"iter","mean_reward","objective","mean_kl","wall_ms"}
// Box arrays are [x_min, y_min, x_max, y_max] in normalized coordinates.
// Readers throw IoError with "path:line:" context; writers emit byte-stable
// output (field order fixed, shortest round-trip doubles).

std::string to_json_line(const GroundTruthSample& s);
std::string to_json_line(const PredictionRecord& p);
std::string to_json_line(const IterationStats& s);

GroundTruthSample sample_from_json(const std::string& text);
PredictionRecord prediction_from_json(const std::string& text);

/// A raw model response awaiting scoring.
struct RawOutputRecord {
  std::string sample_id;
  std::string output_text;

  friend bool operator==(const RawOutputRecord&, const RawOutputRecord&) = default;
};

std::string to_json_line(const RawOutputRecord& r);
RawOutputRecord raw_output_from_json(const std::string& text);

std::string breakdown_to_json_line(const std::string& sample_id, const RewardBreakdown& b);

std::vector<GroundTruthSample> read_dataset(const std::string& path);
void write_dataset(const std::string& path, const std::vector<GroundTruthSample>& samples);

std::vector<PredictionRecord> read_predictions(const std::string& path);
void write_predictions(const std::string& path, const std::vector<PredictionRecord>& preds);

std::vector<RawOutputRecord> read_raw_outputs(const std::string& path);
void write_raw_outputs(const std::string& path, const std::vector<RawOutputRecord>& outputs);

void write_history(const std::string& path, const std::vector<IterationStats>& history);
std::vector<IterationStats> read_history(const std::string& path);

/// {"params": [...]} as a single JSON document.
void write_params(const std::string& path, std::span<const double> params);
std::vector<double> read_params(const std::string& path);

std::string report_to_json(const EvalReport& report);

} // namespace hoirl
