#include "hoirl/jsonl.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hoirl/errors.hpp"

namespace hoirl {

namespace {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

ojson box_to_json(const BoundingBox& b) { return ojson{b.x_min, b.y_min, b.x_max, b.y_max}; }

ojson triplet_to_json(const HoiTriplet& t) {
  return ojson{{"subject", t.subject_label},
               {"verb", t.verb_label},
               {"object", t.object_label},
               {"human_box", box_to_json(t.human_box)},
               {"object_box", box_to_json(t.object_box)}};
}

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key))
    throw IoError(std::string("missing field '") + key + "'");
  return j.at(key);
}

std::string string_field(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_string()) throw IoError(std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

double number_field(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_number()) throw IoError(std::string("field '") + key + "' must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw IoError(std::string("field '") + key + "' is not finite");
  return d;
}

BoundingBox box_from_json(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_array() || v.size() != 4)
    throw IoError(std::string("field '") + key + "' must be a 4-element array");
  double c[4];
  for (std::size_t i = 0; i < 4; ++i) {
    if (!v[i].is_number()) throw IoError(std::string("field '") + key + "' must hold numbers");
    c[i] = v[i].get<double>();
  }
  return {c[0], c[1], c[2], c[3]};
}

HoiTriplet triplet_from_json(const json& j) {
  HoiTriplet t;
  t.subject_label = string_field(j, "subject");
  t.verb_label = string_field(j, "verb");
  t.object_label = string_field(j, "object");
  t.human_box = box_from_json(j, "human_box");
  t.object_box = box_from_json(j, "object_box");
  return t;
}

json parse_line(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const std::exception& e) {
    throw IoError(std::string("invalid JSON: ") + e.what());
  }
}

// Shared reader scaffold: skips blank lines, rethrows with path:line context.
template <typename T, typename Fn>
std::vector<T> read_lines(const std::string& path, Fn parse) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::vector<T> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      out.push_back(parse(line));
    } catch (const IoError& e) {
      throw IoError(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

template <typename T>
void write_lines(const std::string& path, const std::vector<T>& records) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  for (const auto& r : records) out << to_json_line(r) << "\n";
  if (!out) throw IoError("write failed for " + path);
}

} // namespace

std::string to_json_line(const GroundTruthSample& s) {
  ojson j;
  j["sample_id"] = s.sample_id;
  j["query"] = s.query;
  j["annotation_scheme"] = to_string(s.annotation_scheme);
  j["split"] = to_string(s.split);
  auto gt = ojson::array();
  for (const auto& t : s.gt_triplets) gt.push_back(triplet_to_json(t));
  j["gt"] = std::move(gt);
  return j.dump();
}

GroundTruthSample sample_from_json(const std::string& text) {
  const json j = parse_line(text);
  GroundTruthSample s;
  s.sample_id = string_field(j, "sample_id");
  s.query = string_field(j, "query");
  const std::string scheme = string_field(j, "annotation_scheme");
  const auto parsed_scheme = annotation_scheme_from_string(scheme);
  if (!parsed_scheme) throw IoError("unknown annotation_scheme '" + scheme + "'");
  s.annotation_scheme = *parsed_scheme;
  const std::string split = string_field(j, "split");
  const auto parsed_split = split_from_string(split);
  if (!parsed_split) throw IoError("unknown split '" + split + "'");
  s.split = *parsed_split;
  const json& gt = field(j, "gt");
  if (!gt.is_array()) throw IoError("field 'gt' must be an array");
  for (const auto& t : gt) s.gt_triplets.push_back(triplet_from_json(t));
  if (auto issues = validate(s); !issues.empty())
    throw IoError("invalid sample '" + s.sample_id + "': " + issues.front());
  return s;
}

std::string to_json_line(const PredictionRecord& p) {
  ojson j;
  j["sample_id"] = p.sample_id;
  auto triplets = ojson::array();
  for (const auto& t : p.triplets) triplets.push_back(triplet_to_json(t));
  j["triplets"] = std::move(triplets);
  return j.dump();
}

PredictionRecord prediction_from_json(const std::string& text) {
  const json j = parse_line(text);
  PredictionRecord p;
  p.sample_id = string_field(j, "sample_id");
  const json& triplets = field(j, "triplets");
  if (!triplets.is_array()) throw IoError("field 'triplets' must be an array");
  for (const auto& t : triplets) p.triplets.push_back(triplet_from_json(t));
  return p;
}

std::string to_json_line(const RawOutputRecord& r) {
  return ojson{{"sample_id", r.sample_id}, {"output_text", r.output_text}}.dump();
}

RawOutputRecord raw_output_from_json(const std::string& text) {
  const json j = parse_line(text);
  return {string_field(j, "sample_id"), string_field(j, "output_text")};
}

std::string to_json_line(const IterationStats& s) {
  ojson j;
  j["iter"] = s.iteration;
  j["mean_reward"] = s.mean_reward;
  j["objective"] = s.objective;
  j["mean_kl"] = s.mean_kl;
  j["wall_ms"] = s.wall_ms;
  return j.dump();
}

std::string breakdown_to_json_line(const std::string& sample_id, const RewardBreakdown& b) {
  ojson j;
  j["sample_id"] = sample_id;
  j["r_format"] = b.r_format;
  j["r_det"] = b.r_det;
  j["r_int"] = b.r_int;
  j["r_cot"] = b.r_cot;
  j["r_iou"] = b.r_iou;
  j["r_reg"] = b.r_reg;
  j["r_act"] = b.r_act;
  j["r_obj"] = b.r_obj;
  j["r_prm"] = b.r_prm;
  j["r_grm"] = b.r_grm;
  j["composite"] = b.composite;
  return j.dump();
}

std::vector<GroundTruthSample> read_dataset(const std::string& path) {
  return read_lines<GroundTruthSample>(path,
                                       [](const std::string& l) { return sample_from_json(l); });
}

void write_dataset(const std::string& path, const std::vector<GroundTruthSample>& samples) {
  write_lines(path, samples);
}

std::vector<PredictionRecord> read_predictions(const std::string& path) {
  return read_lines<PredictionRecord>(
      path, [](const std::string& l) { return prediction_from_json(l); });
}

void write_predictions(const std::string& path, const std::vector<PredictionRecord>& preds) {
  write_lines(path, preds);
}

std::vector<RawOutputRecord> read_raw_outputs(const std::string& path) {
  return read_lines<RawOutputRecord>(
      path, [](const std::string& l) { return raw_output_from_json(l); });
}

void write_raw_outputs(const std::string& path, const std::vector<RawOutputRecord>& outputs) {
  write_lines(path, outputs);
}

void write_history(const std::string& path, const std::vector<IterationStats>& history) {
  write_lines(path, history);
}

std::vector<IterationStats> read_history(const std::string& path) {
  return read_lines<IterationStats>(path, [](const std::string& l) {
    const json j = parse_line(l);
    IterationStats s;
    s.iteration = static_cast<int>(number_field(j, "iter"));
    s.mean_reward = number_field(j, "mean_reward");
    s.objective = number_field(j, "objective");
    s.mean_kl = number_field(j, "mean_kl");
    s.wall_ms = number_field(j, "wall_ms");
    return s;
  });
}

void write_params(const std::string& path, std::span<const double> params) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  ojson j;
  j["params"] = std::vector<double>(params.begin(), params.end());
  out << j.dump(2) << "\n";
  if (!out) throw IoError("write failed for " + path);
}

std::vector<double> read_params(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  const json j = parse_line(buf.str());
  const json& params = field(j, "params");
  if (!params.is_array()) throw IoError("field 'params' must be an array");
  std::vector<double> out;
  for (const auto& v : params) {
    if (!v.is_number()) throw IoError("field 'params' must hold numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

namespace {

ojson aggregate_to_json(const MetricAggregate& a) {
  return ojson{{"h_miou", a.h_miou},
               {"o_miou", a.o_miou},
               {"a_acc", a.a_acc},
               {"map_rate", a.map_rate},
               {"n_samples", a.n_samples}};
}

} // namespace

std::string report_to_json(const EvalReport& report) {
  ojson j;
  j["overall"] = aggregate_to_json(report.overall);
  ojson by_split = ojson::object();
  for (const auto& [split, agg] : report.by_split) by_split[to_string(split)] = aggregate_to_json(agg);
  j["by_split"] = std::move(by_split);
  ojson by_scheme = ojson::object();
  for (const auto& [scheme, agg] : report.by_scheme)
    by_scheme[to_string(scheme)] = aggregate_to_json(agg);
  j["by_scheme"] = std::move(by_scheme);
  auto rows = ojson::array();
  for (const auto& row : report.rows) {
    rows.push_back(ojson{{"sample_id", row.sample_id},
                         {"split", to_string(row.split)},
                         {"annotation_scheme", to_string(row.annotation_scheme)},
                         {"h_miou", row.metrics.h_miou},
                         {"o_miou", row.metrics.o_miou},
                         {"a_acc", row.metrics.a_acc},
                         {"map_pass", row.metrics.map_pass}});
  }
  j["rows"] = std::move(rows);
  j["errors"] = report.errors;
  return j.dump(2);
}

} // namespace hoirl
