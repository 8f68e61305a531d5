#include "hoirl/types.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

namespace hoirl {

double box_area(const BoundingBox& b) {
  return std::max(0.0, b.x_max - b.x_min) * std::max(0.0, b.y_max - b.y_min);
}

std::string to_string(AnnotationScheme s) {
  switch (s) {
    case AnnotationScheme::fine_grained: return "fine_grained";
    case AnnotationScheme::precise: return "precise";
    case AnnotationScheme::open_vocabulary: return "open_vocabulary";
  }
  return "precise";
}

std::string to_string(Split s) {
  return s == Split::seen ? "seen" : "unseen";
}

std::optional<AnnotationScheme> annotation_scheme_from_string(const std::string& s) {
  if (s == "fine_grained") return AnnotationScheme::fine_grained;
  if (s == "precise") return AnnotationScheme::precise;
  if (s == "open_vocabulary") return AnnotationScheme::open_vocabulary;
  return std::nullopt;
}

std::optional<Split> split_from_string(const std::string& s) {
  if (s == "seen") return Split::seen;
  if (s == "unseen") return Split::unseen;
  return std::nullopt;
}

const std::vector<std::string>& default_human_synonyms() {
  static const std::vector<std::string> synonyms = {
      "human", "person", "man", "woman", "boy", "girl", "people"};
  return synonyms;
}

std::string trim(const std::string& s) {
  auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
  std::size_t begin = 0;
  std::size_t end = s.size();
  while (begin < end && is_space(static_cast<unsigned char>(s[begin]))) ++begin;
  while (end > begin && is_space(static_cast<unsigned char>(s[end - 1]))) --end;
  return s.substr(begin, end - begin);
}

std::string lower(const std::string& s) {
  std::string out = s;
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

bool labels_equal(const std::string& a, const std::string& b) {
  return lower(trim(a)) == lower(trim(b));
}

namespace {

bool in_unit(double v) { return v >= 0.0 && v <= 1.0; }

void check_box(const BoundingBox& b, const std::string& name,
               std::vector<std::string>& out) {
  if (!(b.x_min < b.x_max)) out.push_back(name + ": x_min < x_max violated");
  if (!(b.y_min < b.y_max)) out.push_back(name + ": y_min < y_max violated");
  if (!in_unit(b.x_min) || !in_unit(b.y_min) || !in_unit(b.x_max) || !in_unit(b.y_max))
    out.push_back(name + ": coordinates must lie in [0,1]");
}

} // namespace

std::vector<std::string> validate(const BoundingBox& b) {
  std::vector<std::string> out;
  check_box(b, "box", out);
  return out;
}

std::vector<std::string> validate(const HoiTriplet& t) {
  return validate(t, default_human_synonyms());
}

std::vector<std::string> validate(const HoiTriplet& t,
                                  const std::vector<std::string>& human_synonyms) {
  std::vector<std::string> out;
  bool is_human = std::any_of(human_synonyms.begin(), human_synonyms.end(),
                              [&](const std::string& s) { return labels_equal(s, t.subject_label); });
  if (!is_human) out.push_back("subject_label not in human synonyms: " + t.subject_label);
  if (trim(t.verb_label).empty()) out.push_back("verb_label empty");
  if (trim(t.object_label).empty()) out.push_back("object_label empty");
  check_box(t.human_box, "human_box", out);
  check_box(t.object_box, "object_box", out);
  return out;
}

std::vector<std::string> validate(const CotTrace& t) {
  std::vector<std::string> out;
  if (t.steps.empty()) out.push_back("trace must have at least one step");
  for (std::size_t i = 0; i < t.steps.size(); ++i)
    if (trim(t.steps[i]).empty())
      out.push_back("step " + std::to_string(i + 1) + " is empty");
  return out;
}

std::vector<std::string> validate(const StructuredOutput& o) {
  std::vector<std::string> out;
  if (o.format_valid) {
    auto trace_violations = validate(o.trace);
    out.insert(out.end(), trace_violations.begin(), trace_violations.end());
    if (o.triplets.empty()) out.push_back("format-valid output must carry triplets");
    for (std::size_t i = 0; i < o.triplets.size(); ++i)
      for (const auto& v : validate(o.triplets[i]))
        out.push_back("triplet " + std::to_string(i + 1) + ": " + v);
  } else {
    if (!o.trace.steps.empty()) out.push_back("format-invalid output must have empty trace");
    if (!o.triplets.empty()) out.push_back("format-invalid output must have no triplets");
  }
  return out;
}

std::vector<std::string> validate(const GroundTruthSample& s) {
  std::vector<std::string> out;
  if (s.sample_id.empty()) out.push_back("sample_id empty");
  if (s.gt_triplets.empty()) out.push_back("gt_triplets must be non-empty");
  for (std::size_t i = 0; i < s.gt_triplets.size(); ++i)
    for (const auto& v : validate(s.gt_triplets[i]))
      out.push_back("gt triplet " + std::to_string(i + 1) + ": " + v);
  return out;
}

std::vector<std::string> validate(const RewardWeights& w) {
  std::vector<std::string> out;
  if (!in_unit(w.beta_det)) out.push_back("beta_det must lie in [0,1]");
  if (!in_unit(w.gamma)) out.push_back("gamma must lie in [0,1]");
  if (!in_unit(w.lambda_cot)) out.push_back("lambda_cot must lie in [0,1]");
  if (!(w.delta > 0.0)) out.push_back("delta must be > 0");
  if (w.iou_threshold != 0.5) out.push_back("iou_threshold is fixed at 0.5");
  if (w.w_format < 0.0 || w.w_det < 0.0 || w.w_int < 0.0 || w.w_cot < 0.0)
    out.push_back("composite weights must be non-negative");
  double sum = w.w_format + w.w_det + w.w_int + w.w_cot;
  if (std::abs(sum - 1.0) > 1e-12) out.push_back("composite weights must sum to 1");
  if (w.grm_group_size < 1) out.push_back("grm_group_size must be >= 1");
  return out;
}

std::vector<std::string> validate(const RewardBreakdown& r, const RewardWeights& w) {
  std::vector<std::string> out;
  auto unit = [&](double v, const char* name) {
    if (!in_unit(v)) out.push_back(std::string(name) + " must lie in [0,1]");
  };
  unit(r.r_format, "r_format");
  unit(r.r_det, "r_det");
  unit(r.r_int, "r_int");
  unit(r.r_cot, "r_cot");
  unit(r.r_iou, "r_iou");
  unit(r.r_reg, "r_reg");
  unit(r.r_act, "r_act");
  unit(r.r_obj, "r_obj");
  unit(r.r_prm, "r_prm");
  unit(r.r_grm, "r_grm");
  unit(r.composite, "composite");
  if (r.r_format != 0.0 && r.r_format != 1.0) out.push_back("r_format must be 0 or 1");
  if (std::abs(r.r_det - (w.beta_det * r.r_iou + (1.0 - w.beta_det) * r.r_reg)) > 1e-12)
    out.push_back("r_det must equal beta_det*R_IoU + (1-beta_det)*R_reg");
  if (std::abs(r.r_int - (w.gamma * r.r_act + (1.0 - w.gamma) * r.r_obj)) > 1e-12)
    out.push_back("r_int must equal gamma*R_act + (1-gamma)*R_obj");
  if (std::abs(r.r_cot - (w.lambda_cot * r.r_prm + (1.0 - w.lambda_cot) * r.r_grm)) > 1e-12)
    out.push_back("r_cot must equal lambda_cot*R_prm + (1-lambda_cot)*R_grm");
  if (r.r_format == 0.0 && (r.r_det != 0.0 || r.r_int != 0.0 || r.r_cot != 0.0))
    out.push_back("format gating: r_format = 0 requires r_det = r_int = r_cot = 0");
  return out;
}

std::vector<std::string> validate(const GroupSample& s) {
  std::vector<std::string> out;
  if (!(s.ratio > 0.0)) out.push_back("ratio must be > 0");
  double expected = std::exp(s.logp_current - s.logp_old);
  if (std::abs(s.ratio - expected) > 1e-9 * std::max(1.0, std::abs(expected)))
    out.push_back("ratio inconsistent with exp(logp_current - logp_old)");
  return out;
}

std::vector<std::string> validate(const GrpoConfig& c) {
  std::vector<std::string> out;
  if (c.group_size < 2) out.push_back("group_size must be >= 2");
  if (!(c.clip_epsilon > 0.0)) out.push_back("clip_epsilon must be > 0");
  if (c.beta_kl < 0.0) out.push_back("beta_kl must be >= 0");
  if (!(c.learning_rate > 0.0)) out.push_back("learning_rate must be > 0");
  if (c.iterations < 0) out.push_back("iterations must be >= 0");
  if (!(c.std_guard > 0.0)) out.push_back("std_guard must be > 0");
  return out;
}

} // namespace hoirl
