#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace hoirl {

/// Axis-aligned box in normalized image coordinates, all fields in [0,1].
struct BoundingBox {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

double box_area(const BoundingBox& b);

/// One predicted or annotated interaction: subject (a human), verb, object,
/// plus the two localizing boxes.
struct HoiTriplet {
  std::string subject_label;
  std::string verb_label;
  std::string object_label;
  BoundingBox human_box;
  BoundingBox object_box;

  friend bool operator==(const HoiTriplet&, const HoiTriplet&) = default;
};

/// Ordered reasoning steps extracted from the think block.
struct CotTrace {
  std::vector<std::string> steps;

  std::size_t size() const { return steps.size(); }
  friend bool operator==(const CotTrace&, const CotTrace&) = default;
};

/// A model response: raw text plus, when the text conforms to the output
/// grammar, its parsed trace and triplet list.
struct StructuredOutput {
  std::string raw_text;
  CotTrace trace;
  std::vector<HoiTriplet> triplets;
  bool format_valid = false;

  friend bool operator==(const StructuredOutput&, const StructuredOutput&) = default;
};

enum class AnnotationScheme { fine_grained, precise, open_vocabulary };
enum class Split { seen, unseen };

std::string to_string(AnnotationScheme s);
std::string to_string(Split s);
std::optional<AnnotationScheme> annotation_scheme_from_string(const std::string& s);
std::optional<Split> split_from_string(const std::string& s);

/// One annotated query: the question text, its annotation style, and the
/// ground-truth triplet set.
struct GroundTruthSample {
  std::string sample_id;
  std::string query;
  AnnotationScheme annotation_scheme = AnnotationScheme::precise;
  std::vector<HoiTriplet> gt_triplets;
  Split split = Split::seen;

  friend bool operator==(const GroundTruthSample&, const GroundTruthSample&) = default;
};

/// Weights of the reward algebra. beta_det/gamma/lambda_cot blend the two
/// halves of the detection, interaction and CoT rewards; the four composite
/// weights mix the reward terms and must sum to 1.
struct RewardWeights {
  double beta_det = 0.5;   // IoU-vs-regression blend in the detection reward
  double gamma = 0.5;      // action-vs-object blend in the interaction reward
  double lambda_cot = 0.5; // step-vs-group blend in the CoT reward
  double delta = 0.1;      // normalized L1 threshold for regression accuracy
  double iou_threshold = 0.5; // fixed by contract
  double w_format = 0.25;
  double w_det = 0.25;
  double w_int = 0.25;
  double w_cot = 0.25;
  int grm_group_size = 2; // consecutive steps per group-level judge score

  friend bool operator==(const RewardWeights&, const RewardWeights&) = default;
};

/// Per-sample reward values: the four terms, their internal components and
/// the weighted composite.
struct RewardBreakdown {
  double r_format = 0.0;
  double r_det = 0.0;
  double r_int = 0.0;
  double r_cot = 0.0;
  double r_iou = 0.0; // detection: fraction of anchors with IoU >= 0.5
  double r_reg = 0.0; // detection: fraction of anchors with mean L1 < delta
  double r_act = 0.0; // interaction: verb accuracy
  double r_obj = 0.0; // interaction: object accuracy
  double r_prm = 0.0; // CoT: mean step score
  double r_grm = 0.0; // CoT: mean group score
  double composite = 0.0;

  friend bool operator==(const RewardBreakdown&, const RewardBreakdown&) = default;
};

/// One member of a G-sized rollout group.
struct GroupSample {
  StructuredOutput output;
  double logp_current = 0.0;
  double logp_old = 0.0;
  double logp_ref = 0.0;
  double ratio = 1.0; // exp(logp_current - logp_old)
  RewardBreakdown reward;
  double advantage = 0.0;
};

/// Optimizer settings for the group-relative training loop.
struct GrpoConfig {
  int group_size = 8;
  double clip_epsilon = 0.2;
  double beta_kl = 0.04;
  double learning_rate = 0.5;
  int iterations = 100;
  double std_guard = 1e-8; // below this reward std, advantages are zeroed
  std::uint64_t rng_seed = 0;
};

/// Default subject labels accepted as "human".
const std::vector<std::string>& default_human_synonyms();

// Invariant checks. Violations are returned as messages, never thrown.
std::vector<std::string> validate(const BoundingBox& b);
std::vector<std::string> validate(const HoiTriplet& t);
std::vector<std::string> validate(const HoiTriplet& t,
                                  const std::vector<std::string>& human_synonyms);
std::vector<std::string> validate(const CotTrace& t);
std::vector<std::string> validate(const StructuredOutput& o);
std::vector<std::string> validate(const GroundTruthSample& s);
std::vector<std::string> validate(const RewardWeights& w);
std::vector<std::string> validate(const RewardBreakdown& r, const RewardWeights& w);
std::vector<std::string> validate(const GroupSample& s);
std::vector<std::string> validate(const GrpoConfig& c);

// Case-insensitive label equality after trimming outer whitespace.
std::string trim(const std::string& s);
std::string lower(const std::string& s);
bool labels_equal(const std::string& a, const std::string& b);

} // namespace hoirl
