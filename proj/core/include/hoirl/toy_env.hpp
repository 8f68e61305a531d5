#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "hoirl/grpo.hpp"
#include "hoirl/judge.hpp"
#include "hoirl/types.hpp"

namespace hoirl {

/// Recipe for one synthetic scene: a K x K coordinate grid, small verb and
/// object vocabularies, and the size of the candidate-box pool per side.
/// Everything downstream is deterministic in rng_seed.
struct SceneSpec {
  int grid_resolution = 8; // boxes snap to multiples of 1/K
  int n_objects = 1;       // ground-truth triplets per scene
  std::vector<std::string> verb_vocabulary = {"hold", "ride", "push", "carry"};
  std::vector<std::string> object_vocabulary = {"cup", "bicycle", "door", "box"};
  std::uint64_t rng_seed = 0;
  int boxes_per_side = 4; // candidate boxes per side: gt boxes + distractors
  int template_cap = 0;   // 0 = keep the full cross product
};

std::vector<std::string> validate(const SceneSpec& spec);

/// Deterministic scene: quantized non-degenerate boxes, vocabulary labels,
/// and a query rendered in one of the three annotation styles (picked from
/// the seed, as are the split assignment and the sample id).
GroundTruthSample generate_scene(const SceneSpec& spec);

/// Enumerable output space: the cross product of (verb, object, candidate
/// human box, candidate object box), each rendered as one canonical
/// well-formed output text with two think steps derived from the triplet.
/// Candidate boxes per side are the scene's gt boxes padded with distractors
/// whose IoU against every same-side gt box stays below 0.5.
struct TemplateTable {
  std::vector<std::string> texts;
  std::vector<StructuredOutput> outputs; // parsed form of texts, same order

  int size() const { return static_cast<int>(texts.size()); }
  /// Index of a raw text in the table, or -1.
  int index_of(const std::string& raw) const;

  std::unordered_map<std::string, int> index;
};

/// Builds the table for the scene generate_scene(spec) yields. A positive
/// template_cap keeps a seed-deterministic subsample of that size. Throws
/// ToyEnvError when the table would exceed 10^4 entries or a distractor
/// cannot be placed.
TemplateTable build_template_table(const SceneSpec& spec);

/// The two canonical think steps rendered for a triplet.
std::vector<std::string> render_think_steps(const HoiTriplet& t);

/// Best point-mass policy's reward: max composite over the table.
double optimal_expected_reward(const GroundTruthSample& scene, const TemplateTable& table,
                               const RewardWeights& w, CotJudge& judge);

/// Softmax policy with one logit per template. sample() inverts the CDF with
/// a hand-rolled 53-bit uniform draw so sequences are reproducible across
/// standard-library implementations.
class TemplatePolicy : public Policy {
public:
  explicit TemplatePolicy(TemplateTable table);

  int dim() const override { return table_.size(); }
  std::vector<double> initial_params() const override; // zeros: uniform policy
  double log_prob(std::span<const double> params, const std::string& output) const override;
  std::string sample(std::span<const double> params, std::mt19937_64& rng) const override;
  std::vector<double> log_prob_gradient(std::span<const double> params,
                                        const std::string& output) const override;

  /// softmax(params) over the table.
  std::vector<double> probabilities(std::span<const double> params) const;
  const TemplateTable& table() const { return table_; }

private:
  int require_index(const std::string& output) const;

  TemplateTable table_;
};

} // namespace hoirl
