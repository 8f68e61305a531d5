#include "hoirl/toy_env.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hoirl/errors.hpp"
#include "hoirl/grammar.hpp"
#include "hoirl/rewards.hpp"

namespace hoirl {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Uniform integer in [0, n) from the top bits of the generator; n is tiny
// here, so the modulo bias is negligible for scene plumbing but we reject
// anyway to keep draws exact.
int draw_below(std::mt19937_64& rng, int n) {
  const std::uint64_t limit = ~0ULL - ~0ULL % static_cast<std::uint64_t>(n);
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return static_cast<int>(x % static_cast<std::uint64_t>(n));
}

BoundingBox draw_grid_box(std::mt19937_64& rng, int k) {
  const int x0 = draw_below(rng, k);
  const int x1 = x0 + 1 + draw_below(rng, k - x0);
  const int y0 = draw_below(rng, k);
  const int y1 = y0 + 1 + draw_below(rng, k - y0);
  const double inv = 1.0 / static_cast<double>(k);
  return {x0 * inv, y0 * inv, x1 * inv, y1 * inv};
}

std::string render_query(AnnotationScheme scheme, const std::string& object_label) {
  switch (scheme) {
    case AnnotationScheme::fine_grained:
      return "Identify the fine-grained interaction: give the person box, the " + object_label +
             " box, and the exact action verb.";
    case AnnotationScheme::precise:
      return "Locate the person and the " + object_label + " precisely and state their interaction.";
    case AnnotationScheme::open_vocabulary:
      return "Detect every human-object interaction in the scene, naming actions freely.";
  }
  return "";
}

} // namespace

std::vector<std::string> validate(const SceneSpec& spec) {
  std::vector<std::string> issues;
  if (spec.grid_resolution < 2 || spec.grid_resolution > 64)
    issues.push_back("grid_resolution must be in [2,64]");
  if (spec.n_objects < 1 || spec.n_objects > 8) issues.push_back("n_objects must be in [1,8]");
  auto check_vocab = [&](const std::vector<std::string>& v, const char* what) {
    if (v.empty() || v.size() > 8)
      issues.push_back(std::string(what) + " vocabulary must hold 1..8 labels");
    for (const auto& s : v)
      if (trim(s).empty()) issues.push_back(std::string(what) + " vocabulary has a blank label");
  };
  check_vocab(spec.verb_vocabulary, "verb");
  check_vocab(spec.object_vocabulary, "object");
  if (spec.boxes_per_side < 1 || spec.boxes_per_side > 32)
    issues.push_back("boxes_per_side must be in [1,32]");
  if (spec.template_cap < 0) issues.push_back("template_cap must be >= 0");
  return issues;
}

GroundTruthSample generate_scene(const SceneSpec& spec) {
  if (auto issues = validate(spec); !issues.empty())
    throw ToyEnvError("bad scene spec: " + issues.front());

  std::mt19937_64 rng(splitmix64(spec.rng_seed ^ 0x5ce9e5u));
  GroundTruthSample s;
  s.sample_id = "synth-" + std::to_string(spec.rng_seed);
  const int scheme_pick = draw_below(rng, 3);
  s.annotation_scheme = scheme_pick == 0   ? AnnotationScheme::fine_grained
                        : scheme_pick == 1 ? AnnotationScheme::precise
                                           : AnnotationScheme::open_vocabulary;
  s.split = draw_below(rng, 4) == 3 ? Split::unseen : Split::seen;

  for (int i = 0; i < spec.n_objects; ++i) {
    HoiTriplet t;
    t.subject_label = "human";
    t.verb_label =
        spec.verb_vocabulary[static_cast<std::size_t>(draw_below(rng, static_cast<int>(spec.verb_vocabulary.size())))];
    t.object_label = spec.object_vocabulary[static_cast<std::size_t>(
        draw_below(rng, static_cast<int>(spec.object_vocabulary.size())))];
    t.human_box = draw_grid_box(rng, spec.grid_resolution);
    t.object_box = draw_grid_box(rng, spec.grid_resolution);
    s.gt_triplets.push_back(std::move(t));
  }
  s.query = render_query(s.annotation_scheme, s.gt_triplets.front().object_label);
  return s;
}

std::vector<std::string> render_think_steps(const HoiTriplet& t) {
  return {"the human and the " + t.object_label + " suggest a " + t.verb_label + " interaction",
          "so the human will " + t.verb_label + " the " + t.object_label};
}

namespace {

// gt boxes for one side, deduplicated, padded with distractors whose IoU
// against every gt box of that side stays below 0.5.
std::vector<BoundingBox> candidate_boxes(const std::vector<BoundingBox>& gt_boxes,
                                         const SceneSpec& spec, std::mt19937_64& rng) {
  std::vector<BoundingBox> out;
  for (const auto& b : gt_boxes)
    if (std::find(out.begin(), out.end(), b) == out.end()) out.push_back(b);
  const int target = std::max(spec.boxes_per_side, static_cast<int>(out.size()));
  int tries = 0;
  while (static_cast<int>(out.size()) < target) {
    if (++tries > 2000)
      throw ToyEnvError("cannot place a distractor box with IoU < 0.5 on this grid");
    const BoundingBox cand = draw_grid_box(rng, spec.grid_resolution);
    if (std::find(out.begin(), out.end(), cand) != out.end()) continue;
    bool ok = true;
    for (const auto& g : gt_boxes)
      if (iou(cand, g) >= 0.5) {
        ok = false;
        break;
      }
    if (ok) out.push_back(cand);
  }
  return out;
}

} // namespace

TemplateTable build_template_table(const SceneSpec& spec) {
  const GroundTruthSample scene = generate_scene(spec);

  std::mt19937_64 rng(splitmix64(spec.rng_seed ^ 0x7ab1e5u));
  std::vector<BoundingBox> gt_human, gt_object;
  for (const auto& t : scene.gt_triplets) {
    gt_human.push_back(t.human_box);
    gt_object.push_back(t.object_box);
  }
  const auto humans = candidate_boxes(gt_human, spec, rng);
  const auto objects = candidate_boxes(gt_object, spec, rng);

  const long raw = static_cast<long>(spec.verb_vocabulary.size()) *
                   static_cast<long>(spec.object_vocabulary.size()) *
                   static_cast<long>(humans.size()) * static_cast<long>(objects.size());
  const long final_size =
      spec.template_cap > 0 ? std::min(raw, static_cast<long>(spec.template_cap)) : raw;
  if (final_size > 10000)
    throw ToyEnvError("template table would hold " + std::to_string(final_size) +
                      " entries (limit 10000)");

  TemplateTable table;
  for (const auto& verb : spec.verb_vocabulary) {
    for (const auto& object : spec.object_vocabulary) {
      for (const auto& hb : humans) {
        for (const auto& ob : objects) {
          HoiTriplet t{"human", verb, object, hb, ob};
          table.texts.push_back(render_output(render_think_steps(t), {t}));
        }
      }
    }
  }

  if (spec.template_cap > 0 && static_cast<long>(table.texts.size()) > spec.template_cap) {
    // Seeded Fisher-Yates, hand-rolled so the subsample is identical across
    // standard-library implementations.
    for (std::size_t i = table.texts.size() - 1; i > 0; --i)
      std::swap(table.texts[i], table.texts[static_cast<std::size_t>(draw_below(
                                    rng, static_cast<int>(i) + 1))]);
    table.texts.resize(static_cast<std::size_t>(spec.template_cap));
  }

  for (std::size_t i = 0; i < table.texts.size(); ++i) {
    table.outputs.push_back(parse_output(table.texts[i]));
    if (!table.outputs.back().format_valid)
      throw ToyEnvError("rendered template failed the grammar check");
    table.index.emplace(table.texts[i], static_cast<int>(i));
  }
  return table;
}

int TemplateTable::index_of(const std::string& raw) const {
  const auto it = index.find(raw);
  return it == index.end() ? -1 : it->second;
}

double optimal_expected_reward(const GroundTruthSample& scene, const TemplateTable& table,
                               const RewardWeights& w, CotJudge& judge) {
  double best = 0.0;
  for (const auto& out : table.outputs)
    best = std::max(best, composite_reward(out, scene, w, judge).composite);
  return best;
}

TemplatePolicy::TemplatePolicy(TemplateTable table) : table_(std::move(table)) {
  if (table_.size() == 0) throw std::invalid_argument("template table is empty");
}

std::vector<double> TemplatePolicy::initial_params() const {
  return std::vector<double>(static_cast<std::size_t>(table_.size()), 0.0);
}

std::vector<double> TemplatePolicy::probabilities(std::span<const double> params) const {
  if (static_cast<int>(params.size()) != dim())
    throw std::invalid_argument("parameter vector size does not match the table");
  const double peak = *std::max_element(params.begin(), params.end());
  std::vector<double> p(params.size());
  double z = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    p[i] = std::exp(params[i] - peak);
    z += p[i];
  }
  for (double& v : p) v /= z;
  return p;
}

int TemplatePolicy::require_index(const std::string& output) const {
  const int idx = table_.index_of(output);
  if (idx < 0) throw std::invalid_argument("output text is not in the template table");
  return idx;
}

double TemplatePolicy::log_prob(std::span<const double> params, const std::string& output) const {
  const int idx = require_index(output);
  const double peak = *std::max_element(params.begin(), params.end());
  double z = 0.0;
  for (double v : params) z += std::exp(v - peak);
  return params[static_cast<std::size_t>(idx)] - peak - std::log(z);
}

std::string TemplatePolicy::sample(std::span<const double> params, std::mt19937_64& rng) const {
  const auto p = probabilities(params);
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53; // uniform in [0,1)
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    acc += p[i];
    if (u < acc) return table_.texts[i];
  }
  return table_.texts.back(); // u landed in the rounding tail
}

std::vector<double> TemplatePolicy::log_prob_gradient(std::span<const double> params,
                                                      const std::string& output) const {
  const int idx = require_index(output);
  auto grad = probabilities(params);
  for (double& v : grad) v = -v;
  grad[static_cast<std::size_t>(idx)] += 1.0;
  return grad;
}

} // namespace hoirl
