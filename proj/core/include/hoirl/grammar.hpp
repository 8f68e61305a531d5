#pragma once

#include <string>
#include <vector>

#include "hoirl/types.hpp"

namespace hoirl {

// The structured output format, byte-exact:
//
//   [ws] <think> STEPS </think> [ws] <answer> TRIPLETS </answer> [ws]
//
// Tags are the literal, case-sensitive strings below. STEPS is one reasoning
// step per line (blank lines ignored, at least one non-empty step). TRIPLETS
// is one triplet per line, every non-blank line of the form
//
//   (subject, verb, object | x_min,y_min,x_max,y_max | x_min,y_min,x_max,y_max)
//
// with the first box the human box and the second the object box. Coordinates
// are normalized reals in [0,1] with x_min < x_max and y_min < y_max. Labels
// and coordinates are trimmed of surrounding whitespace. No tag literal may
// appear inside either block, and nothing but whitespace may surround the two
// blocks.
namespace grammar {
inline constexpr const char* kThinkOpen = "<think>";
inline constexpr const char* kThinkClose = "</think>";
inline constexpr const char* kAnswerOpen = "<answer>";
inline constexpr const char* kAnswerClose = "</answer>";
} // namespace grammar

/// Vocabulary constraints for the reasoning domain. An empty verb or object
/// vocabulary means open vocabulary (no constraint).
struct ConstraintConfig {
  std::vector<std::string> human_synonyms = default_human_synonyms();
  std::vector<std::string> verb_vocabulary;
  std::vector<std::string> object_vocabulary;
};

std::vector<std::string> validate(const ConstraintConfig& c);

/// True iff text conforms to the output grammar. Never throws.
bool check_format(const std::string& text);

/// Total parse: format_valid mirrors check_format; on failure the raw text is
/// preserved and trace/triplets stay empty.
StructuredOutput parse_output(const std::string& text);

/// Canonical rendering of a format-valid output. parse_output inverts it
/// field-for-field. Throws std::invalid_argument on format-invalid input.
std::string serialize_output(const StructuredOutput& o);

/// Render the canonical text directly from steps and triplets.
std::string render_output(const std::vector<std::string>& steps,
                          const std::vector<HoiTriplet>& triplets);

/// Domain-constraint check on a parsed output: subjects must be human
/// synonyms; verbs/objects must come from the configured vocabularies when
/// those are closed. Distinct from format validity.
std::vector<std::string> validate_cot_constraints(const StructuredOutput& o,
                                                  const ConstraintConfig& c);

} // namespace hoirl
