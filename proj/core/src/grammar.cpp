#include "hoirl/grammar.hpp"

#include <cctype>
#include <charconv>
#include <cstdlib>
#include <stdexcept>

namespace hoirl {

namespace {

using grammar::kAnswerClose;
using grammar::kAnswerOpen;
using grammar::kThinkClose;
using grammar::kThinkOpen;

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

std::size_t skip_ws(const std::string& s, std::size_t pos) {
  while (pos < s.size() && is_space(s[pos])) ++pos;
  return pos;
}

bool starts_with_at(const std::string& s, std::size_t pos, const char* literal) {
  return s.compare(pos, std::char_traits<char>::length(literal), literal) == 0;
}

bool contains_any_tag(const std::string& s) {
  return s.find(kThinkOpen) != std::string::npos ||
         s.find(kThinkClose) != std::string::npos ||
         s.find(kAnswerOpen) != std::string::npos ||
         s.find(kAnswerClose) != std::string::npos;
}

std::vector<std::string> split_lines_trimmed(const std::string& s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    std::size_t end = s.find('\n', start);
    if (end == std::string::npos) end = s.size();
    std::string line = trim(s.substr(start, end - start));
    if (!line.empty()) out.push_back(std::move(line));
    start = end + 1;
  }
  return out;
}

std::vector<std::string> split_on(const std::string& s, char delim) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t end = s.find(delim, start);
    if (end == std::string::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, end - start));
    start = end + 1;
  }
}

bool parse_coord(const std::string& token, double* out) {
  std::string t = trim(token);
  if (t.empty()) return false;
  const char* begin = t.c_str();
  char* end = nullptr;
  errno = 0;
  double v = std::strtod(begin, &end);
  if (end != begin + t.size() || errno != 0) return false;
  if (!(v >= 0.0 && v <= 1.0)) return false;
  *out = v;
  return true;
}

bool parse_box(const std::string& section, BoundingBox* out) {
  auto coords = split_on(section, ',');
  if (coords.size() != 4) return false;
  double v[4];
  for (int i = 0; i < 4; ++i)
    if (!parse_coord(coords[i], &v[i])) return false;
  BoundingBox b{v[0], v[1], v[2], v[3]};
  if (!(b.x_min < b.x_max) || !(b.y_min < b.y_max)) return false;
  *out = b;
  return true;
}

bool parse_triplet_line(const std::string& line, HoiTriplet* out) {
  if (line.size() < 2 || line.front() != '(' || line.back() != ')') return false;
  std::string body = line.substr(1, line.size() - 2);
  auto sections = split_on(body, '|');
  if (sections.size() != 3) return false;

  auto labels = split_on(sections[0], ',');
  if (labels.size() != 3) return false;
  HoiTriplet t;
  t.subject_label = trim(labels[0]);
  t.verb_label = trim(labels[1]);
  t.object_label = trim(labels[2]);
  if (t.subject_label.empty() || t.verb_label.empty() || t.object_label.empty())
    return false;

  if (!parse_box(sections[1], &t.human_box)) return false;
  if (!parse_box(sections[2], &t.object_box)) return false;
  *out = std::move(t);
  return true;
}

std::string format_coord(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string render_triplet_line(const HoiTriplet& t) {
  auto box = [](const BoundingBox& b) {
    return format_coord(b.x_min) + "," + format_coord(b.y_min) + "," +
           format_coord(b.x_max) + "," + format_coord(b.y_max);
  };
  return "(" + t.subject_label + ", " + t.verb_label + ", " + t.object_label +
         " | " + box(t.human_box) + " | " + box(t.object_box) + ")";
}

std::string join(const std::vector<std::string>& parts, char delim) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out.push_back(delim);
    out += parts[i];
  }
  return out;
}

} // namespace

std::vector<std::string> validate(const ConstraintConfig& c) {
  std::vector<std::string> out;
  if (c.human_synonyms.empty()) out.push_back("human_synonyms must be non-empty");
  return out;
}

StructuredOutput parse_output(const std::string& text) {
  StructuredOutput out;
  out.raw_text = text;

  std::size_t pos = skip_ws(text, 0);
  if (!starts_with_at(text, pos, kThinkOpen)) return out;
  pos += std::char_traits<char>::length(kThinkOpen);
  std::size_t think_end = text.find(kThinkClose, pos);
  if (think_end == std::string::npos) return out;
  std::string think = text.substr(pos, think_end - pos);
  pos = think_end + std::char_traits<char>::length(kThinkClose);

  pos = skip_ws(text, pos);
  if (!starts_with_at(text, pos, kAnswerOpen)) return out;
  pos += std::char_traits<char>::length(kAnswerOpen);
  std::size_t answer_end = text.find(kAnswerClose, pos);
  if (answer_end == std::string::npos) return out;
  std::string answer = text.substr(pos, answer_end - pos);
  pos = answer_end + std::char_traits<char>::length(kAnswerClose);

  if (skip_ws(text, pos) != text.size()) return out;
  if (contains_any_tag(think) || contains_any_tag(answer)) return out;

  CotTrace trace{split_lines_trimmed(think)};
  if (trace.steps.empty()) return out;

  auto lines = split_lines_trimmed(answer);
  if (lines.empty()) return out;
  std::vector<HoiTriplet> triplets;
  triplets.reserve(lines.size());
  for (const auto& line : lines) {
    HoiTriplet t;
    if (!parse_triplet_line(line, &t)) return out;
    triplets.push_back(std::move(t));
  }

  out.trace = std::move(trace);
  out.triplets = std::move(triplets);
  out.format_valid = true;
  return out;
}

bool check_format(const std::string& text) {
  return parse_output(text).format_valid;
}

std::string render_output(const std::vector<std::string>& steps,
                          const std::vector<HoiTriplet>& triplets) {
  std::vector<std::string> lines;
  lines.reserve(triplets.size());
  for (const auto& t : triplets) lines.push_back(render_triplet_line(t));
  return std::string(kThinkOpen) + join(steps, '\n') + kThinkClose + "\n" +
         kAnswerOpen + join(lines, '\n') + kAnswerClose;
}

std::string serialize_output(const StructuredOutput& o) {
  if (!o.format_valid)
    throw std::invalid_argument("serialize_output: format-invalid output");
  return render_output(o.trace.steps, o.triplets);
}

std::vector<std::string> validate_cot_constraints(const StructuredOutput& o,
                                                  const ConstraintConfig& c) {
  std::vector<std::string> out;
  auto in_vocab = [](const std::string& label, const std::vector<std::string>& vocab) {
    for (const auto& v : vocab)
      if (labels_equal(v, label)) return true;
    return false;
  };
  for (std::size_t i = 0; i < o.triplets.size(); ++i) {
    const auto& t = o.triplets[i];
    std::string at = "triplet " + std::to_string(i + 1) + ": ";
    if (!in_vocab(t.subject_label, c.human_synonyms))
      out.push_back(at + "subject not in human synonyms: " + t.subject_label);
    if (!c.verb_vocabulary.empty() && !in_vocab(t.verb_label, c.verb_vocabulary))
      out.push_back(at + "verb not in vocabulary: " + t.verb_label);
    if (!c.object_vocabulary.empty() && !in_vocab(t.object_label, c.object_vocabulary))
      out.push_back(at + "object not in vocabulary: " + t.object_label);
  }
  return out;
}

} // namespace hoirl
