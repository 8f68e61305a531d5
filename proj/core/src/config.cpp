#include "hoirl/config.hpp"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "hoirl/errors.hpp"

namespace hoirl {

std::string to_string(JudgeKind k) {
  return k == JudgeKind::reference ? "reference" : "external";
}

std::vector<std::string> validate(const RunConfig& c) {
  std::vector<std::string> issues;
  auto take = [&](std::vector<std::string> sub, const char* prefix) {
    for (auto& s : sub) issues.push_back(std::string(prefix) + ": " + s);
  };
  take(validate(c.rewards), "reward");
  take(validate(c.grpo), "grpo");
  take(validate(c.scene), "scene");
  if (c.judge == JudgeKind::external && c.external_judge.endpoint.empty())
    issues.push_back("judge: external judge selected but judge.endpoint is empty");
  if (c.external_judge.timeout_ms < 1) issues.push_back("judge: timeout_ms must be >= 1");
  if (c.external_judge.max_inflight < 1) issues.push_back("judge: max_inflight must be >= 1");
  if (c.out_dir.empty()) issues.push_back("out_dir must not be empty");
  if (c.gen_count < 1) issues.push_back("gen_count must be >= 1");
  return issues;
}

namespace {

[[noreturn]] void fail(const std::string& origin, int line, const std::string& msg) {
  throw ConfigError(origin + ":" + std::to_string(line) + ": " + msg);
}

double parse_double(const std::string& v, const std::string& origin, int line) {
  errno = 0;
  char* end = nullptr;
  const double d = std::strtod(v.c_str(), &end);
  if (errno != 0 || end != v.c_str() + v.size() || v.empty())
    fail(origin, line, "'" + v + "' is not a number");
  return d;
}

long parse_long(const std::string& v, const std::string& origin, int line) {
  errno = 0;
  char* end = nullptr;
  const long n = std::strtol(v.c_str(), &end, 10);
  if (errno != 0 || end != v.c_str() + v.size() || v.empty())
    fail(origin, line, "'" + v + "' is not an integer");
  return n;
}

std::uint64_t parse_u64(const std::string& v, const std::string& origin, int line) {
  errno = 0;
  char* end = nullptr;
  const unsigned long long n = std::strtoull(v.c_str(), &end, 10);
  if (errno != 0 || end != v.c_str() + v.size() || v.empty() || v.front() == '-')
    fail(origin, line, "'" + v + "' is not an unsigned integer");
  return n;
}

std::vector<std::string> parse_labels(const std::string& v, const std::string& origin, int line) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) fail(origin, line, "empty label in list '" + v + "'");
    out.push_back(item);
  }
  if (out.empty()) fail(origin, line, "empty label list");
  return out;
}

} // namespace

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
  RunConfig c;

  using Setter = std::function<void(const std::string&, int)>;
  const std::map<std::string, Setter> setters = {
      {"seed", [&](const std::string& v, int ln) { c.seed = parse_u64(v, origin, ln); }},
      {"dataset", [&](const std::string& v, int) { c.dataset = v; }},
      {"predictions", [&](const std::string& v, int) { c.predictions = v; }},
      {"out_dir", [&](const std::string& v, int) { c.out_dir = v; }},
      {"gen_count", [&](const std::string& v, int ln) { c.gen_count = static_cast<int>(parse_long(v, origin, ln)); }},
      {"judge",
       [&](const std::string& v, int ln) {
         if (v == "reference") c.judge = JudgeKind::reference;
         else if (v == "external") c.judge = JudgeKind::external;
         else fail(origin, ln, "judge must be 'reference' or 'external', got '" + v + "'");
       }},
      {"judge.endpoint", [&](const std::string& v, int) { c.external_judge.endpoint = v; }},
      {"judge.timeout_ms", [&](const std::string& v, int ln) { c.external_judge.timeout_ms = static_cast<int>(parse_long(v, origin, ln)); }},
      {"judge.max_inflight", [&](const std::string& v, int ln) { c.external_judge.max_inflight = static_cast<int>(parse_long(v, origin, ln)); }},
      {"reward.beta_det", [&](const std::string& v, int ln) { c.rewards.beta_det = parse_double(v, origin, ln); }},
      {"reward.gamma", [&](const std::string& v, int ln) { c.rewards.gamma = parse_double(v, origin, ln); }},
      {"reward.lambda_cot", [&](const std::string& v, int ln) { c.rewards.lambda_cot = parse_double(v, origin, ln); }},
      {"reward.delta", [&](const std::string& v, int ln) { c.rewards.delta = parse_double(v, origin, ln); }},
      {"reward.iou_threshold", [&](const std::string& v, int ln) { c.rewards.iou_threshold = parse_double(v, origin, ln); }},
      {"reward.w_format", [&](const std::string& v, int ln) { c.rewards.w_format = parse_double(v, origin, ln); }},
      {"reward.w_det", [&](const std::string& v, int ln) { c.rewards.w_det = parse_double(v, origin, ln); }},
      {"reward.w_int", [&](const std::string& v, int ln) { c.rewards.w_int = parse_double(v, origin, ln); }},
      {"reward.w_cot", [&](const std::string& v, int ln) { c.rewards.w_cot = parse_double(v, origin, ln); }},
      {"reward.grm_group_size", [&](const std::string& v, int ln) { c.rewards.grm_group_size = static_cast<int>(parse_long(v, origin, ln)); }},
      {"grpo.group_size", [&](const std::string& v, int ln) { c.grpo.group_size = static_cast<int>(parse_long(v, origin, ln)); }},
      {"grpo.clip_epsilon", [&](const std::string& v, int ln) { c.grpo.clip_epsilon = parse_double(v, origin, ln); }},
      {"grpo.beta_kl", [&](const std::string& v, int ln) { c.grpo.beta_kl = parse_double(v, origin, ln); }},
      {"grpo.learning_rate", [&](const std::string& v, int ln) { c.grpo.learning_rate = parse_double(v, origin, ln); }},
      {"grpo.iterations", [&](const std::string& v, int ln) { c.grpo.iterations = static_cast<int>(parse_long(v, origin, ln)); }},
      {"grpo.std_guard", [&](const std::string& v, int ln) { c.grpo.std_guard = parse_double(v, origin, ln); }},
      {"scene.grid_resolution", [&](const std::string& v, int ln) { c.scene.grid_resolution = static_cast<int>(parse_long(v, origin, ln)); }},
      {"scene.n_objects", [&](const std::string& v, int ln) { c.scene.n_objects = static_cast<int>(parse_long(v, origin, ln)); }},
      {"scene.verbs", [&](const std::string& v, int ln) { c.scene.verb_vocabulary = parse_labels(v, origin, ln); }},
      {"scene.objects", [&](const std::string& v, int ln) { c.scene.object_vocabulary = parse_labels(v, origin, ln); }},
      {"scene.boxes_per_side", [&](const std::string& v, int ln) { c.scene.boxes_per_side = static_cast<int>(parse_long(v, origin, ln)); }},
      {"scene.template_cap", [&](const std::string& v, int ln) { c.scene.template_cap = static_cast<int>(parse_long(v, origin, ln)); }},
  };

  std::set<std::string> seen;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(origin, line_no, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) fail(origin, line_no, "missing key before '='");
    if (value.empty()) fail(origin, line_no, "missing value for key '" + key + "'");
    const auto it = setters.find(key);
    if (it == setters.end()) fail(origin, line_no, "unknown key '" + key + "'");
    if (!seen.insert(key).second) fail(origin, line_no, "duplicate key '" + key + "'");
    it->second(value, line_no);
  }

  // The config's one seed feeds every randomized component.
  c.grpo.rng_seed = c.seed;
  c.scene.rng_seed = c.seed;

  if (auto issues = validate(c); !issues.empty()) {
    std::string msg = origin + ": invalid configuration:";
    for (const auto& i : issues) msg += "\n  - " + i;
    throw ConfigError(msg);
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path);
}

} // namespace hoirl
