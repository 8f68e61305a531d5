#include "hoirl/judge.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <iostream>
#include <optional>
#include <semaphore>
#include <stdexcept>

#include <httplib.h>
#include <json.hpp>

#include "hoirl/errors.hpp"

namespace hoirl {

namespace {

// Lowercased maximal alphanumeric runs; everything else separates words.
std::vector<std::string> words_of(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (unsigned char c : text) {
    if (std::isalnum(c)) {
      cur.push_back(static_cast<char>(std::tolower(c)));
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

// Whole-word match with trailing-"s" tolerance in either direction, so
// "holds" hits the verb "hold" and "cup" hits "cups".
bool word_matches(const std::string& w, const std::string& t) {
  if (w == t) return true;
  if (w.size() == t.size() + 1 && w.back() == 's' && w.compare(0, t.size(), t) == 0) return true;
  if (t.size() == w.size() + 1 && t.back() == 's' && t.compare(0, w.size(), w) == 0) return true;
  return false;
}

// Index of the first contiguous occurrence of a (possibly multi-word) token.
std::optional<std::size_t> find_token(const std::vector<std::string>& words,
                                      const std::vector<std::string>& token) {
  if (token.empty() || words.size() < token.size()) return std::nullopt;
  for (std::size_t i = 0; i + token.size() <= words.size(); ++i) {
    bool ok = true;
    for (std::size_t j = 0; j < token.size(); ++j) {
      if (!word_matches(words[i + j], token[j])) {
        ok = false;
        break;
      }
    }
    if (ok) return i;
  }
  return std::nullopt;
}

using TokenList = std::vector<std::vector<std::string>>;

std::optional<std::size_t> earliest_hit(const std::vector<std::string>& words,
                                        const TokenList& tokens) {
  std::optional<std::size_t> best;
  for (const auto& tok : tokens) {
    if (auto pos = find_token(words, tok); pos && (!best || *pos < *best)) best = pos;
  }
  return best;
}

void add_token(TokenList& list, const std::string& label) {
  auto tok = words_of(label);
  if (tok.empty()) return;
  if (std::find(list.begin(), list.end(), tok) == list.end()) list.push_back(std::move(tok));
}

} // namespace

std::vector<std::string> validate(const JudgeRequest& r) {
  std::vector<std::string> issues;
  if (r.trace.steps.empty()) issues.push_back("trace has no steps");
  for (std::size_t i = 0; i < r.trace.steps.size(); ++i) {
    if (trim(r.trace.steps[i]).empty())
      issues.push_back("step " + std::to_string(i + 1) + " is blank");
  }
  if (r.gt_triplets.empty()) issues.push_back("no ground-truth triplets");
  for (const auto& t : r.gt_triplets) {
    auto sub = validate(t);
    issues.insert(issues.end(), sub.begin(), sub.end());
  }
  const int n = static_cast<int>(r.trace.steps.size());
  if (r.group_partition.empty()) {
    issues.push_back("empty group partition");
  } else {
    int expect = 1;
    for (const auto& g : r.group_partition) {
      if (g.first != expect)
        issues.push_back("group starts at " + std::to_string(g.first) + ", expected " +
                         std::to_string(expect));
      if (g.last < g.first) issues.push_back("group range runs backwards");
      expect = g.last + 1;
    }
    if (!r.group_partition.empty() && r.group_partition.back().last != n)
      issues.push_back("partition covers " + std::to_string(r.group_partition.back().last) +
                       " steps, trace has " + std::to_string(n));
  }
  return issues;
}

std::vector<std::string> validate(const JudgeResponse& r, const JudgeRequest& req) {
  std::vector<std::string> issues;
  if (r.step_scores.size() != req.trace.steps.size())
    issues.push_back("step score count mismatch");
  if (r.group_scores.size() != req.group_partition.size())
    issues.push_back("group score count mismatch");
  auto check = [&](const std::vector<double>& v, const char* what) {
    for (double s : v) {
      if (!std::isfinite(s) || s < 0.0 || s > 1.0) {
        issues.push_back(std::string(what) + " score outside [0,1]");
        break;
      }
    }
  };
  check(r.step_scores, "step");
  check(r.group_scores, "group");
  return issues;
}

std::vector<StepRange> partition_groups(const CotTrace& trace, int group_size) {
  if (group_size < 1) throw std::invalid_argument("group size must be >= 1");
  const int n = static_cast<int>(trace.steps.size());
  if (n < 1) throw std::invalid_argument("cannot partition an empty trace");
  std::vector<StepRange> out;
  for (int first = 1; first <= n; first += group_size)
    out.push_back({first, std::min(first + group_size - 1, n)});
  return out;
}

JudgeResponse ReferenceJudge::score(const JudgeRequest& req) {
  if (auto issues = validate(req); !issues.empty())
    throw JudgeError("bad judge request: " + issues.front());

  TokenList verbs, objects, humans;
  for (const auto& t : req.gt_triplets) {
    add_token(verbs, t.verb_label);
    add_token(objects, t.object_label);
  }
  for (const auto& s : human_synonyms_) add_token(humans, s);

  JudgeResponse resp;
  std::vector<std::vector<std::string>> step_words;
  step_words.reserve(req.trace.steps.size());
  for (const auto& step : req.trace.steps) {
    step_words.push_back(words_of(step));
    const auto& words = step_words.back();
    int hits = 0;
    if (earliest_hit(words, verbs)) ++hits;
    if (earliest_hit(words, objects)) ++hits;
    if (earliest_hit(words, humans)) ++hits;
    resp.step_scores.push_back(hits / 3.0);
  }

  for (const auto& range : req.group_partition) {
    double sum = 0.0;
    // Global word positions across the group decide whether an action word
    // shows up before any entity it should be grounded in.
    std::optional<std::size_t> verb_pos, entity_pos;
    std::size_t offset = 0;
    for (int i = range.first; i <= range.last; ++i) {
      const auto& words = step_words[static_cast<std::size_t>(i - 1)];
      sum += resp.step_scores[static_cast<std::size_t>(i - 1)];
      if (auto p = earliest_hit(words, verbs); p && !verb_pos) verb_pos = offset + *p;
      if (auto p = earliest_hit(words, objects); p && (!entity_pos || offset + *p < *entity_pos))
        entity_pos = offset + *p;
      if (auto p = earliest_hit(words, humans); p && (!entity_pos || offset + *p < *entity_pos))
        entity_pos = offset + *p;
      offset += words.size();
    }
    const double mean = sum / static_cast<double>(range.last - range.first + 1);
    const bool verb_leads = verb_pos && (!entity_pos || *verb_pos < *entity_pos);
    resp.group_scores.push_back(verb_leads ? mean * 0.5 : mean);
  }
  return resp;
}

// --- external judge -------------------------------------------------------

struct ExternalJudge::Impl {
  ExternalJudgeConfig config;
  std::string base; // scheme://host:port
  std::string path;
  std::counting_semaphore<256> slots;

  explicit Impl(ExternalJudgeConfig c)
      : config(std::move(c)),
        slots(std::clamp(config.max_inflight, 1, 256)) {
    const auto scheme_end = config.endpoint.find("://");
    if (scheme_end == std::string::npos || config.endpoint.substr(0, scheme_end) != "http")
      throw JudgeError("judge endpoint must be an http:// URL: " + config.endpoint);
    const auto path_start = config.endpoint.find('/', scheme_end + 3);
    base = path_start == std::string::npos ? config.endpoint
                                            : config.endpoint.substr(0, path_start);
    path = path_start == std::string::npos ? "/" : config.endpoint.substr(path_start);
    if (base.size() <= scheme_end + 3) throw JudgeError("judge endpoint has no host");
  }
};

ExternalJudge::ExternalJudge(ExternalJudgeConfig config)
    : impl_(std::make_unique<Impl>(std::move(config))) {}

ExternalJudge::~ExternalJudge() = default;

JudgeResponse ExternalJudge::score(const JudgeRequest& req) {
  if (auto issues = validate(req); !issues.empty())
    throw JudgeError("bad judge request: " + issues.front());

  impl_->slots.acquire();
  struct Release {
    std::counting_semaphore<256>& s;
    ~Release() { s.release(); }
  } release{impl_->slots};

  // A client per call keeps this safe under concurrent scoring.
  httplib::Client cli(impl_->base);
  const auto timeout = std::chrono::milliseconds(impl_->config.timeout_ms);
  cli.set_connection_timeout(timeout);
  cli.set_read_timeout(timeout);
  cli.set_write_timeout(timeout);

  auto res = cli.Post(impl_->path, judge_request_to_json(req), "application/json");
  if (!res)
    throw JudgeError("judge request to " + impl_->config.endpoint +
                     " failed: " + httplib::to_string(res.error()));
  if (res->status != 200)
    throw JudgeError("judge returned HTTP " + std::to_string(res->status));
  return judge_response_from_json(res->body, req);
}

FallbackJudge::FallbackJudge(std::unique_ptr<CotJudge> primary,
                             std::unique_ptr<CotJudge> fallback, LogFn log)
    : primary_(std::move(primary)), fallback_(std::move(fallback)), log_(std::move(log)) {}

JudgeResponse FallbackJudge::score(const JudgeRequest& req) {
  try {
    return primary_->score(req);
  } catch (const JudgeError& e) {
    ++fallback_count_;
    const std::string msg =
        "judge '" + primary_->name() + "' failed (" + e.what() + "); using '" +
        fallback_->name() + "'";
    if (log_)
      log_(msg);
    else
      std::cerr << msg << "\n";
    return fallback_->score(req);
  }
}

// --- wire format ----------------------------------------------------------

std::string judge_request_to_json(const JudgeRequest& req) {
  nlohmann::ordered_json j;
  j["query"] = req.query;
  j["steps"] = req.trace.steps;
  auto groups = nlohmann::ordered_json::array();
  for (const auto& g : req.group_partition) groups.push_back({g.first, g.last});
  j["groups"] = std::move(groups);
  auto gt = nlohmann::ordered_json::array();
  for (const auto& t : req.gt_triplets) {
    gt.push_back({{"subject", t.subject_label},
                  {"verb", t.verb_label},
                  {"object", t.object_label},
                  {"human_box", {t.human_box.x_min, t.human_box.y_min, t.human_box.x_max,
                                 t.human_box.y_max}},
                  {"object_box", {t.object_box.x_min, t.object_box.y_min, t.object_box.x_max,
                                  t.object_box.y_max}}});
  }
  j["gt"] = std::move(gt);
  return j.dump();
}

JudgeResponse judge_response_from_json(const std::string& body, const JudgeRequest& req) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(body);
  } catch (const std::exception& e) {
    throw JudgeError(std::string("judge response is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw JudgeError("judge response is not a JSON object");

  auto read = [&](const char* key, std::size_t want) {
    if (!j.contains(key)) throw JudgeError(std::string("judge response missing ") + key);
    const auto& arr = j.at(key);
    if (!arr.is_array() || arr.size() != want)
      throw JudgeError(std::string(key) + " has " +
                       (arr.is_array() ? std::to_string(arr.size()) : "no") + " entries, expected " +
                       std::to_string(want));
    std::vector<double> out;
    out.reserve(want);
    for (const auto& v : arr) {
      if (!v.is_number()) throw JudgeError(std::string(key) + " contains a non-numeric score");
      const double d = v.get<double>();
      if (!std::isfinite(d)) throw JudgeError(std::string(key) + " contains a non-finite score");
      out.push_back(std::clamp(d, 0.0, 1.0));
    }
    return out;
  };

  JudgeResponse resp;
  resp.step_scores = read("step_scores", req.trace.steps.size());
  resp.group_scores = read("group_scores", req.group_partition.size());
  return resp;
}

} // namespace hoirl
