#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "hoirl/types.hpp"

namespace hoirl {

/// 1-based inclusive range of reasoning-step indices.
struct StepRange {
  int first = 1;
  int last = 1;

  friend bool operator==(const StepRange&, const StepRange&) = default;
};

/// What a judge is asked to score: a trace in the context of its query and
/// ground truth, plus the step grouping for group-level scores.
struct JudgeRequest {
  std::string query;
  CotTrace trace;
  std::vector<HoiTriplet> gt_triplets;
  std::vector<StepRange> group_partition;
};

/// Per-step scores s_i and per-group scores g_j, all in [0,1].
struct JudgeResponse {
  std::vector<double> step_scores;
  std::vector<double> group_scores;

  friend bool operator==(const JudgeResponse&, const JudgeResponse&) = default;
};

std::vector<std::string> validate(const JudgeRequest& r);
std::vector<std::string> validate(const JudgeResponse& r, const JudgeRequest& req);

/// Split 1..N into consecutive ranges of group_size steps; the final range
/// holds the remainder. M = ceil(N / group_size).
std::vector<StepRange> partition_groups(const CotTrace& trace, int group_size);

/// Scorer contract. Implementations may throw JudgeError.
class CotJudge {
public:
  virtual ~CotJudge() = default;
  virtual JudgeResponse score(const JudgeRequest& req) = 0;
  virtual std::string name() const = 0;
};

/// Deterministic lexical judge. A step scores the fraction of the three
/// token categories it mentions: a ground-truth verb, a ground-truth object,
/// and a human word. A group scores the mean of its steps' scores times an
/// ordering bonus (1 when entities are mentioned no later than verbs, or
/// when no verb is mentioned at all; otherwise 0.5). Word matching is
/// case-insensitive, whole-word, and tolerates a trailing "s".
class ReferenceJudge : public CotJudge {
public:
  ReferenceJudge() = default;
  explicit ReferenceJudge(std::vector<std::string> human_synonyms)
      : human_synonyms_(std::move(human_synonyms)) {}

  JudgeResponse score(const JudgeRequest& req) override;
  std::string name() const override { return "reference"; }

private:
  std::vector<std::string> human_synonyms_ = default_human_synonyms();
};

struct ExternalJudgeConfig {
  std::string endpoint;     // e.g. http://127.0.0.1:8808/judge
  int timeout_ms = 2000;
  int max_inflight = 4;     // concurrent request bound
};

/// HTTP client for an external judge service. POSTs the request as JSON and
/// expects {"step_scores": [...], "group_scores": [...]}; scores are clamped
/// into [0,1]. Throws JudgeError on timeout, malformed payloads, or score
/// lists whose lengths do not match the request.
class ExternalJudge : public CotJudge {
public:
  explicit ExternalJudge(ExternalJudgeConfig config);
  ~ExternalJudge() override;

  JudgeResponse score(const JudgeRequest& req) override;
  std::string name() const override { return "external"; }

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Runs the primary judge and falls back to the secondary when the primary
/// throws JudgeError, logging each fallback event.
class FallbackJudge : public CotJudge {
public:
  using LogFn = std::function<void(const std::string&)>;

  FallbackJudge(std::unique_ptr<CotJudge> primary, std::unique_ptr<CotJudge> fallback,
                LogFn log = nullptr);

  JudgeResponse score(const JudgeRequest& req) override;
  std::string name() const override { return "fallback"; }
  int fallback_count() const { return fallback_count_; }

private:
  std::unique_ptr<CotJudge> primary_;
  std::unique_ptr<CotJudge> fallback_;
  LogFn log_;
  int fallback_count_ = 0;
};

// Wire payloads for the external judge protocol.
std::string judge_request_to_json(const JudgeRequest& req);
JudgeResponse judge_response_from_json(const std::string& body, const JudgeRequest& req);

} // namespace hoirl
