#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "hoirl/types.hpp"

namespace hoirl {

/// A stochastic text policy over an explicit parameter vector. Methods never
/// mutate the policy object itself, so one instance can be evaluated at the
/// current, old and reference parameters alike.
class Policy {
public:
  virtual ~Policy() = default;
  virtual int dim() const = 0;
  virtual std::vector<double> initial_params() const = 0;
  virtual double log_prob(std::span<const double> params, const std::string& output) const = 0;
  virtual std::string sample(std::span<const double> params, std::mt19937_64& rng) const = 0;
  /// d log pi(output | params) / d params.
  virtual std::vector<double> log_prob_gradient(std::span<const double> params,
                                                const std::string& output) const = 0;
};

/// The G outputs one query drew from the rollout (old) policy, with their
/// scores and advantages.
struct GroupRollout {
  GroundTruthSample query;
  std::vector<GroupSample> samples;
};

/// Group-relative advantages: (r_i - mean) / population std. When the std
/// falls at or below the guard every advantage is zero, which freezes the
/// surrogate for degenerate (all-equal-reward) groups.
std::vector<double> group_advantages(std::span<const double> rewards, double std_guard);

/// Low-variance KL estimate between the current policy and the reference at
/// one sample: u - log(u) - 1 with u = pi_ref / pi_current. Non-negative,
/// zero exactly when the log-probabilities coincide.
double kl_penalty(double logp_current, double logp_ref);

/// Pessimistic policy-ratio term: min(ratio * A, clip(ratio, 1-eps, 1+eps) * A).
double clipped_surrogate_term(double ratio, double advantage, double clip_epsilon);

/// Group objective: mean clipped surrogate minus beta_kl times the mean KL
/// penalty. Samples must carry logp fields evaluated at the parameters the
/// caller cares about.
double grpo_objective(const std::vector<GroupSample>& group, const GrpoConfig& cfg);

/// Analytic gradient of grpo_objective with respect to the parameters at
/// which logp_current (and hence ratio) was evaluated. A sample whose ratio
/// sits on the flat side of the clip contributes nothing to the surrogate
/// part; the KL part contributes -beta_kl * (1 - u) * dlogp for every sample.
std::vector<double> objective_gradient(const Policy& policy, std::span<const double> params,
                                       const std::vector<GroupSample>& group,
                                       const GrpoConfig& cfg);

/// Whether the surrogate minimum selects the clipped (constant) branch, i.e.
/// the sample is outside the trust region in the direction its advantage
/// pushes.
bool clipped_out(double ratio, double advantage, double clip_epsilon);

struct IterationStats {
  int iteration = 0;
  double mean_reward = 0.0; // composite reward over every rollout this iteration
  double objective = 0.0;   // mean per-query objective before the update
  double mean_kl = 0.0;     // mean KL penalty against the reference policy
  double wall_ms = 0.0;
};

struct TrainResult {
  std::vector<double> params;
  std::vector<IterationStats> history;
};

/// Scores one sampled raw text against its query's ground truth.
using RewardFn =
    std::function<RewardBreakdown(const std::string& raw_text, const GroundTruthSample& sample)>;

/// Deterministic sampling stream for rollout i of query q in iteration it.
std::mt19937_64 rollout_rng(std::uint64_t seed, int iteration, int query_index, int rollout_index);

/// Group-relative training loop. Per iteration the current parameters are
/// snapshotted as the rollout policy; each query then draws a group of
/// samples from that snapshot, standardizes their rewards into advantages
/// and takes one gradient-ascent step on the clipped objective with a KL
/// leash toward the initial (reference) parameters. Throws TrainError on an
/// invalid config, an empty dataset, or non-finite numbers.
TrainResult train(
    const Policy& policy, const std::vector<GroundTruthSample>& dataset, const RewardFn& reward_fn,
    const GrpoConfig& cfg,
    const std::function<void(const IterationStats&, std::span<const double>)>& on_iteration =
        nullptr);

} // namespace hoirl
