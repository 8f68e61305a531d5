#include "hoirl/grpo.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "hoirl/errors.hpp"

namespace hoirl {

std::vector<double> group_advantages(std::span<const double> rewards, double std_guard) {
  const std::size_t n = rewards.size();
  if (n == 0) return {};
  const double mean = std::accumulate(rewards.begin(), rewards.end(), 0.0) / static_cast<double>(n);
  double var = 0.0;
  for (double r : rewards) var += (r - mean) * (r - mean);
  const double std = std::sqrt(var / static_cast<double>(n));
  std::vector<double> adv(n, 0.0);
  if (std <= std_guard) return adv;
  for (std::size_t i = 0; i < n; ++i) adv[i] = (rewards[i] - mean) / std;
  return adv;
}

double kl_penalty(double logp_current, double logp_ref) {
  const double d = logp_ref - logp_current;
  // u - log(u) - 1 with u = exp(d); writing log(u) as d avoids a round trip.
  return std::exp(d) - d - 1.0;
}

double clipped_surrogate_term(double ratio, double advantage, double clip_epsilon) {
  const double clipped = std::clamp(ratio, 1.0 - clip_epsilon, 1.0 + clip_epsilon);
  return std::min(ratio * advantage, clipped * advantage);
}

bool clipped_out(double ratio, double advantage, double clip_epsilon) {
  return (advantage > 0.0 && ratio > 1.0 + clip_epsilon) ||
         (advantage < 0.0 && ratio < 1.0 - clip_epsilon);
}

double grpo_objective(const std::vector<GroupSample>& group, const GrpoConfig& cfg) {
  if (group.empty()) throw TrainError("objective of an empty group");
  double surrogate = 0.0, kl = 0.0;
  for (const auto& s : group) {
    surrogate += clipped_surrogate_term(s.ratio, s.advantage, cfg.clip_epsilon);
    kl += kl_penalty(s.logp_current, s.logp_ref);
  }
  const double g = static_cast<double>(group.size());
  return surrogate / g - cfg.beta_kl * (kl / g);
}

std::vector<double> objective_gradient(const Policy& policy, std::span<const double> params,
                                       const std::vector<GroupSample>& group,
                                       const GrpoConfig& cfg) {
  if (group.empty()) throw TrainError("gradient of an empty group");
  std::vector<double> grad(static_cast<std::size_t>(policy.dim()), 0.0);
  const double inv_g = 1.0 / static_cast<double>(group.size());
  for (const auto& s : group) {
    const auto g = policy.log_prob_gradient(params, s.output.raw_text);
    double coeff = 0.0;
    if (!clipped_out(s.ratio, s.advantage, cfg.clip_epsilon))
      coeff += s.advantage * s.ratio;
    const double u = std::exp(s.logp_ref - s.logp_current);
    coeff -= cfg.beta_kl * (1.0 - u);
    for (std::size_t k = 0; k < grad.size(); ++k) grad[k] += inv_g * coeff * g[k];
  }
  return grad;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

} // namespace

std::mt19937_64 rollout_rng(std::uint64_t seed, int iteration, int query_index,
                            int rollout_index) {
  std::uint64_t s = splitmix64(seed);
  s = splitmix64(s ^ static_cast<std::uint64_t>(iteration));
  s = splitmix64(s ^ static_cast<std::uint64_t>(query_index));
  s = splitmix64(s ^ static_cast<std::uint64_t>(rollout_index));
  return std::mt19937_64(s);
}

TrainResult train(
    const Policy& policy, const std::vector<GroundTruthSample>& dataset, const RewardFn& reward_fn,
    const GrpoConfig& cfg,
    const std::function<void(const IterationStats&, std::span<const double>)>& on_iteration) {
  if (auto issues = validate(cfg); !issues.empty())
    throw TrainError("bad optimizer config: " + issues.front());
  if (dataset.empty()) throw TrainError("training dataset is empty");
  if (!reward_fn) throw TrainError("no reward function");

  TrainResult result;
  result.params = policy.initial_params();
  if (static_cast<int>(result.params.size()) != policy.dim())
    throw TrainError("policy reports dim " + std::to_string(policy.dim()) + " but has " +
                     std::to_string(result.params.size()) + " initial parameters");
  const std::vector<double> ref = result.params;

  for (int iter = 0; iter < cfg.iterations; ++iter) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<double> old = result.params; // rollout policy for this iteration

    double reward_sum = 0.0, kl_sum = 0.0, objective_sum = 0.0;
    long n_rollouts = 0;

    for (int q = 0; q < static_cast<int>(dataset.size()); ++q) {
      const auto& sample = dataset[static_cast<std::size_t>(q)];

      GroupRollout rollout{sample, std::vector<GroupSample>(static_cast<std::size_t>(cfg.group_size))};
      auto& group = rollout.samples;
      std::vector<double> rewards(group.size());
      for (int i = 0; i < cfg.group_size; ++i) {
        auto& gs = group[static_cast<std::size_t>(i)];
        auto rng = rollout_rng(cfg.rng_seed, iter, q, i);
        const std::string raw = policy.sample(old, rng);
        gs.output.raw_text = raw;
        gs.logp_old = policy.log_prob(old, raw);
        gs.logp_ref = policy.log_prob(ref, raw);
        gs.logp_current = policy.log_prob(result.params, raw);
        gs.ratio = std::exp(gs.logp_current - gs.logp_old);
        gs.reward = reward_fn(raw, sample);
        if (!std::isfinite(gs.reward.composite))
          throw TrainError("non-finite reward for sample '" + sample.sample_id + "'");
        rewards[static_cast<std::size_t>(i)] = gs.reward.composite;
      }

      const auto advantages = group_advantages(rewards, cfg.std_guard);
      for (std::size_t i = 0; i < group.size(); ++i) group[i].advantage = advantages[i];

      const double objective = grpo_objective(group, cfg);
      if (!std::isfinite(objective))
        throw TrainError("non-finite objective at iteration " + std::to_string(iter));
      const auto grad = objective_gradient(policy, result.params, group, cfg);
      for (std::size_t k = 0; k < result.params.size(); ++k)
        result.params[k] += cfg.learning_rate * grad[k];
      if (!all_finite(result.params))
        throw TrainError("parameters diverged at iteration " + std::to_string(iter));

      objective_sum += objective;
      for (const auto& gs : group) {
        reward_sum += gs.reward.composite;
        kl_sum += kl_penalty(gs.logp_current, gs.logp_ref);
        ++n_rollouts;
      }
    }

    IterationStats stats;
    stats.iteration = iter;
    stats.mean_reward = reward_sum / static_cast<double>(n_rollouts);
    stats.objective = objective_sum / static_cast<double>(dataset.size());
    stats.mean_kl = kl_sum / static_cast<double>(n_rollouts);
    stats.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                        .count();
    result.history.push_back(stats);
    if (on_iteration) on_iteration(stats, result.params);
  }
  return result;
}

} // namespace hoirl
