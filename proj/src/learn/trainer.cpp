#include "learn/trainer.hpp"

#include <chrono>
#include <cmath>

namespace decopt::learn {

double collect_episode(policy::Environment& env, const GaussianPolicy& policy, Rng& rng,
                       std::uint64_t seed, double reward_scale, EpisodeSample& out) {
  out.steps.clear();
  out.failed = false;
  policy::Observation obs = env.reset(seed);
  double total_cost = 0.0;
  for (int k = 0; k < env.horizon(); ++k) {
    const std::vector<double> x = obs.normalized().values;
    StepSample step;
    step.obs = x;
    step.action = policy.sample(x, rng);
    const auto sr = env.step(step.action);
    step.reward = -sr.cost / reward_scale;
    total_cost += sr.cost;
    out.steps.push_back(std::move(step));
    if (sr.failed) out.failed = true;
    if (sr.done) break;
    obs = sr.obs;
  }
  return total_cost;
}

double evaluate_mean_policy(policy::Environment& env, const GaussianPolicy& policy,
                            const std::vector<std::uint64_t>& seeds,
                            std::vector<double>* per_episode, long* failures) {
  double total = 0.0;
  long failed = 0;
  for (std::uint64_t s : seeds) {
    policy::Observation obs = env.reset(s);
    double cost = 0.0;
    for (int k = 0; k < env.horizon(); ++k) {
      const std::vector<double> x = obs.normalized().values;
      const auto sr = env.step(policy.mean_action(x));
      cost += sr.cost;
      if (sr.failed) ++failed;
      if (sr.done) break;
      obs = sr.obs;
    }
    total += cost;
    if (per_episode) per_episode->push_back(cost);
  }
  if (failures) *failures = failed;
  return total / static_cast<double>(seeds.size());
}

GaussianPolicy initial_policy(const policy::Environment& env, const TrainConfig& config) {
  Rng init_rng = Rng(config.seed).child("net-init");
  return GaussianPolicy(
      Mlp::standard(env.observation_dim(), env.action_dim(), init_rng, config.zero_output_init));
}

TrainOutcome train_policy(policy::Environment& env, const TrainConfig& config,
                          const std::vector<std::uint64_t>& eval_seeds) {
  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };

  Rng master(config.seed);
  Rng init_rng = master.child("net-init");
  Rng action_rng = master.child("actions");
  Rng episode_rng = master.child("episodes");

  TrainOutcome out;
  out.policy = GaussianPolicy(
      Mlp::standard(env.observation_dim(), env.action_dim(), init_rng, config.zero_output_init));
  out.critic = Mlp::standard(env.observation_dim(), 1, init_rng, false);

  AdamState pol_state, std_state, critic_state;
  A2cConfig a2c;
  a2c.learning_rate = config.learning_rate;
  a2c.gamma = config.discount;

  auto evaluate_and_track = [&](int epoch) {
    if (eval_seeds.empty()) return std::numeric_limits<double>::quiet_NaN();
    const double cost = evaluate_mean_policy(env, out.policy, eval_seeds);
    if (cost < out.best_eval_cost) {
      out.best_eval_cost = cost;
      out.best_policy = out.policy;
      out.best_epoch = epoch;
    }
    return cost;
  };

  {
    EpochStats st;
    st.epoch = 0;
    st.eval_mean_cost = evaluate_and_track(0);
    st.elapsed_seconds = elapsed();
    out.history.push_back(st);
  }

  std::vector<EpisodeSample> batch(config.batch_episodes);
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    if (!config.deterministic && elapsed() > config.budget_seconds) break;
    EpochStats st;
    st.epoch = epoch;
    double cost_sum = 0.0;
    for (int b = 0; b < config.batch_episodes; ++b) {
      const std::uint64_t seed = episode_rng.next_u64();
      cost_sum += collect_episode(env, out.policy, action_rng, seed, config.reward_scale,
                                  batch[b]);
      if (batch[b].failed) ++st.failed_episodes;
    }
    st.train_mean_cost = cost_sum / config.batch_episodes;
    out.total_failed_episodes += st.failed_episodes;
    a2c_update(out.policy, out.critic, batch, a2c, pol_state, std_state, critic_state);
    if (epoch % config.eval_every == 0 || epoch == config.epochs)
      st.eval_mean_cost = evaluate_and_track(epoch);
    st.elapsed_seconds = elapsed();
    out.history.push_back(st);
  }
  if (eval_seeds.empty()) out.best_policy = out.policy;
  out.rng_state = episode_rng.state();
  const auto action_state = action_rng.state();
  out.rng_state.insert(out.rng_state.end(), action_state.begin(), action_state.end());
  return out;
}

}  // namespace decopt::learn
