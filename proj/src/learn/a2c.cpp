#include "learn/a2c.hpp"

#include <cmath>
#include <string>

namespace decopt::learn {

namespace {

bool all_finite(const std::vector<double>& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

}  // namespace

A2cDiagnostics a2c_update(GaussianPolicy& policy, Mlp& critic,
                          const std::vector<EpisodeSample>& batch, const A2cConfig& config,
                          AdamState& policy_state, AdamState& log_std_state,
                          AdamState& critic_state) {
  if (batch.empty()) throw TrainError("a2c update on an empty batch");

  // Reward-to-go per step, critic values, advantages.
  struct Flat {
    const StepSample* step = nullptr;
    double rtg = 0.0;
    double value = 0.0;
    Mlp::Tape tape;
  };
  std::vector<Flat> flat;
  double return_sum = 0.0;
  for (const auto& ep : batch) {
    double acc = 0.0;
    std::vector<double> rtg(ep.steps.size());
    for (int k = static_cast<int>(ep.steps.size()) - 1; k >= 0; --k) {
      acc = ep.steps[k].reward + config.gamma * acc;
      rtg[k] = acc;
    }
    if (!ep.steps.empty()) return_sum += rtg[0];
    for (std::size_t k = 0; k < ep.steps.size(); ++k) {
      Flat f;
      f.step = &ep.steps[k];
      f.rtg = rtg[k];
      flat.push_back(std::move(f));
    }
  }
  if (flat.empty()) throw TrainError("a2c update on a batch with no steps");

  for (auto& f : flat) f.value = critic.forward(f.step->obs, f.tape)[0];

  std::vector<double> adv(flat.size());
  for (std::size_t i = 0; i < flat.size(); ++i) adv[i] = flat[i].rtg - flat[i].value;

  double adv_mean = 0.0, adv_sq = 0.0;
  for (double a : adv) adv_mean += a;
  adv_mean /= static_cast<double>(adv.size());
  for (double a : adv) adv_sq += (a - adv_mean) * (a - adv_mean);
  const double adv_std = std::sqrt(adv_sq / static_cast<double>(adv.size()));
  if (config.normalize_advantages) {
    const double scale = adv_std > 1e-12 ? adv_std : 1.0;
    for (double& a : adv) a = (a - adv_mean) / scale;
  }

  // Policy gradient (ascent on reward, so Adam minimizes the negation).
  std::vector<double> mean_grad(policy.mean_net.param_count(), 0.0);
  std::vector<double> log_std_grad(policy.log_std.size(), 0.0);
  const double inv_n = 1.0 / static_cast<double>(flat.size());
  for (std::size_t i = 0; i < flat.size(); ++i) {
    policy.accumulate_log_prob_grad(flat[i].step->obs, flat[i].step->action, -adv[i] * inv_n,
                                    mean_grad, log_std_grad);
  }
  if (!all_finite(mean_grad) || !all_finite(log_std_grad))
    throw TrainError("non-finite policy gradient over a batch of " +
                     std::to_string(batch.size()) + " episodes");

  // Critic regression toward reward-to-go.
  std::vector<double> critic_grad(critic.param_count(), 0.0);
  double critic_loss = 0.0;
  for (auto& f : flat) {
    const double err = f.value - f.rtg;
    critic_loss += err * err;
    const std::vector<double> dout = {2.0 * err * inv_n};
    critic.backward(f.tape, dout, critic_grad);
  }
  critic_loss *= inv_n;
  if (!all_finite(critic_grad))
    throw TrainError("non-finite critic gradient over a batch of " +
                     std::to_string(batch.size()) + " episodes");

  adam_step(policy.mean_net.params(), mean_grad, policy_state, config.learning_rate);
  adam_step(policy.log_std, log_std_grad, log_std_state, config.learning_rate);
  adam_step(critic.params(), critic_grad, critic_state, config.learning_rate);

  A2cDiagnostics diag;
  diag.mean_return = return_sum / static_cast<double>(batch.size());
  diag.advantage_std = adv_std;
  double norm = 0.0;
  for (double g : mean_grad) norm += g * g;
  for (double g : log_std_grad) norm += g * g;
  diag.policy_grad_norm = std::sqrt(norm);
  diag.critic_loss = critic_loss;
  return diag;
}

}  // namespace decopt::learn
