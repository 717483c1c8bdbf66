#include "learn/checkpoint.hpp"

#include "common/textio.hpp"

namespace decopt::learn {

namespace {

std::vector<double> widths_to_doubles(const std::vector<int>& w) {
  return std::vector<double>(w.begin(), w.end());
}

std::vector<int> widths_from_doubles(const std::vector<double>& w) {
  std::vector<int> out;
  for (double v : w) out.push_back(static_cast<int>(v));
  return out;
}

}  // namespace

void save_checkpoint(const Checkpoint& ck, const std::string& path) {
  KvDoc doc;
  doc.set("format", "decopt-checkpoint-1");
  doc.set_array("policy.mean.widths", widths_to_doubles(ck.policy.mean_net.widths()));
  doc.set_array("policy.mean.params", ck.policy.mean_net.params());
  doc.set_array("policy.log_std", ck.policy.log_std);
  doc.set_array("critic.widths", widths_to_doubles(ck.critic.widths()));
  doc.set_array("critic.params", ck.critic.params());
  doc.set_num("config.learning_rate", ck.config.learning_rate);
  doc.set_int("config.batch_episodes", ck.config.batch_episodes);
  doc.set_int("config.epochs", ck.config.epochs);
  doc.set_num("config.discount", ck.config.discount);
  doc.set("config.seed", std::to_string(ck.config.seed));
  doc.set_num("config.reward_scale", ck.config.reward_scale);
  doc.set_int("epochs_done", ck.epochs_done);
  std::string rng;
  for (std::size_t i = 0; i < ck.rng_state.size(); ++i) {
    if (i) rng += ",";
    rng += std::to_string(ck.rng_state[i]);
  }
  doc.set("rng.state", rng);
  doc.save(path);
}

Checkpoint load_checkpoint(const std::string& path) {
  const KvDoc doc = KvDoc::load(path);
  if (doc.get("format", "") != "decopt-checkpoint-1")
    throw IoError("not a decopt checkpoint: " + path);
  Checkpoint ck;
  Mlp mean(widths_from_doubles(doc.get_array("policy.mean.widths")));
  mean.params() = doc.get_array("policy.mean.params");
  ck.policy = GaussianPolicy(std::move(mean));
  ck.policy.log_std = doc.get_array("policy.log_std");
  Mlp critic(widths_from_doubles(doc.get_array("critic.widths")));
  critic.params() = doc.get_array("critic.params");
  ck.critic = std::move(critic);
  ck.config.learning_rate = doc.get_num("config.learning_rate", 0.01);
  ck.config.batch_episodes = static_cast<int>(doc.get_int("config.batch_episodes", 100));
  ck.config.epochs = static_cast<int>(doc.get_int("config.epochs", 100));
  ck.config.discount = doc.get_num("config.discount", 1.0);
  ck.config.seed = doc.has("config.seed") ? std::stoull(doc.get("config.seed")) : 0;
  ck.config.reward_scale = doc.get_num("config.reward_scale", 1.0);
  ck.epochs_done = static_cast<int>(doc.get_int("epochs_done", 0));
  if (doc.has("rng.state") && !doc.get("rng.state").empty()) {
    std::string s = doc.get("rng.state");
    std::size_t pos = 0;
    while (pos < s.size()) {
      std::size_t comma = s.find(',', pos);
      if (comma == std::string::npos) comma = s.size();
      ck.rng_state.push_back(std::stoull(s.substr(pos, comma - pos)));
      pos = comma + 1;
    }
  }
  return ck;
}

}  // namespace decopt::learn
