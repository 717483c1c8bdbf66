#include "run/config.hpp"

#include <sstream>

namespace decopt::run {

namespace {

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t b = item.find_first_not_of(" \t");
    std::size_t e = item.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

}  // namespace

ExperimentConfig ExperimentConfig::from_doc(const KvDoc& doc) {
  ExperimentConfig c;
  for (const auto& [key, value] : doc.entries()) c.apply_override(key, value);
  return c;
}

void ExperimentConfig::apply_override(const std::string& key, const std::string& value) {
  if (key == "experiment") experiment = value;
  else if (key == "methods") methods = split_list(value);
  else if (key == "seed") seed = std::stoull(value);
  else if (key == "deterministic") deterministic = (value == "1" || value == "true" || value == "yes");
  else if (key == "budget_seconds") budget_seconds = parse_double(value);
  else if (key == "checkpoint") checkpoint = value;
  else if (key == "method") method = value;
  else if (key == "ems.stages") ems_stages = std::stoi(value);
  else if (key == "ems.scenarios") ems_scenarios = std::stoi(value);
  else if (key == "ems.eval_instances") ems_eval_instances = std::stoi(value);
  else if (key == "ems.tuning_node_limit") tuning_node_limit = std::stol(value);
  else if (key == "ems.epochs_single") ems_epochs_single = std::stoi(value);
  else if (key == "ems.epochs_sequential") ems_epochs_sequential = std::stoi(value);
  else if (key == "ems.epochs_rl") ems_epochs_rl = std::stoi(value);
  else if (key == "ems.epochs_safety") ems_epochs_safety = std::stoi(value);
  else if (key == "ems.batch") ems_batch = std::stoi(value);
  else if (key == "ems.reward_scale") ems_reward_scale = parse_double(value);
  else if (key == "smc.elements") smc_elements = std::stoi(value);
  else if (key == "smc.sets") smc_sets = std::stoi(value);
  else if (key == "smc.density") smc_density = parse_double(value);
  else if (key == "smc.sto_elements") smc_sto_elements = std::stoi(value);
  else if (key == "smc.sto_sets") smc_sto_sets = std::stoi(value);
  else if (key == "smc.sto_density") smc_sto_density = parse_double(value);
  else if (key == "smc.train_pairs") smc_train_pairs = std::stoi(value);
  else if (key == "smc.test_instances") smc_test_instances = std::stoi(value);
  else if (key == "smc.epochs") smc_epochs = std::stoi(value);
  else if (key == "smc.batch") smc_batch = std::stoi(value);
  else if (key == "smc.scenario_grid") {
    scenario_grid.clear();
    for (const auto& s : split_list(value)) scenario_grid.push_back(std::stoi(s));
  } else if (key == "smc.saa_replicates") saa_replicates = std::stoi(value);
  else if (key == "smc.gap_tol") smc_gap_tol = parse_double(value);
  else if (key == "learner.learning_rate") learning_rate = parse_double(value);
  else if (key == "learner.eval_every") eval_every = std::stoi(value);
  else throw IoError("unknown config key: " + key);
}

KvDoc ExperimentConfig::to_doc() const {
  KvDoc doc;
  doc.set("experiment", experiment);
  std::string m;
  for (std::size_t i = 0; i < methods.size(); ++i) m += (i ? "," : "") + methods[i];
  if (!m.empty()) doc.set("methods", m);
  doc.set("seed", std::to_string(seed));
  doc.set("deterministic", deterministic ? "1" : "0");
  doc.set_num("budget_seconds", budget_seconds);
  if (!checkpoint.empty()) doc.set("checkpoint", checkpoint);
  if (!method.empty()) doc.set("method", method);
  doc.set_int("ems.stages", ems_stages);
  doc.set_int("ems.scenarios", ems_scenarios);
  doc.set_int("ems.eval_instances", ems_eval_instances);
  doc.set_int("ems.tuning_node_limit", tuning_node_limit);
  doc.set_int("ems.epochs_single", ems_epochs_single);
  doc.set_int("ems.epochs_sequential", ems_epochs_sequential);
  doc.set_int("ems.epochs_rl", ems_epochs_rl);
  doc.set_int("ems.epochs_safety", ems_epochs_safety);
  doc.set_int("ems.batch", ems_batch);
  doc.set_num("ems.reward_scale", ems_reward_scale);
  doc.set_int("smc.elements", smc_elements);
  doc.set_int("smc.sets", smc_sets);
  doc.set_num("smc.density", smc_density);
  doc.set_int("smc.sto_elements", smc_sto_elements);
  doc.set_int("smc.sto_sets", smc_sto_sets);
  doc.set_num("smc.sto_density", smc_sto_density);
  doc.set_int("smc.train_pairs", smc_train_pairs);
  doc.set_int("smc.test_instances", smc_test_instances);
  doc.set_int("smc.epochs", smc_epochs);
  doc.set_int("smc.batch", smc_batch);
  std::string grid;
  for (std::size_t i = 0; i < scenario_grid.size(); ++i)
    grid += (i ? "," : "") + std::to_string(scenario_grid[i]);
  doc.set("smc.scenario_grid", grid);
  doc.set_int("smc.saa_replicates", saa_replicates);
  doc.set_num("smc.gap_tol", smc_gap_tol);
  doc.set_num("learner.learning_rate", learning_rate);
  doc.set_int("learner.eval_every", eval_every);
  return doc;
}

}  // namespace decopt::run
