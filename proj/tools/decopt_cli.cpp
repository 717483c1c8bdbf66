// Command-line front end. Talks to the core exclusively through the C API.

#include <cstdio>
#include <memory>
#include <string>

#include <CLI11.hpp>

#include "decopt/decopt.h"

namespace {

struct ConfigDeleter {
  void operator()(decopt_config* c) const { decopt_config_free(c); }
};
using ConfigPtr = std::unique_ptr<decopt_config, ConfigDeleter>;

struct CommonFlags {
  std::string config_path;
  std::string out_dir = "out";
  std::string seed;
  std::string budget_seconds;
  bool deterministic = false;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_path, "key = value configuration file");
  cmd->add_option("--out", flags.out_dir, "output directory");
  cmd->add_option("--seed", flags.seed, "master seed");
  cmd->add_option("--budget-seconds", flags.budget_seconds, "wall-clock budget");
  cmd->add_flag("--deterministic", flags.deterministic,
                "epoch-count budgets and bit-reproducible outputs");
}

ConfigPtr build_config(const CommonFlags& flags, const std::vector<std::string>& overrides) {
  ConfigPtr cfg(decopt_config_new());
  if (!flags.config_path.empty() &&
      decopt_config_load(cfg.get(), flags.config_path.c_str()) != DECOPT_OK)
    throw std::runtime_error(decopt_last_error());
  auto set = [&](const char* k, const std::string& v) {
    if (decopt_config_set(cfg.get(), k, v.c_str()) != DECOPT_OK)
      throw std::runtime_error(decopt_last_error());
  };
  if (!flags.seed.empty()) set("seed", flags.seed);
  if (!flags.budget_seconds.empty()) set("budget_seconds", flags.budget_seconds);
  if (flags.deterministic) set("deterministic", "1");
  for (const auto& kv : overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw std::runtime_error("override must be key=value: " + kv);
    set(kv.substr(0, eq).c_str(), kv.substr(eq + 1));
  }
  return cfg;
}

int fail(const char* what) {
  std::fprintf(stderr, "decopt %s failed: %s\n", what, decopt_last_error());
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"decision policies over optimization layers"};
  app.require_subcommand(1);
  app.set_version_flag("--version", decopt_version());

  CommonFlags flags;
  std::vector<std::string> overrides;
  std::string experiment_name;
  std::string records_dir;

  auto* generate = app.add_subcommand("generate", "write instances and datasets");
  auto* train = app.add_subcommand("train", "train one policy and save a checkpoint");
  auto* evaluate = app.add_subcommand("evaluate", "evaluate a checkpoint or named baseline");
  auto* baseline = app.add_subcommand("baseline", "run the offline baselines");
  auto* experiment = app.add_subcommand("experiment", "run a full evaluation pipeline");
  auto* report = app.add_subcommand("report", "rebuild figure CSVs from records.csv");

  for (CLI::App* cmd : {generate, train, evaluate, baseline, experiment, report}) {
    add_common(cmd, flags);
    cmd->add_option("--set", overrides, "extra config override, key=value")->take_all();
  }
  experiment->add_option("name", experiment_name,
                         "ems-tuning | ems-constraints | smc-dfl | smc-stochastic");
  report->add_option("--records", records_dir, "directory holding records.csv")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    ConfigPtr cfg = build_config(flags, overrides);
    if (generate->parsed())
      return decopt_run_generate(cfg.get(), flags.out_dir.c_str()) == DECOPT_OK
                 ? 0
                 : fail("generate");
    if (train->parsed())
      return decopt_run_train(cfg.get(), flags.out_dir.c_str()) == DECOPT_OK ? 0 : fail("train");
    if (evaluate->parsed())
      return decopt_run_evaluate(cfg.get(), flags.out_dir.c_str()) == DECOPT_OK
                 ? 0
                 : fail("evaluate");
    if (baseline->parsed())
      return decopt_run_baseline(cfg.get(), flags.out_dir.c_str()) == DECOPT_OK
                 ? 0
                 : fail("baseline");
    if (experiment->parsed())
      return decopt_run_experiment(cfg.get(), experiment_name.c_str(),
                                   flags.out_dir.c_str()) == DECOPT_OK
                 ? 0
                 : fail("experiment");
    if (report->parsed())
      return decopt_run_report(cfg.get(), records_dir.c_str(), flags.out_dir.c_str()) ==
                     DECOPT_OK
                 ? 0
                 : fail("report");
  } catch (const std::exception& e) {
    std::fprintf(stderr, "decopt: %s\n", e.what());
    return 1;
  }
  return 0;
}
