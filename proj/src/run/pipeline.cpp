#include "run/pipeline.hpp"

#include <filesystem>

#include "ems/envs.hpp"
#include "ems/tuning.hpp"
#include "learn/checkpoint.hpp"
#include "learn/trainer.hpp"
#include "run/experiments.hpp"
#include "smc/env.hpp"
#include "smc/predict.hpp"

namespace decopt::run {

namespace fs = std::filesystem;

namespace {

bool ems_domain(const ExperimentConfig& cfg) { return cfg.experiment.rfind("ems", 0) == 0; }

std::vector<std::uint64_t> seeds_for(const ExperimentConfig& cfg, const std::string& label,
                                     int count) {
  Rng rng = Rng(cfg.seed).child(label);
  std::vector<std::uint64_t> out(count);
  for (auto& s : out) s = rng.next_u64();
  return out;
}

struct BuiltEnv {
  std::unique_ptr<policy::Environment> env;
  double reward_scale = 1.0;
  int epochs = 100;
  int batch = 50;
};

BuiltEnv build_env(const ExperimentConfig& cfg, const std::string& method) {
  BuiltEnv out;
  if (ems_domain(cfg)) {
    Rng gen = Rng(cfg.seed).child("ems-instance");
    const ems::EmsInstance inst = ems::generate_ems_instance(gen, cfg.ems_stages);
    const ems::EmsScales scales = ems::default_scales(inst);
    if (method == "decomposed_single_step") {
      out.env = ems::make_env(inst, ems::EmsVariant::SingleStep, scales);
      out.epochs = cfg.ems_epochs_single;
    } else if (method == "decomposed_sequential") {
      out.env = ems::make_env(inst, ems::EmsVariant::Sequential, scales);
      out.epochs = cfg.ems_epochs_sequential;
    } else if (method == "rl_end_to_end") {
      out.env = ems::make_env(inst, ems::EmsVariant::EndToEnd, scales);
      out.epochs = cfg.ems_epochs_rl;
    } else if (method == "safety_layer") {
      out.env = ems::make_safety_env(inst, scales);
      out.epochs = cfg.ems_epochs_safety;
    } else {
      throw std::invalid_argument("unknown ems method: " + method);
    }
    out.reward_scale = cfg.ems_reward_scale;
    out.batch = cfg.ems_batch;
  } else {
    const bool sto = cfg.experiment == "smc-stochastic";
    const std::string tag = sto ? "smc-sto" : "smc";
    Rng gen = Rng(cfg.seed).child(tag + "-instance");
    const smc::SmcInstance inst =
        sto ? smc::generate_instance(gen, cfg.smc_sto_elements, cfg.smc_sto_sets,
                                     cfg.smc_sto_density)
            : smc::generate_instance(gen, cfg.smc_elements, cfg.smc_sets, cfg.smc_density);
    smc::SolveSettings st;
    st.gap_tol = cfg.smc_gap_tol;
    out.env = smc::make_smc_env(inst, 10.0, st);
    double penalty_mean = 0.0;
    for (double w : inst.penalties) penalty_mean += w;
    out.reward_scale = 10.0 * penalty_mean / inst.penalties.size();
    out.epochs = cfg.smc_epochs;
    out.batch = cfg.smc_batch;
  }
  return out;
}

}  // namespace

void pipeline_generate(const ExperimentConfig& cfg, const std::string& out_dir) {
  fs::create_directories(out_dir);
  if (ems_domain(cfg)) {
    Rng gen = Rng(cfg.seed).child("ems-instance");
    const ems::EmsInstance inst = ems::generate_ems_instance(gen, cfg.ems_stages);
    inst.save(out_dir + "/ems_instance.txt");
    const auto seeds = seeds_for(cfg, "ems-test", cfg.ems_eval_instances);
    for (std::size_t i = 0; i < seeds.size(); ++i)
      ems::env_realization(inst, seeds[i])
          .save(out_dir + "/ems_realization_" + std::to_string(i) + ".txt");
  } else {
    Rng gen = Rng(cfg.seed).child("smc-instance");
    const smc::SmcInstance inst =
        smc::generate_instance(gen, cfg.smc_elements, cfg.smc_sets, cfg.smc_density);
    inst.save(out_dir + "/smc_instance.txt");
    Rng train_rng = Rng(cfg.seed).child("smc-train");
    smc::Dataset data;
    for (int t = 0; t < cfg.smc_train_pairs; ++t) {
      const double o = train_rng.uniform(1.0, 10.0);
      data.push_back({o, smc::sample_demands(inst, o, train_rng)});
    }
    smc::save_dataset(data, out_dir + "/smc_train_dataset.txt");
    Rng test_rng = Rng(cfg.seed).child("smc-test");
    smc::Dataset test;
    for (int t = 0; t < cfg.smc_test_instances; ++t) {
      const smc::ObservedCase c = smc::env_case(inst, test_rng.next_u64());
      test.push_back(c);
    }
    smc::save_dataset(test, out_dir + "/smc_test_dataset.txt");
  }
  KvDoc manifest = cfg.to_doc();
  manifest.set("tool", "decopt");
  manifest.set("format", "decopt-manifest-1");
  manifest.save(out_dir + "/manifest.txt");
}

void pipeline_train(const ExperimentConfig& cfg, const std::string& out_dir) {
  fs::create_directories(out_dir);
  const std::string method = cfg.method.empty()
                                 ? (ems_domain(cfg) ? "decomposed_sequential" : "decomposed")
                                 : cfg.method;
  BuiltEnv built = build_env(cfg, method);

  learn::TrainConfig tc;
  tc.learning_rate = cfg.learning_rate;
  tc.batch_episodes = built.batch;
  tc.epochs = built.epochs;
  tc.seed = cfg.seed ^ hash_label(method);
  tc.reward_scale = built.reward_scale;
  tc.eval_every = cfg.eval_every;
  tc.deterministic = cfg.deterministic;
  if (!cfg.deterministic) tc.budget_seconds = cfg.budget_seconds;
  const auto valid = seeds_for(cfg, ems_domain(cfg) ? "ems-valid" : "smc-valid", 10);
  const learn::TrainOutcome res = learn::train_policy(*built.env, tc, valid);

  learn::Checkpoint ck;
  ck.policy = res.best_policy;
  ck.critic = res.critic;
  ck.config = tc;
  ck.rng_state = res.rng_state;
  ck.epochs_done = static_cast<int>(res.history.size()) - 1;
  learn::save_checkpoint(ck, out_dir + "/checkpoint_" + method + ".txt");

  CsvWriter curve({"epoch", "elapsed_seconds", "train_mean_cost", "failed_episodes",
                   "eval_mean_cost"});
  for (const auto& h : res.history)
    curve.add_row({std::to_string(h.epoch), CsvWriter::cell(h.elapsed_seconds),
                   CsvWriter::cell(h.train_mean_cost), std::to_string(h.failed_episodes),
                   std::isnan(h.eval_mean_cost) ? "" : CsvWriter::cell(h.eval_mean_cost)});
  curve.save(out_dir + "/training_curve_" + method + ".csv");
}

void pipeline_evaluate(const ExperimentConfig& cfg, const std::string& out_dir) {
  fs::create_directories(out_dir);
  const std::string method = cfg.method.empty()
                                 ? (ems_domain(cfg) ? "decomposed_sequential" : "decomposed")
                                 : cfg.method;
  const auto seeds = seeds_for(cfg, ems_domain(cfg) ? "ems-test" : "smc-test",
                               ems_domain(cfg) ? cfg.ems_eval_instances : cfg.smc_test_instances);

  std::vector<double> costs;
  long failures = 0;
  if (method == "myopic") {
    Rng gen = Rng(cfg.seed).child("ems-instance");
    const ems::EmsInstance inst = ems::generate_ems_instance(gen, cfg.ems_stages);
    for (std::uint64_t s : seeds)
      costs.push_back(ems::simulate_day(inst, ems::env_realization(inst, s),
                                        ems::VirtualCostSchedule(cfg.ems_stages, 0.0))
                          .true_cost);
  } else {
    if (cfg.checkpoint.empty()) throw IoError("evaluate needs checkpoint=<path> or method=myopic");
    const learn::Checkpoint ck = learn::load_checkpoint(cfg.checkpoint);
    BuiltEnv built = build_env(cfg, method);
    learn::evaluate_mean_policy(*built.env, ck.policy, seeds, &costs, &failures);
  }
  CsvWriter csv({"episode", "cost"});
  for (std::size_t i = 0; i < costs.size(); ++i)
    csv.add_row({std::to_string(i), CsvWriter::cell(costs[i])});
  csv.save(out_dir + "/evaluation_" + method + ".csv");
}

void pipeline_baseline(const ExperimentConfig& cfg, const std::string& out_dir) {
  fs::create_directories(out_dir);
  if (ems_domain(cfg)) {
    Rng gen = Rng(cfg.seed).child("ems-instance");
    const ems::EmsInstance inst = ems::generate_ems_instance(gen, cfg.ems_stages);
    ems::TuningOptions topt;
    topt.scenarios = cfg.ems_scenarios;
    topt.node_limit = cfg.tuning_node_limit;
    if (!cfg.deterministic) topt.time_limit_s = cfg.budget_seconds;
    Rng trng = Rng(cfg.seed).child("tuning");
    const ems::TuningResult res = ems::tuning_baseline(inst, trng, topt);
    ems::save_schedule(res.schedule, out_dir + "/tuning_schedule.txt");
    KvDoc info;
    info.set_num("milp_objective", res.milp_objective);
    info.set_num("best_bound", res.best_bound);
    info.set_num("replay_cost", res.replay_cost);
    info.set_num("myopic_cost", res.myopic_cost);
    info.set_num("max_replay_flow_gap", res.max_replay_flow_gap);
    info.set("replay_verified", res.replay_verified ? "1" : "0");
    info.set_int("nodes", res.nodes);
    info.set("node_limit_hit", res.node_limit_hit ? "1" : "0");
    info.save(out_dir + "/tuning_info.txt");
  } else {
    // Stochastic multi-cover baselines: rate fit + one SAA solve per grid point.
    const ExperimentConfig sto_cfg = cfg;
    Rng gen = Rng(cfg.seed).child("smc-sto-instance");
    const smc::SmcInstance inst = smc::generate_instance(
        gen, sto_cfg.smc_sto_elements, sto_cfg.smc_sto_sets, sto_cfg.smc_sto_density);
    Rng train_rng = Rng(cfg.seed).child("smc-sto-train");
    smc::Dataset data;
    for (int t = 0; t < cfg.smc_train_pairs; ++t) {
      const double o = train_rng.uniform(1.0, 10.0);
      data.push_back({o, smc::sample_demands(inst, o, train_rng)});
    }
    const auto rates = smc::fit_rate_model(data);
    KvDoc info;
    info.set_array("rate_estimates", rates);
    info.set_array("rate_truth", inst.rate_slopes);
    smc::SolveSettings st;
    st.gap_tol = cfg.smc_gap_tol;
    Rng pool_rng = Rng(cfg.seed).child("saa-pool").child("rep", 0);
    smc::ScenarioSet pool;
    const int max_s = *std::max_element(cfg.scenario_grid.begin(), cfg.scenario_grid.end());
    for (int t = 0; t < max_s; ++t) {
      const double o = pool_rng.uniform(1.0, 10.0);
      pool.push_back(smc::sample_demands(inst, o, pool_rng));
    }
    for (int s_count : cfg.scenario_grid) {
      smc::ScenarioSet subset(pool.begin(), pool.begin() + s_count);
      const auto sol = smc::solve_saa(inst, subset, st);
      info.set_num("saa_objective_S" + std::to_string(s_count), sol.objective);
    }
    info.save(out_dir + "/smc_baseline_info.txt");
  }
}

void pipeline_experiment(const ExperimentConfig& cfg, const std::string& out_dir) {
  const ExperimentOutput output = run_experiment(cfg);
  emit_report(output, cfg, out_dir);
}

void pipeline_report(const ExperimentConfig& cfg, const std::string& records_dir,
                     const std::string& out_dir) {
  (void)cfg;
  const auto records = records_from_csv(read_text_file(records_dir + "/records.csv"));
  emit_figures_from_records(records, out_dir);
}

}  // namespace decopt::run
