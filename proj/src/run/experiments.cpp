#include "run/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <functional>

#include "ems/envs.hpp"
#include "ems/tuning.hpp"
#include "learn/trainer.hpp"
#include "smc/env.hpp"
#include "smc/predict.hpp"

namespace decopt::run {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<std::uint64_t> draw_seeds(Rng rng, int count) {
  std::vector<std::uint64_t> out(count);
  for (auto& s : out) s = rng.next_u64();
  return out;
}

std::uint64_t method_seed(const ExperimentConfig& cfg, const std::string& method) {
  return cfg.seed ^ hash_label(method);
}

bool wants(const ExperimentConfig& cfg, const std::string& method) {
  if (cfg.methods.empty()) return true;
  for (const auto& m : cfg.methods)
    if (m == method) return true;
  return false;
}

GapStats gaps_against(const std::vector<double>& costs, const std::vector<double>& oracles) {
  std::vector<double> gaps(costs.size());
  for (std::size_t i = 0; i < costs.size(); ++i) gaps[i] = optimality_gap(costs[i], oracles[i]);
  return mean_std(gaps);
}

MetricsRecord summary_row(const std::string& experiment, const std::string& method,
                          const std::vector<double>& costs, const std::vector<double>& oracles) {
  MetricsRecord r;
  r.experiment = experiment;
  r.method = method;
  const GapStats c = mean_std(costs);
  r.cost_mean = c.mean;
  r.cost_std = c.stddev;
  const GapStats g = gaps_against(costs, oracles);
  r.gap_mean = g.mean;
  r.gap_std = g.stddev;
  return r;
}

// ---------------------------------------------------------------- EMS ----

struct EmsBench {
  ems::EmsInstance instance;
  ems::EmsScales scales;
  std::vector<std::uint64_t> test_seeds, valid_seeds;
  std::vector<double> test_oracles, valid_oracles;
  double valid_oracle_mean = 0.0;

  std::vector<double> schedule_costs(const ems::VirtualCostSchedule& schedule) const {
    std::vector<double> costs;
    for (std::uint64_t s : test_seeds)
      costs.push_back(
          ems::simulate_day(instance, ems::env_realization(instance, s), schedule).true_cost);
    return costs;
  }
};

EmsBench make_ems_bench(const ExperimentConfig& cfg) {
  EmsBench bench;
  Rng master(cfg.seed);
  Rng gen = master.child("ems-instance");
  bench.instance = ems::generate_ems_instance(gen, cfg.ems_stages);
  bench.scales = ems::default_scales(bench.instance);
  bench.test_seeds = draw_seeds(master.child("ems-test"), cfg.ems_eval_instances);
  bench.valid_seeds = draw_seeds(master.child("ems-valid"), cfg.ems_eval_instances);
  for (std::uint64_t s : bench.test_seeds)
    bench.test_oracles.push_back(
        ems::clairvoyant_cost(bench.instance, ems::env_realization(bench.instance, s)));
  for (std::uint64_t s : bench.valid_seeds)
    bench.valid_oracles.push_back(
        ems::clairvoyant_cost(bench.instance, ems::env_realization(bench.instance, s)));
  bench.valid_oracle_mean = mean_std(bench.valid_oracles).mean;
  return bench;
}

learn::TrainConfig make_train_config(const ExperimentConfig& cfg, const std::string& method,
                                     int epochs, int batch, double reward_scale,
                                     double budget_seconds) {
  learn::TrainConfig tc;
  tc.learning_rate = cfg.learning_rate;
  tc.batch_episodes = batch;
  tc.epochs = epochs;
  tc.discount = 1.0;
  tc.seed = method_seed(cfg, method);
  tc.reward_scale = reward_scale;
  tc.eval_every = cfg.eval_every;
  tc.budget_seconds = budget_seconds;
  tc.deterministic = cfg.deterministic;
  return tc;
}

// Trains one method, appending curve rows (validation gaps, training
// failure counts) and a final test-set row from the best checkpoint.
void train_and_record(const ExperimentConfig& cfg, const std::string& experiment,
                      const std::string& method, policy::Environment& env,
                      const EmsBench& bench, int epochs, double budget_seconds,
                      ExperimentOutput& out) {
  const auto t0 = Clock::now();
  const learn::TrainConfig tc = make_train_config(cfg, method, epochs, cfg.ems_batch,
                                                  cfg.ems_reward_scale, budget_seconds);
  const learn::TrainOutcome res = learn::train_policy(env, tc, bench.valid_seeds);
  for (const auto& h : res.history) {
    MetricsRecord r;
    r.experiment = experiment;
    r.method = method;
    r.epoch = h.epoch;
    r.failed_episodes = h.epoch == 0 ? -1 : h.failed_episodes;
    if (!std::isnan(h.eval_mean_cost)) {
      r.cost_mean = h.eval_mean_cost;
      r.gap_mean = optimality_gap(h.eval_mean_cost, bench.valid_oracle_mean);
    }
    out.records.push_back(std::move(r));
  }
  std::vector<double> test_costs;
  long test_failures = 0;
  learn::evaluate_mean_policy(env, res.best_policy, bench.test_seeds, &test_costs,
                              &test_failures);
  MetricsRecord fin = summary_row(experiment, method, test_costs, bench.test_oracles);
  fin.failed_episodes = test_failures;
  out.records.push_back(std::move(fin));
  out.timings.push_back({experiment, method, "train_total", seconds_since(t0)});
}

}  // namespace

ExperimentOutput run_ems_tuning(const ExperimentConfig& cfg) {
  const std::string exp = "ems-tuning";
  ExperimentOutput out;
  const EmsBench bench = make_ems_bench(cfg);

  // Myopic reference (all-zero schedule).
  out.records.push_back(summary_row(
      exp, "myopic", bench.schedule_costs(ems::VirtualCostSchedule(cfg.ems_stages, 0.0)),
      bench.test_oracles));

  double budget = cfg.budget_seconds;
  if (wants(cfg, "tuning")) {
    const auto t0 = Clock::now();
    ems::TuningOptions topt;
    topt.scenarios = cfg.ems_scenarios;
    topt.node_limit = cfg.tuning_node_limit;
    if (!cfg.deterministic) topt.time_limit_s = cfg.budget_seconds;
    Rng trng = Rng(cfg.seed).child("tuning");
    const ems::TuningResult tuned = ems::tuning_baseline(bench.instance, trng, topt);
    const double tuning_wall = seconds_since(t0);
    budget = tuning_wall;  // the other methods train under this budget
    MetricsRecord r =
        summary_row(exp, "tuning", bench.schedule_costs(tuned.schedule), bench.test_oracles);
    r.epoch = 0;
    out.records.push_back(std::move(r));
    out.timings.push_back({exp, "tuning", "total", tuning_wall});
  }

  const double train_budget = cfg.deterministic ? opt::kInf : budget;
  if (wants(cfg, "decomposed_single_step")) {
    auto env = ems::make_env(bench.instance, ems::EmsVariant::SingleStep, bench.scales);
    train_and_record(cfg, exp, "decomposed_single_step", *env, bench, cfg.ems_epochs_single,
                     train_budget, out);
  }
  if (wants(cfg, "decomposed_sequential")) {
    auto env = ems::make_env(bench.instance, ems::EmsVariant::Sequential, bench.scales);
    train_and_record(cfg, exp, "decomposed_sequential", *env, bench, cfg.ems_epochs_sequential,
                     train_budget, out);
  }
  return out;
}

ExperimentOutput run_ems_constraints(const ExperimentConfig& cfg) {
  const std::string exp = "ems-constraints";
  ExperimentOutput out;
  const EmsBench bench = make_ems_bench(cfg);
  const double budget = cfg.deterministic ? opt::kInf : cfg.budget_seconds;

  out.records.push_back(summary_row(
      exp, "myopic", bench.schedule_costs(ems::VirtualCostSchedule(cfg.ems_stages, 0.0)),
      bench.test_oracles));

  if (wants(cfg, "rl_end_to_end")) {
    auto env = ems::make_env(bench.instance, ems::EmsVariant::EndToEnd, bench.scales);
    train_and_record(cfg, exp, "rl_end_to_end", *env, bench, cfg.ems_epochs_rl, budget, out);
  }
  if (wants(cfg, "safety_layer")) {
    auto env = ems::make_safety_env(bench.instance, bench.scales);
    train_and_record(cfg, exp, "safety_layer", *env, bench, cfg.ems_epochs_safety, budget, out);
  }
  if (wants(cfg, "decomposed_sequential")) {
    auto env = ems::make_env(bench.instance, ems::EmsVariant::Sequential, bench.scales);
    train_and_record(cfg, exp, "decomposed_sequential", *env, bench, cfg.ems_epochs_sequential,
                     budget, out);
  }
  return out;
}

// ---------------------------------------------------------------- SMC ----

namespace {

struct SmcBench {
  smc::SmcInstance instance;
  smc::Dataset train_data;
  std::vector<std::uint64_t> test_seeds, valid_seeds;
  std::vector<smc::ObservedCase> test_cases;
  std::vector<double> test_oracles;
  smc::SolveSettings settings;
  double reward_scale = 1.0;
};

SmcBench make_smc_bench(const ExperimentConfig& cfg, const std::string& tag, int elements,
                        int sets, double density) {
  SmcBench bench;
  Rng master(cfg.seed);
  Rng gen = master.child(tag + "-instance");
  bench.instance = smc::generate_instance(gen, elements, sets, density);
  bench.settings.gap_tol = cfg.smc_gap_tol;

  Rng train_rng = master.child(tag + "-train");
  for (int t = 0; t < cfg.smc_train_pairs; ++t) {
    const double o = train_rng.uniform(1.0, 10.0);
    bench.train_data.push_back({o, smc::sample_demands(bench.instance, o, train_rng)});
  }

  // Test cases come from environment seeds so every method scores on the
  // exact episodes the policy sees; degenerate all-zero cases are skipped
  // (the hindsight optimum would be zero and gaps undefined).
  Rng test_rng = master.child(tag + "-test");
  while (static_cast<int>(bench.test_seeds.size()) < cfg.smc_test_instances) {
    const std::uint64_t seed = test_rng.next_u64();
    const smc::ObservedCase c = smc::env_case(bench.instance, seed);
    const double post = smc::posterior_optimal(bench.instance, c.demands, bench.settings);
    if (post <= 0.0) continue;
    bench.test_seeds.push_back(seed);
    bench.test_cases.push_back(c);
    bench.test_oracles.push_back(post);
  }
  bench.valid_seeds = draw_seeds(master.child(tag + "-valid"), cfg.smc_test_instances);

  double penalty_mean = 0.0;
  for (double w : bench.instance.penalties) penalty_mean += w;
  penalty_mean /= bench.instance.penalties.size();
  bench.reward_scale = 10.0 * penalty_mean;
  return bench;
}

learn::TrainOutcome train_smc_policy(const ExperimentConfig& cfg, const SmcBench& bench,
                                     const std::string& method, policy::Environment& env,
                                     double budget_seconds) {
  learn::TrainConfig tc;
  tc.learning_rate = cfg.learning_rate;
  tc.batch_episodes = cfg.smc_batch;
  tc.epochs = cfg.smc_epochs;
  tc.discount = 1.0;
  tc.seed = method_seed(cfg, method);
  tc.reward_scale = bench.reward_scale;
  tc.eval_every = cfg.eval_every;
  tc.budget_seconds = budget_seconds;
  tc.deterministic = cfg.deterministic;
  return learn::train_policy(env, tc, bench.valid_seeds);
}

}  // namespace

ExperimentOutput run_smc_dfl(const ExperimentConfig& cfg) {
  const std::string exp = "smc-dfl";
  ExperimentOutput out;
  const SmcBench bench =
      make_smc_bench(cfg, "smc", cfg.smc_elements, cfg.smc_sets, cfg.smc_density);

  // Hindsight optimum reference.
  {
    MetricsRecord r = summary_row(exp, "posterior", bench.test_oracles, bench.test_oracles);
    out.records.push_back(std::move(r));
  }

  // Predict-then-optimize: rate regression, then the deterministic model.
  const std::vector<double> rates = smc::fit_rate_model(bench.train_data);
  const std::vector<double> errors = smc::rate_errors(rates, bench.instance.rate_slopes);
  double mape_mean = 0.0;
  for (std::size_t i = 0; i < errors.size(); ++i) {
    MetricsRecord r;
    r.experiment = exp;
    r.method = "rate_mape";
    r.epoch = static_cast<int>(i);
    r.mape_mean = errors[i];
    out.records.push_back(std::move(r));
    mape_mean += errors[i];
  }
  mape_mean /= errors.size();

  if (wants(cfg, "pto_point")) {
    const auto t0 = Clock::now();
    std::vector<double> costs;
    Rng unused(0);
    for (const auto& c : bench.test_cases) {
      const auto sol = smc::predict_then_optimize(bench.instance, c.o, rates,
                                                  smc::PredictMode::Point, 0, unused,
                                                  bench.settings);
      costs.push_back(smc::recourse_cost(bench.instance, sol.x, c.demands));
    }
    MetricsRecord r = summary_row(exp, "pto_point", costs, bench.test_oracles);
    r.mape_mean = mape_mean;
    out.records.push_back(std::move(r));
    out.timings.push_back({exp, "pto_point", "solve_total", seconds_since(t0)});
  }

  if (wants(cfg, "decomposed")) {
    auto env = smc::make_smc_env(bench.instance, 10.0, bench.settings);
    const double budget = cfg.deterministic ? opt::kInf : cfg.budget_seconds;
    const auto t0 = Clock::now();
    const learn::TrainOutcome res = train_smc_policy(cfg, bench, "decomposed", *env, budget);
    out.timings.push_back({exp, "decomposed", "train_total", seconds_since(t0)});
    for (const auto& h : res.history) {
      if (std::isnan(h.eval_mean_cost)) continue;
      MetricsRecord r;
      r.experiment = exp;
      r.method = "decomposed";
      r.epoch = h.epoch;
      r.cost_mean = h.eval_mean_cost;
      out.records.push_back(std::move(r));
    }
    std::vector<double> test_costs;
    learn::evaluate_mean_policy(*env, res.best_policy, bench.test_seeds, &test_costs);
    out.records.push_back(summary_row(exp, "decomposed", test_costs, bench.test_oracles));

    const learn::GaussianPolicy untrained = learn::initial_policy(
        *env, make_train_config(cfg, "decomposed", 0, cfg.smc_batch, bench.reward_scale, 0));
    std::vector<double> untrained_costs;
    learn::evaluate_mean_policy(*env, untrained, bench.test_seeds, &untrained_costs);
    out.records.push_back(
        summary_row(exp, "decomposed_untrained", untrained_costs, bench.test_oracles));
  }
  return out;
}

ExperimentOutput run_smc_stochastic(const ExperimentConfig& cfg) {
  const std::string exp = "smc-stochastic";
  ExperimentOutput out;
  const SmcBench bench = make_smc_bench(cfg, "smc-sto", cfg.smc_sto_elements, cfg.smc_sto_sets,
                                        cfg.smc_sto_density);
  const int max_s = *std::max_element(cfg.scenario_grid.begin(), cfg.scenario_grid.end());

  out.records.push_back(summary_row(exp, "posterior", bench.test_oracles, bench.test_oracles));

  // Plain sample-average baseline: one solution per scenario count fitted
  // on training-distribution draws only, scored on every test case.
  if (wants(cfg, "saa")) {
    const auto t0 = Clock::now();
    Rng pool_rng = Rng(cfg.seed).child("saa-pool");
    for (int s_count : cfg.scenario_grid) {
      std::vector<double> gaps_costs;
      std::vector<double> oracle_rep;
      for (int rep = 0; rep < cfg.saa_replicates; ++rep) {
        // Nested pools: scenario sets grow with the grid inside a replicate.
        Rng rep_rng = pool_rng.child("rep", static_cast<std::uint64_t>(rep));
        smc::ScenarioSet pool;
        for (int t = 0; t < max_s; ++t) {
          const double o = rep_rng.uniform(1.0, 10.0);
          pool.push_back(smc::sample_demands(bench.instance, o, rep_rng));
        }
        pool.resize(s_count);
        const auto sol = smc::solve_saa(bench.instance, pool, bench.settings);
        for (std::size_t i = 0; i < bench.test_cases.size(); ++i) {
          gaps_costs.push_back(
              smc::recourse_cost(bench.instance, sol.x, bench.test_cases[i].demands));
          oracle_rep.push_back(bench.test_oracles[i]);
        }
      }
      MetricsRecord r = summary_row(exp, "saa", gaps_costs, oracle_rep);
      r.scenarios = s_count;
      out.records.push_back(std::move(r));
    }
    out.timings.push_back({exp, "saa", "solve_total", seconds_since(t0)});
  }

  const std::vector<double> rates = smc::fit_rate_model(bench.train_data);
  double pto_seconds_at_max = 0.0;
  if (wants(cfg, "pto_saa")) {
    for (int s_count : cfg.scenario_grid) {
      const auto t0 = Clock::now();
      std::vector<double> costs;
      for (std::size_t i = 0; i < bench.test_cases.size(); ++i) {
        Rng rng = Rng(cfg.seed).child("pto-saa", i * 1000 + s_count);
        const auto sol =
            smc::predict_then_optimize(bench.instance, bench.test_cases[i].o, rates,
                                       smc::PredictMode::Saa, s_count, rng, bench.settings);
        costs.push_back(smc::recourse_cost(bench.instance, sol.x, bench.test_cases[i].demands));
      }
      const double wall = seconds_since(t0);
      MetricsRecord r = summary_row(exp, "pto_saa", costs, bench.test_oracles);
      r.scenarios = s_count;
      out.records.push_back(std::move(r));
      out.timings.push_back(
          {exp, "pto_saa", "solve_total_S" + std::to_string(s_count), wall});
      if (s_count == max_s) pto_seconds_at_max = wall / bench.test_cases.size();
    }
  }

  if (wants(cfg, "decomposed")) {
    auto env = smc::make_smc_env(bench.instance, 10.0, bench.settings);
    const double budget = cfg.deterministic ? opt::kInf : cfg.budget_seconds;
    const learn::TrainOutcome res = train_smc_policy(cfg, bench, "decomposed_sto", *env, budget);
    std::vector<double> costs;
    const auto t0 = Clock::now();
    learn::evaluate_mean_policy(*env, res.best_policy, bench.test_seeds, &costs);
    const double infer_seconds = seconds_since(t0) / bench.test_cases.size();
    // Scenario-independent by construction: the same value on every grid point.
    for (int s_count : cfg.scenario_grid) {
      MetricsRecord r = summary_row(exp, "decomposed", costs, bench.test_oracles);
      r.scenarios = s_count;
      out.records.push_back(std::move(r));
    }
    out.timings.push_back({exp, "decomposed", "inference_per_case", infer_seconds});
    if (pto_seconds_at_max > 0.0 && infer_seconds > 0.0)
      out.timings.push_back(
          {exp, "pto_saa_vs_decomposed", "runtime_ratio", pto_seconds_at_max / infer_seconds});
  }
  return out;
}

ExperimentOutput run_experiment(const ExperimentConfig& cfg) {
  if (cfg.experiment == "ems-tuning") return run_ems_tuning(cfg);
  if (cfg.experiment == "ems-constraints") return run_ems_constraints(cfg);
  if (cfg.experiment == "smc-dfl") return run_smc_dfl(cfg);
  if (cfg.experiment == "smc-stochastic") return run_smc_stochastic(cfg);
  throw std::invalid_argument("unknown experiment: " + cfg.experiment);
}

// ------------------------------------------------------------- report ----

namespace {

std::string figure_csv(const std::vector<MetricsRecord>& records, const std::string& experiment,
                       bool with_scenarios) {
  std::string out = with_scenarios ? "method,scenarios,cost_mean,cost_std,gap_mean,gap_std\n"
                                   : "method,epoch,cost_mean,gap_mean,failed_episodes\n";
  for (const auto& r : records) {
    if (r.experiment != experiment) continue;
    if (with_scenarios) {
      if (r.scenarios < 0) continue;
      out += r.method + "," + std::to_string(r.scenarios) + "," +
             (std::isnan(r.cost_mean) ? "" : format_double(r.cost_mean)) + "," +
             (std::isnan(r.cost_std) ? "" : format_double(r.cost_std)) + "," +
             (std::isnan(r.gap_mean) ? "" : format_double(r.gap_mean)) + "," +
             (std::isnan(r.gap_std) ? "" : format_double(r.gap_std)) + "\n";
    } else {
      out += r.method + "," + (r.epoch < 0 ? "" : std::to_string(r.epoch)) + "," +
             (std::isnan(r.cost_mean) ? "" : format_double(r.cost_mean)) + "," +
             (std::isnan(r.gap_mean) ? "" : format_double(r.gap_mean)) + "," +
             (r.failed_episodes < 0 ? "" : std::to_string(r.failed_episodes)) + "\n";
    }
  }
  return out;
}

bool has_experiment(const std::vector<MetricsRecord>& records, const std::string& name) {
  for (const auto& r : records)
    if (r.experiment == name) return true;
  return false;
}

}  // namespace

void emit_figures_from_records(const std::vector<MetricsRecord>& records,
                               const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  if (has_experiment(records, "ems-tuning"))
    write_text_file(out_dir + "/fig1_gap_curves.csv", figure_csv(records, "ems-tuning", false));
  if (has_experiment(records, "ems-constraints"))
    write_text_file(out_dir + "/fig2_constraint_curves.csv",
                    figure_csv(records, "ems-constraints", false));
  if (has_experiment(records, "smc-dfl")) {
    std::string mape = "element,mape\n";
    std::string costs = "method,cost_mean,cost_std,gap_mean\n";
    for (const auto& r : records) {
      if (r.experiment != "smc-dfl") continue;
      if (r.method == "rate_mape") {
        mape += std::to_string(r.epoch) + "," + format_double(r.mape_mean) + "\n";
      } else if (r.epoch < 0 && !std::isnan(r.cost_mean)) {
        costs += r.method + "," + format_double(r.cost_mean) + "," +
                 (std::isnan(r.cost_std) ? "" : format_double(r.cost_std)) + "," +
                 (std::isnan(r.gap_mean) ? "" : format_double(r.gap_mean)) + "\n";
      }
    }
    write_text_file(out_dir + "/fig3_rate_mape.csv", mape);
    write_text_file(out_dir + "/fig4_costs.csv", costs);
  }
  if (has_experiment(records, "smc-stochastic"))
    write_text_file(out_dir + "/fig5_gap_vs_scenarios.csv",
                    figure_csv(records, "smc-stochastic", true));
}

void emit_report(const ExperimentOutput& output, const ExperimentConfig& config,
                 const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  write_text_file(out_dir + "/records.csv", records_to_csv(output.records));
  write_text_file(out_dir + "/timings.csv", timings_to_csv(output.timings));
  emit_figures_from_records(output.records, out_dir);

  KvDoc manifest = config.to_doc();
  manifest.set("tool", "decopt");
  manifest.set("format", "decopt-manifest-1");
  manifest.save(out_dir + "/manifest.txt");
}

}  // namespace decopt::run
