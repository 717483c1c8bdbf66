#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>

#include "smc/env.hpp"
#include "smc/instance.hpp"
#include "smc/models.hpp"
#include "smc/predict.hpp"

using namespace decopt;
using namespace decopt::smc;

namespace {

// Small handcrafted instance: 3 elements, 4 sets.
SmcInstance toy_instance() {
  SmcInstance inst;
  inst.n_elements = 3;
  inst.n_sets = 4;
  inst.covers = {{0, 1}, {0, 2}, {1, 2}, {2}};
  inst.costs = {5.0, 9.0, 4.0, 2.0};
  inst.rate_slopes = {1.0, 2.0, 3.0};
  inst.penalties = {90.0, 50.0, 90.0};
  inst.validate();
  return inst;
}

// Exhaustive search over production plans up to `cap` per set.
double brute_force_cover(const SmcInstance& inst, const DemandVector& d, long cap) {
  std::vector<long> x(inst.n_sets, 0);
  double best = 1e300;
  while (true) {
    std::vector<double> xv(x.begin(), x.end());
    bool ok = true;
    for (int i = 0; i < inst.n_elements && ok; ++i)
      if (inst.coverage(xv, i) < static_cast<double>(d[i])) ok = false;
    if (ok) {
      double cost = 0.0;
      for (int j = 0; j < inst.n_sets; ++j) cost += inst.costs[j] * x[j];
      best = std::min(best, cost);
    }
    int j = 0;
    while (j < inst.n_sets && x[j] == cap) x[j++] = 0;
    if (j == inst.n_sets) break;
    ++x[j];
  }
  return best;
}

}  // namespace

TEST_CASE("generation: full-scale 200x1000 invariants") {
  Rng rng(1001);
  const SmcInstance inst = generate_instance(rng, 200, 1000, 0.02);
  CHECK(inst.n_elements == 200);
  CHECK(inst.n_sets == 1000);
  // 2% density on a 200x1000 matrix is 4000 ones.
  CHECK(inst.ones() >= 3900);
  CHECK(inst.ones() <= 4100);
  for (double w : inst.penalties) CHECK(w >= 10.0);
  // Penalty dominance: one unmet unit always costs at least ten times the
  // cheapest way of covering it.
  const auto rows = inst.element_sets();
  for (int i = 0; i < inst.n_elements; ++i) {
    double cheapest = 1e300;
    for (int j : rows[i]) cheapest = std::min(cheapest, inst.costs[j]);
    CHECK(inst.penalties[i] >= 10.0 * cheapest);
  }
  for (double c : inst.costs) {
    CHECK(c >= 1.0);
    CHECK(c <= 100.0);
  }
  for (double a : inst.rate_slopes) {
    CHECK(a >= 1.0);
    CHECK(a <= 5.0);
  }
}

TEST_CASE("generation: penalty is ten times the costliest covering set") {
  SmcInstance inst;
  inst.n_elements = 1;
  inst.n_sets = 2;
  inst.covers = {{0}, {0}};
  inst.costs = {7.0, 30.0};
  inst.rate_slopes = {1.0};
  inst.penalties = {0.0};
  for (int j = 0; j < 2; ++j)
    for (int i : inst.covers[j]) inst.penalties[i] = std::max(inst.penalties[i], inst.costs[j]);
  for (double& w : inst.penalties) w *= 10.0;
  CHECK(inst.penalties[0] == 300.0);
}

TEST_CASE("generation: infeasible density is reported") {
  Rng rng(5);
  CHECK_THROWS_AS(generate_instance(rng, 100, 100, 0.001), InfeasibleGeneration);
}

TEST_CASE("generation is deterministic under a fixed seed") {
  Rng a(77), b(77);
  const SmcInstance ia = generate_instance(a, 20, 100, 0.08);
  const SmcInstance ib = generate_instance(b, 20, 100, 0.08);
  CHECK(ia.costs == ib.costs);
  CHECK(ia.covers == ib.covers);
  CHECK(ia.rate_slopes == ib.rate_slopes);
}

TEST_CASE("demand sampling follows the linear rate law") {
  const SmcInstance inst = toy_instance();
  Rng rng(31);
  // Element 1 has slope 2; at o = 3 the rate is 6.
  const int n = 100000;
  double acc = 0.0;
  for (int t = 0; t < n; ++t) acc += static_cast<double>(sample_demands(inst, 3.0, rng)[1]);
  acc /= n;
  CHECK(std::abs(acc - 6.0) <= 4.0 * std::sqrt(6.0 / n));

  // Vanishing rate: zero demand with overwhelming probability.
  Rng rng2(32);
  long total = 0;
  for (int t = 0; t < 1000; ++t) total += sample_demands(inst, 1e-12, rng2)[0];
  CHECK(total == 0);
}

TEST_CASE("deterministic model: zero demand needs nothing") {
  const SmcInstance inst = toy_instance();
  const auto sol = solve_deterministic(inst, {0, 0, 0});
  CHECK(sol.objective == doctest::Approx(0.0));
  for (double v : sol.x) CHECK(v == 0.0);
}

TEST_CASE("deterministic model: multiplicity forced by a single element") {
  SmcInstance inst;
  inst.n_elements = 1;
  inst.n_sets = 2;
  inst.covers = {{0}, {0}};
  inst.costs = {5.0, 9.0};
  inst.rate_slopes = {1.0};
  inst.penalties = {90.0};
  const auto sol = solve_deterministic(inst, {3});
  CHECK(sol.x[0] == 3.0);
  CHECK(sol.x[1] == 0.0);
  CHECK(sol.objective == doctest::Approx(15.0));
}

TEST_CASE("deterministic model matches brute force and rechecks coverage") {
  Rng rng(123);
  for (int t = 0; t < 10; ++t) {
    const SmcInstance inst = toy_instance();
    DemandVector d(3);
    for (auto& v : d) v = rng.uniform_int(0, 3);
    const auto sol = solve_deterministic(inst, d);
    CHECK(sol.objective == doctest::Approx(brute_force_cover(inst, d, 4)).epsilon(1e-9));
    for (int i = 0; i < 3; ++i)
      CHECK(inst.coverage(sol.x, i) >= static_cast<double>(d[i]) - 1e-9);
  }
}

TEST_CASE("saa: dominated penalties reproduce the deterministic solution") {
  const SmcInstance inst = toy_instance();
  const DemandVector d = {2, 1, 3};
  const auto det = solve_deterministic(inst, d);
  const auto saa = solve_saa(inst, {d});
  CHECK(saa.objective == doctest::Approx(det.objective).epsilon(1e-9));
  // Slack never pays off when covering is ten times cheaper.
  CHECK(recourse_cost(inst, saa.x, d) == doctest::Approx(saa.objective).epsilon(1e-9));
}

TEST_CASE("saa: identical scenarios average to the single-scenario objective") {
  const SmcInstance inst = toy_instance();
  const DemandVector d = {1, 2, 2};
  const auto one = solve_saa(inst, {d});
  const auto three = solve_saa(inst, {d, d, d});
  CHECK(one.objective == doctest::Approx(three.objective).epsilon(1e-9));
}

TEST_CASE("saa: slack tracks the shortfall when penalties are tiny") {
  SmcInstance inst = toy_instance();
  inst.penalties = {0.01, 0.01, 0.01};  // violating is always cheaper
  const DemandVector d = {2, 1, 3};
  const opt::MipModel mip = build_saa_mip(inst, {d});
  const auto res = opt::solve_mip(mip, 0.0);
  REQUIRE(res.status == opt::SolveStatus::Optimal);
  for (int j = 0; j < inst.n_sets; ++j) CHECK(res.primal[j] == doctest::Approx(0.0));
  for (int i = 0; i < 3; ++i) {
    const double z = res.primal[inst.n_sets + i];
    const double s = res.primal[inst.n_sets + 3 + i];
    if (d[i] > 0) {
      CHECK(z == doctest::Approx(1.0));
      CHECK(s == doctest::Approx(static_cast<double>(d[i])));
    }
  }
}

TEST_CASE("recourse cost arithmetic") {
  SmcInstance inst;
  inst.n_elements = 1;
  inst.n_sets = 1;
  inst.covers = {{0}};
  inst.costs = {5.0};
  inst.penalties = {50.0};
  inst.rate_slopes = {1.0};
  CHECK(recourse_cost(inst, {0.0}, {2}) == doctest::Approx(100.0));
  CHECK(recourse_cost(inst, {2.0}, {2}) == doctest::Approx(10.0));  // full coverage
}

TEST_CASE("posterior optimum dominates every plan") {
  const SmcInstance inst = toy_instance();
  Rng rng(9);
  const DemandVector d = {2, 3, 1};
  const double post = posterior_optimal(inst, d);
  CHECK(posterior_optimal(inst, {0, 0, 0}) == doctest::Approx(0.0));
  for (int t = 0; t < 50; ++t) {
    std::vector<double> x(inst.n_sets);
    for (auto& v : x) v = static_cast<double>(rng.uniform_int(0, 4));
    CHECK(recourse_cost(inst, x, d) >= post - 1e-9);
  }
}

TEST_CASE("rate fitting: exact linear data recovers the slope") {
  Dataset data;
  for (double o : {1.0, 2.0, 5.5, 7.0})
    data.push_back({o, {static_cast<long>(2 * o)}});
  const auto est = fit_rate_model(data);
  CHECK(est[0] == doctest::Approx(2.0).epsilon(1e-12));

  // Single pair: d / o.
  const auto single = fit_rate_model({{4.0, {6}}});
  CHECK(single[0] == doctest::Approx(1.5));

  CHECK_THROWS_AS(fit_rate_model({{0.0, {1}}, {0.0, {2}}}), DegenerateData);
}

TEST_CASE("rate fitting: 500 pairs give low errors that shrink with data") {
  Rng rng(2024);
  const SmcInstance inst = generate_instance(rng, 10, 40, 0.2);
  auto make_data = [&](int count, Rng& r) {
    Dataset data;
    for (int t = 0; t < count; ++t) {
      const double o = r.uniform(1.0, 10.0);
      data.push_back({o, sample_demands(inst, o, r)});
    }
    return data;
  };
  Rng ra(1), rb(2);
  const auto small_fit = rate_errors(fit_rate_model(make_data(30, ra)), inst.rate_slopes);
  const auto big_fit = rate_errors(fit_rate_model(make_data(500, rb)), inst.rate_slopes);
  double small_mean = 0.0, big_mean = 0.0;
  for (double e : small_fit) small_mean += e;
  for (double e : big_fit) big_mean += e;
  small_mean /= small_fit.size();
  big_mean /= big_fit.size();
  CHECK(big_mean < 0.15);
  for (double e : big_fit) CHECK(e < 0.15);  // low per element, not just on average
  CHECK(big_mean < small_mean + 0.02);  // decreasing trend, with slack for noise
}

TEST_CASE("predict-then-optimize: point mode equals the deterministic solve") {
  const SmcInstance inst = toy_instance();
  const std::vector<double> rates = {1.0, 2.0, 3.0};
  Rng rng(4);
  const auto pto = predict_then_optimize(inst, 2.0, rates, PredictMode::Point, 0, rng);
  DemandVector expected = {2, 4, 6};
  const auto det = solve_deterministic(inst, expected);
  CHECK(pto.objective == doctest::Approx(det.objective));

  const auto saa = predict_then_optimize(inst, 2.0, rates, PredictMode::Saa, 3, rng);
  CHECK(saa.objective >= 0.0);
}

TEST_CASE("environment: exact prediction earns the posterior optimum") {
  Rng rng(11);
  const SmcInstance inst = generate_instance(rng, 8, 30, 0.2);
  auto env = make_smc_env(inst, 10.0);
  const auto obs = env->reset(123);
  // Recover the same case the environment drew.
  Rng r = Rng(123).child("smc-case");
  const double o = r.uniform(1.0, 10.0);
  const DemandVector realized = sample_demands(inst, o, r);
  CHECK(obs.values[0] == doctest::Approx(o));

  const double scale = static_cast<double>(demand_decode_scale());
  std::vector<double> action(inst.n_elements);
  for (int i = 0; i < inst.n_elements; ++i) action[i] = static_cast<double>(realized[i]) / scale;
  const auto sr = env->step(action);
  CHECK(sr.cost == doctest::Approx(posterior_optimal(inst, realized)).epsilon(1e-9));
  CHECK(sr.decision.feasible);
  CHECK(sr.done);
}

TEST_CASE("environment: zero prediction pays the full penalty bill") {
  Rng rng(12);
  const SmcInstance inst = generate_instance(rng, 6, 24, 0.25);
  auto env = make_smc_env(inst, 10.0);
  env->reset(9);
  Rng r = Rng(9).child("smc-case");
  const double o = r.uniform(1.0, 10.0);
  const DemandVector realized = sample_demands(inst, o, r);
  const auto sr = env->step(std::vector<double>(inst.n_elements, 0.0));
  double bill = 0.0;
  for (int i = 0; i < inst.n_elements; ++i)
    bill += inst.penalties[i] * static_cast<double>(realized[i]);
  CHECK(sr.cost == doctest::Approx(bill).epsilon(1e-9));
}

TEST_CASE("environment: over-prediction can never beat hindsight") {
  Rng rng(13);
  const SmcInstance inst = generate_instance(rng, 6, 24, 0.25);
  auto env = make_smc_env(inst, 10.0);
  env->reset(5);
  Rng r = Rng(5).child("smc-case");
  const double o = r.uniform(1.0, 10.0);
  const DemandVector realized = sample_demands(inst, o, r);
  const double scale = static_cast<double>(demand_decode_scale());
  std::vector<double> action(inst.n_elements);
  for (int i = 0; i < inst.n_elements; ++i)
    action[i] = static_cast<double>(realized[i] + 1) / scale;
  const auto sr = env->step(action);
  CHECK(sr.cost >= posterior_optimal(inst, realized) - 1e-9);
}

TEST_CASE("decomposed policy with the covering model as optimization layer") {
  // Exact demand prediction through act() earns the hindsight optimum.
  Rng rng(14);
  const SmcInstance inst = generate_instance(rng, 8, 30, 0.2);
  const ObservedCase c = env_case(inst, 77);

  const double scale = static_cast<double>(demand_decode_scale());
  decopt::policy::DecomposedPolicy pol;
  pol.model = [&](const decopt::policy::Observation&) {
    decopt::policy::VirtualParams y(inst.n_elements);
    for (int i = 0; i < inst.n_elements; ++i)
      y[i] = static_cast<double>(c.demands[i]) / scale;
    return y;
  };
  pol.opt_layer = [&](const decopt::policy::Observation&,
                      const decopt::policy::VirtualParams& y) {
    DemandVector predicted(inst.n_elements);
    for (int i = 0; i < inst.n_elements; ++i)
      predicted[i] = std::max(0L, std::lround(y[i] * scale));
    const CoverSolution sol = solve_deterministic(inst, predicted);
    decopt::policy::Decision z;
    z.values = sol.x;
    z.feasible = decision_residual(inst, sol.x, predicted) <= 1e-6;
    return z;
  };
  const auto [y, z] = decopt::policy::act(pol, decopt::policy::Observation({c.o}, {10.0}));
  CHECK(recourse_cost(inst, z.values, c.demands) ==
        doctest::Approx(posterior_optimal(inst, c.demands)).epsilon(1e-9));
}

TEST_CASE("instance and dataset files round trip") {
  Rng rng(55);
  const SmcInstance inst = generate_instance(rng, 12, 40, 0.15);
  const std::string path = "/tmp/decopt_smc_instance.txt";
  inst.save(path);
  const SmcInstance back = SmcInstance::load(path);
  CHECK(back.covers == inst.covers);
  CHECK(back.costs == inst.costs);
  CHECK(back.penalties == inst.penalties);
  std::remove(path.c_str());

  Dataset data;
  for (int t = 0; t < 5; ++t) {
    const double o = rng.uniform(1.0, 10.0);
    data.push_back({o, sample_demands(inst, o, rng)});
  }
  const std::string dpath = "/tmp/decopt_smc_dataset.txt";
  save_dataset(data, dpath);
  const Dataset dback = load_dataset(dpath);
  REQUIRE(dback.size() == data.size());
  for (std::size_t t = 0; t < data.size(); ++t) {
    CHECK(dback[t].o == data[t].o);
    CHECK(dback[t].demands == data[t].demands);
  }
  std::remove(dpath.c_str());
}
