#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>

#include "common/rng.hpp"
#include "opt/kkt.hpp"
#include "opt/mip.hpp"
#include "opt/simplex.hpp"
#include "support/oracles.hpp"

using namespace decopt;
using namespace decopt::opt;
using namespace testsupport;

TEST_CASE("single active bound") {
  LinearProgram lp(1);
  lp.objective = {1.0};
  lp.lower = {0.0};
  lp.upper = {10.0};
  lp.add_row({1.0}, Sense::GreaterEqual, 3.0);
  const auto res = solve_lp(lp);
  REQUIRE(res.status == SolveStatus::Optimal);
  CHECK(res.primal[0] == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(res.objective == doctest::Approx(3.0).epsilon(1e-9));
}

TEST_CASE("vertex tie broken toward the lowest index") {
  LinearProgram lp(2);
  lp.objective = {-1.0, -1.0};
  lp.lower = {0.0, 0.0};
  lp.upper = {kInf, kInf};
  lp.add_row({1.0, 1.0}, Sense::LessEqual, 1.0);
  const auto res = solve_lp(lp);
  REQUIRE(res.status == SolveStatus::Optimal);
  CHECK(res.objective == doctest::Approx(-1.0));
  CHECK(res.primal[0] == doctest::Approx(1.0));
  CHECK(res.primal[1] == doctest::Approx(0.0));
}

TEST_CASE("infeasible and unbounded detection") {
  LinearProgram bad(1);
  bad.objective = {0.0};
  bad.lower = {0.0};
  bad.upper = {1.0};
  bad.add_row({1.0}, Sense::GreaterEqual, 2.0);
  CHECK(solve_lp(bad).status == SolveStatus::Infeasible);

  LinearProgram unb(1);
  unb.objective = {-1.0};
  unb.lower = {0.0};
  unb.upper = {kInf};
  CHECK(solve_lp(unb).status == SolveStatus::Unbounded);

  LinearProgram free_unb(1);
  free_unb.objective = {1.0};
  free_unb.lower = {-kInf};
  free_unb.upper = {kInf};
  CHECK(solve_lp(free_unb).status == SolveStatus::Unbounded);
}

TEST_CASE("malformed models are rejected before solving") {
  LinearProgram lp(2);
  lp.objective = {1.0};  // wrong length
  CHECK_THROWS_AS(solve_lp(lp), ModelError);

  LinearProgram lp2(1);
  lp2.add_row({1.0, 2.0}, Sense::LessEqual, 1.0);  // wrong row width
  CHECK_THROWS_AS(solve_lp(lp2), ModelError);

  LinearProgram lp3(1);
  lp3.lower = {2.0};
  lp3.upper = {1.0};
  CHECK_THROWS_AS(solve_lp(lp3), ModelError);
}

TEST_CASE("free variables via splitting") {
  LinearProgram lp(2);
  lp.objective = {1.0, 1.0};
  lp.lower = {-kInf, 0.0};
  lp.upper = {kInf, 1.0};
  lp.add_row({1.0, 1.0}, Sense::GreaterEqual, 2.0);
  const auto res = solve_lp(lp);
  REQUIRE(res.status == SolveStatus::Optimal);
  CHECK(res.objective == doctest::Approx(2.0));
}

TEST_CASE("upper-bounded-only variable via negation") {
  LinearProgram lp(1);
  lp.objective = {-1.0};
  lp.lower = {-kInf};
  lp.upper = {4.0};
  const auto res = solve_lp(lp);
  REQUIRE(res.status == SolveStatus::Optimal);
  CHECK(res.primal[0] == doctest::Approx(4.0));
  CHECK(res.upper_duals[0] == doctest::Approx(1.0));
}

TEST_CASE("duals: lower bound multiplier of min x, x >= 3") {
  LinearProgram lp(1);
  lp.objective = {1.0};
  lp.lower = {3.0};
  lp.upper = {kInf};
  const auto res = solve_lp(lp);
  REQUIRE(res.status == SolveStatus::Optimal);
  const auto duals = extract_duals(res, lp);
  CHECK(duals.lower[0] == doctest::Approx(1.0));
  CHECK(duals.upper[0] == doctest::Approx(0.0));
}

TEST_CASE("duals: inactive constraint has zero multiplier") {
  LinearProgram lp(1);
  lp.objective = {1.0};
  lp.lower = {0.0};
  lp.upper = {10.0};
  lp.add_row({1.0}, Sense::LessEqual, 100.0);  // never active
  const auto res = solve_lp(lp);
  REQUIRE(res.status == SolveStatus::Optimal);
  CHECK(res.row_duals[0] == doctest::Approx(0.0));
}

TEST_CASE("random LPs against vertex enumeration") {
  Rng rng(20240821);
  int optimal = 0, infeasible = 0;
  for (int trial = 0; trial < 120; ++trial) {
    const LinearProgram lp = random_boxed_lp(rng);
    const auto res = solve_lp(lp);
    const auto oracle = lp_vertex_enumeration(lp);
    if (oracle) {
      REQUIRE_MESSAGE(res.status == SolveStatus::Optimal, "trial ", trial);
      CHECK_MESSAGE(std::abs(res.objective - *oracle) <= 1e-6 * (1.0 + std::abs(*oracle)),
                    "trial ", trial, " solver ", res.objective, " oracle ", *oracle);
      ++optimal;
    } else {
      CHECK_MESSAGE(res.status == SolveStatus::Infeasible, "trial ", trial);
      ++infeasible;
    }
  }
  CHECK(optimal > 40);
  CHECK(infeasible > 5);
}

TEST_CASE("KKT residuals and strong duality on random LPs") {
  Rng rng(7);
  int checked = 0;
  for (int trial = 0; trial < 80; ++trial) {
    const LinearProgram lp = random_boxed_lp(rng);
    const auto res = solve_lp(lp);
    if (res.status != SolveStatus::Optimal) continue;
    const auto rep = kkt_residuals(lp, res);
    CHECK_MESSAGE(rep.max_residual() <= 1e-6, "trial ", trial, " residual ", rep.max_residual());
    const double gap = std::abs(res.objective - dual_objective(lp, res));
    CHECK(gap <= 1e-6 * (1.0 + std::abs(res.objective)));
    ++checked;
  }
  CHECK(checked > 40);
}

TEST_CASE("deterministic resolves, bit for bit") {
  Rng rng(99);
  const LinearProgram lp = random_boxed_lp(rng);
  const auto a = solve_lp(lp);
  const auto b = solve_lp(lp);
  REQUIRE(a.primal.size() == b.primal.size());
  CHECK(std::memcmp(a.primal.data(), b.primal.data(), a.primal.size() * sizeof(double)) == 0);
  CHECK(std::memcmp(&a.objective, &b.objective, sizeof(double)) == 0);
}

TEST_CASE("forced coverage: single set, demand 2, cost 5") {
  MipModel mip(1);
  mip.base.objective = {5.0};
  mip.base.lower = {0.0};
  mip.base.upper = {kInf};
  mip.base.add_row({1.0}, Sense::GreaterEqual, 2.0);
  mip.set_integer(0);
  const auto res = solve_mip(mip, 0.0);
  REQUIRE(res.status == SolveStatus::Optimal);
  CHECK(res.primal[0] == doctest::Approx(2.0));
  CHECK(res.objective == doctest::Approx(10.0));
}

TEST_CASE("random MIPs match exhaustive enumeration exactly") {
  Rng rng(31337);
  int solved = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const MipModel mip = random_small_mip(rng);
    const auto oracle = mip_exhaustive_enumeration(mip);
    const auto res = solve_mip(mip, 0.0);
    if (oracle) {
      REQUIRE_MESSAGE(res.status == SolveStatus::Optimal, "trial ", trial);
      CHECK_MESSAGE(res.objective == *oracle, "trial ", trial, " solver ", res.objective,
                    " oracle ", *oracle);
      ++solved;
    } else {
      CHECK_MESSAGE(res.status == SolveStatus::Infeasible, "trial ", trial);
    }
  }
  CHECK(solved > 30);
}

TEST_CASE("indicator soundness on returned solutions") {
  Rng rng(5150);
  for (int trial = 0; trial < 40; ++trial) {
    const MipModel mip = random_small_mip(rng);
    if (mip.indicators.empty()) continue;
    const auto res = solve_mip(mip, 0.0);
    if (res.status != SolveStatus::Optimal) continue;
    for (const auto& ind : mip.indicators) {
      if (std::lround(res.primal[ind.binary_var]) != ind.activation) continue;
      CHECK(row_satisfied(ind.implied, res.primal, 1e-6 * (1.0 + std::abs(ind.implied.rhs))));
    }
  }
}

TEST_CASE("node limit returns the incumbent and a bound") {
  // A model whose root relaxation is fractional, with a warm incumbent.
  MipModel mip(2);
  mip.base.objective = {1.0, 1.3};
  mip.base.lower = {0.0, 0.0};
  mip.base.upper = {5.0, 5.0};
  mip.base.add_row({2.0, 3.0}, Sense::GreaterEqual, 7.0);
  mip.set_integer(0);
  mip.set_integer(1);
  std::vector<double> warm = {5.0, 0.0};
  MipOptions opt;
  opt.node_limit = 1;
  opt.initial_incumbent = &warm;
  const auto res = solve_mip(mip, opt);
  CHECK(res.node_limit_hit);
  REQUIRE(res.status == SolveStatus::Optimal);
  CHECK(res.objective == doctest::Approx(5.0));
  CHECK(res.best_bound <= res.objective + 1e-9);
  // And without the limit the true optimum is reached.
  const auto full = solve_mip(mip, 0.0);
  std::vector<double> arg;
  const auto oracle = mip_exhaustive_enumeration(mip, &arg);
  REQUIRE(oracle);
  CHECK(full.objective == *oracle);
}

TEST_CASE("mip results carry no duals") {
  MipModel mip(1);
  mip.base.objective = {1.0};
  mip.base.lower = {0.0};
  mip.base.upper = {3.0};
  mip.set_integer(0);
  const auto res = solve_mip(mip, 0.0);
  REQUIRE(res.status == SolveStatus::Optimal);
  CHECK_THROWS_AS(extract_duals(res, mip.base), DualsUnavailable);
}

TEST_CASE("model dump fixture") {
  LinearProgram lp(2);
  lp.objective = {1.0, -2.0};
  lp.lower = {0.0, -kInf};
  lp.upper = {kInf, 5.0};
  lp.add_row({1.0, 1.0}, Sense::LessEqual, 3.0);
  const std::string dump = dump_model(lp);
  CHECK(dump.find("minimize 1 -2") != std::string::npos);
  CHECK(dump.find("1 1 L 3") != std::string::npos);
  CHECK(dump.find("x0 in [0, inf]") != std::string::npos);
  CHECK(dump.find("x1 in [-inf, 5]") != std::string::npos);
}
