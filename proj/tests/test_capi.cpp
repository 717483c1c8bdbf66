#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <string>

#include "decopt/decopt.h"

TEST_CASE("c api: lp build, solve, duals") {
  decopt_lp* lp = decopt_lp_new(1);
  REQUIRE(lp != nullptr);
  const double obj[] = {1.0};
  CHECK(decopt_lp_set_objective(lp, obj) == DECOPT_OK);
  CHECK(decopt_lp_set_bounds(lp, 0, 0.0, 10.0) == DECOPT_OK);
  const double row[] = {1.0};
  CHECK(decopt_lp_add_row(lp, row, 'G', 3.0) == DECOPT_OK);

  decopt_solution* sol = nullptr;
  REQUIRE(decopt_lp_solve(lp, &sol) == DECOPT_OK);
  REQUIRE(sol != nullptr);
  CHECK(decopt_solution_status(sol) == DECOPT_SOL_OPTIMAL);
  CHECK(decopt_solution_objective(sol) == doctest::Approx(3.0));
  double x[1];
  CHECK(decopt_solution_primal(sol, x, 1) == DECOPT_OK);
  CHECK(x[0] == doctest::Approx(3.0));
  double y[1];
  CHECK(decopt_solution_row_duals(sol, y, 1) == DECOPT_OK);
  CHECK(y[0] == doctest::Approx(1.0));
  decopt_solution_free(sol);
  decopt_lp_free(lp);
}

TEST_CASE("c api: infeasible and malformed paths carry codes and messages") {
  decopt_lp* lp = decopt_lp_new(1);
  const double obj[] = {0.0};
  decopt_lp_set_objective(lp, obj);
  decopt_lp_set_bounds(lp, 0, 0.0, 1.0);
  const double row[] = {1.0};
  decopt_lp_add_row(lp, row, 'G', 5.0);
  decopt_solution* sol = nullptr;
  CHECK(decopt_lp_solve(lp, &sol) == DECOPT_ERR_INFEASIBLE);
  CHECK(decopt_solution_status(sol) == DECOPT_SOL_INFEASIBLE);
  decopt_solution_free(sol);
  decopt_lp_free(lp);

  CHECK(decopt_lp_set_bounds(nullptr, 0, 0.0, 1.0) == DECOPT_ERR_INVALID_ARG);
  CHECK(std::strlen(decopt_last_error()) > 0);

  decopt_lp* bad = decopt_lp_new(1);
  decopt_lp_set_bounds(bad, 0, 2.0, 1.0);  // inverted bounds
  decopt_solution* s2 = nullptr;
  CHECK(decopt_lp_solve(bad, &s2) == DECOPT_ERR_MALFORMED_MODEL);
  CHECK(s2 == nullptr);
  decopt_lp_free(bad);
}

TEST_CASE("c api: mip solve, node limit, and missing duals") {
  decopt_mip* mip = decopt_mip_new(2);
  const double obj[] = {1.0, 1.3};
  decopt_mip_set_objective(mip, obj);
  decopt_mip_set_bounds(mip, 0, 0.0, 5.0);
  decopt_mip_set_bounds(mip, 1, 0.0, 5.0);
  const double row[] = {2.0, 3.0};
  decopt_mip_add_row(mip, row, 'G', 7.0);
  decopt_mip_set_integer(mip, 0, 1);
  decopt_mip_set_integer(mip, 1, 1);

  decopt_solution* sol = nullptr;
  REQUIRE(decopt_mip_solve(mip, 0.0, 0, &sol) == DECOPT_OK);
  double x[2];
  CHECK(decopt_solution_primal(sol, x, 2) == DECOPT_OK);
  CHECK(std::abs(x[0] - std::round(x[0])) < 1e-9);
  double y[1];
  CHECK(decopt_solution_row_duals(sol, y, 1) == DECOPT_ERR_RUNTIME);  // MIPs carry no duals
  decopt_solution_free(sol);

  decopt_solution* limited = nullptr;
  CHECK(decopt_mip_solve(mip, 0.0, 2, &limited) == DECOPT_ERR_NODE_LIMIT);
  REQUIRE(limited != nullptr);
  // The cut-short solve still carries an incumbent and a valid bound.
  CHECK(decopt_solution_status(limited) == DECOPT_SOL_OPTIMAL);
  CHECK(decopt_solution_best_bound(limited) <= decopt_solution_objective(limited) + 1e-9);
  decopt_solution_free(limited);
  decopt_mip_free(mip);
}

TEST_CASE("c api: indicator constraints honored") {
  // b = 1 forces x >= 4; minimizing x + 10 b keeps b = 0 and x free at 0.
  decopt_mip* mip = decopt_mip_new(2);
  const double obj[] = {1.0, 10.0};
  decopt_mip_set_objective(mip, obj);
  decopt_mip_set_bounds(mip, 0, 0.0, 6.0);
  decopt_mip_set_bounds(mip, 1, 0.0, 1.0);
  decopt_mip_set_integer(mip, 0, 1);
  decopt_mip_set_integer(mip, 1, 1);
  const double need[] = {1.0, 5.0};
  decopt_mip_add_row(mip, need, 'G', 4.0);  // x + 5b >= 4
  const double implied[] = {1.0, 0.0};
  decopt_mip_add_indicator(mip, 1, 1, implied, 'G', 4.0);
  decopt_solution* sol = nullptr;
  REQUIRE(decopt_mip_solve(mip, 0.0, 0, &sol) == DECOPT_OK);
  double x[2];
  decopt_solution_primal(sol, x, 2);
  CHECK(x[0] == doctest::Approx(4.0));  // covering beats paying for b
  CHECK(x[1] == doctest::Approx(0.0));
  decopt_solution_free(sol);
  decopt_mip_free(mip);
}

TEST_CASE("c api: model dump and pipeline smoke") {
  namespace fs = std::filesystem;
  decopt_lp* lp = decopt_lp_new(2);
  const double obj[] = {1.0, -2.0};
  decopt_lp_set_objective(lp, obj);
  const double row[] = {1.0, 1.0};
  decopt_lp_add_row(lp, row, 'L', 3.0);
  const std::string dump_path = "/tmp/decopt_capi_dump.txt";
  CHECK(decopt_lp_write(lp, dump_path.c_str()) == DECOPT_OK);
  CHECK(fs::exists(dump_path));
  std::remove(dump_path.c_str());
  decopt_lp_free(lp);

  decopt_config* cfg = decopt_config_new();
  CHECK(decopt_config_set(cfg, "seed", "17") == DECOPT_OK);
  CHECK(decopt_config_set(cfg, "smc.elements", "8") == DECOPT_OK);
  CHECK(decopt_config_set(cfg, "smc.sets", "30") == DECOPT_OK);
  CHECK(decopt_config_set(cfg, "smc.density", "0.25") == DECOPT_OK);
  CHECK(decopt_config_set(cfg, "smc.train_pairs", "10") == DECOPT_OK);
  CHECK(decopt_config_set(cfg, "smc.test_instances", "3") == DECOPT_OK);
  CHECK(decopt_config_set(cfg, "no.such.key", "1") == DECOPT_ERR_IO);
  const std::string dir = "/tmp/decopt_capi_gen";
  fs::remove_all(dir);
  CHECK(decopt_run_generate(cfg, dir.c_str()) == DECOPT_OK);
  CHECK(fs::exists(dir + "/smc_instance.txt"));
  fs::remove_all(dir);
  decopt_config_free(cfg);
}
