#include "decopt/decopt.h"

#include <cstring>
#include <string>

#include "opt/mip.hpp"
#include "opt/simplex.hpp"
#include "run/config.hpp"
#include "run/pipeline.hpp"

using namespace decopt;

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

decopt_status classify(const std::exception& e) {
  set_error(e.what());
  if (dynamic_cast<const opt::ModelError*>(&e)) return DECOPT_ERR_MALFORMED_MODEL;
  if (dynamic_cast<const IoError*>(&e)) return DECOPT_ERR_IO;
  if (dynamic_cast<const std::invalid_argument*>(&e)) return DECOPT_ERR_INVALID_ARG;
  return DECOPT_ERR_RUNTIME;
}

opt::Sense sense_from(char s) {
  switch (s) {
    case 'L': return opt::Sense::LessEqual;
    case 'E': return opt::Sense::Equal;
    case 'G': return opt::Sense::GreaterEqual;
  }
  throw std::invalid_argument("sense must be one of 'L', 'E', 'G'");
}

}  // namespace

struct decopt_lp {
  opt::LinearProgram lp;
};
struct decopt_mip {
  opt::MipModel mip;
};
struct decopt_solution {
  opt::SolveResult result;
};
struct decopt_config {
  run::ExperimentConfig config;
};

extern "C" {

const char* decopt_version(void) { return "0.1.0"; }
const char* decopt_last_error(void) { return g_last_error.c_str(); }

decopt_lp* decopt_lp_new(int num_vars) {
  if (num_vars < 0) {
    set_error("negative variable count");
    return nullptr;
  }
  return new decopt_lp{opt::LinearProgram(num_vars)};
}

void decopt_lp_free(decopt_lp* lp) { delete lp; }

decopt_status decopt_lp_set_objective(decopt_lp* lp, const double* coeffs) {
  if (!lp || !coeffs) {
    set_error("null argument");
    return DECOPT_ERR_INVALID_ARG;
  }
  lp->lp.objective.assign(coeffs, coeffs + lp->lp.num_vars);
  return DECOPT_OK;
}

decopt_status decopt_lp_set_bounds(decopt_lp* lp, int var, double lower, double upper) {
  if (!lp || var < 0 || var >= lp->lp.num_vars) {
    set_error("variable index out of range");
    return DECOPT_ERR_INVALID_ARG;
  }
  lp->lp.lower[var] = lower;
  lp->lp.upper[var] = upper;
  return DECOPT_OK;
}

decopt_status decopt_lp_add_row(decopt_lp* lp, const double* coeffs, char sense, double rhs) {
  if (!lp || !coeffs) {
    set_error("null argument");
    return DECOPT_ERR_INVALID_ARG;
  }
  try {
    lp->lp.add_row(std::vector<double>(coeffs, coeffs + lp->lp.num_vars), sense_from(sense),
                   rhs);
    return DECOPT_OK;
  } catch (const std::exception& e) {
    return classify(e);
  }
}

decopt_status decopt_lp_solve(const decopt_lp* lp, decopt_solution** out) {
  if (!lp || !out) {
    set_error("null argument");
    return DECOPT_ERR_INVALID_ARG;
  }
  *out = nullptr;
  try {
    opt::SolveResult res = opt::solve_lp(lp->lp);
    const opt::SolveStatus status = res.status;
    *out = new decopt_solution{std::move(res)};
    switch (status) {
      case opt::SolveStatus::Optimal: return DECOPT_OK;
      case opt::SolveStatus::Infeasible: return DECOPT_ERR_INFEASIBLE;
      case opt::SolveStatus::Unbounded: return DECOPT_ERR_UNBOUNDED;
      case opt::SolveStatus::Numerical: return DECOPT_ERR_NUMERICAL;
    }
    return DECOPT_ERR_RUNTIME;
  } catch (const std::exception& e) {
    return classify(e);
  }
}

decopt_status decopt_lp_write(const decopt_lp* lp, const char* path) {
  if (!lp || !path) {
    set_error("null argument");
    return DECOPT_ERR_INVALID_ARG;
  }
  try {
    write_text_file(path, opt::dump_model(lp->lp));
    return DECOPT_OK;
  } catch (const std::exception& e) {
    return classify(e);
  }
}

decopt_mip* decopt_mip_new(int num_vars) {
  if (num_vars < 0) {
    set_error("negative variable count");
    return nullptr;
  }
  return new decopt_mip{opt::MipModel(num_vars)};
}

void decopt_mip_free(decopt_mip* mip) { delete mip; }

decopt_status decopt_mip_set_objective(decopt_mip* mip, const double* coeffs) {
  if (!mip || !coeffs) {
    set_error("null argument");
    return DECOPT_ERR_INVALID_ARG;
  }
  mip->mip.base.objective.assign(coeffs, coeffs + mip->mip.base.num_vars);
  return DECOPT_OK;
}

decopt_status decopt_mip_set_bounds(decopt_mip* mip, int var, double lower, double upper) {
  if (!mip || var < 0 || var >= mip->mip.base.num_vars) {
    set_error("variable index out of range");
    return DECOPT_ERR_INVALID_ARG;
  }
  mip->mip.base.lower[var] = lower;
  mip->mip.base.upper[var] = upper;
  return DECOPT_OK;
}

decopt_status decopt_mip_add_row(decopt_mip* mip, const double* coeffs, char sense, double rhs) {
  if (!mip || !coeffs) {
    set_error("null argument");
    return DECOPT_ERR_INVALID_ARG;
  }
  try {
    mip->mip.base.add_row(std::vector<double>(coeffs, coeffs + mip->mip.base.num_vars),
                          sense_from(sense), rhs);
    return DECOPT_OK;
  } catch (const std::exception& e) {
    return classify(e);
  }
}

decopt_status decopt_mip_set_integer(decopt_mip* mip, int var, int is_integer) {
  if (!mip || var < 0 || var >= mip->mip.base.num_vars) {
    set_error("variable index out of range");
    return DECOPT_ERR_INVALID_ARG;
  }
  mip->mip.set_integer(var, is_integer != 0);
  return DECOPT_OK;
}

decopt_status decopt_mip_add_indicator(decopt_mip* mip, int binary_var, int activation,
                                       const double* coeffs, char sense, double rhs) {
  if (!mip || !coeffs) {
    set_error("null argument");
    return DECOPT_ERR_INVALID_ARG;
  }
  try {
    opt::Row row;
    row.coeffs.assign(coeffs, coeffs + mip->mip.base.num_vars);
    row.sense = sense_from(sense);
    row.rhs = rhs;
    mip->mip.add_indicator(binary_var, activation, std::move(row));
    return DECOPT_OK;
  } catch (const std::exception& e) {
    return classify(e);
  }
}

decopt_status decopt_mip_solve(const decopt_mip* mip, double gap_tol, long node_limit,
                               decopt_solution** out) {
  if (!mip || !out) {
    set_error("null argument");
    return DECOPT_ERR_INVALID_ARG;
  }
  *out = nullptr;
  try {
    opt::MipOptions options;
    options.gap_tol = gap_tol;
    if (node_limit > 0) options.node_limit = node_limit;
    opt::SolveResult res = opt::solve_mip(mip->mip, options);
    const opt::SolveStatus status = res.status;
    const bool limit_hit = res.node_limit_hit;
    *out = new decopt_solution{std::move(res)};
    if (limit_hit) {
      set_error("node limit reached; solution carries the incumbent and bound");
      return DECOPT_ERR_NODE_LIMIT;
    }
    switch (status) {
      case opt::SolveStatus::Optimal: return DECOPT_OK;
      case opt::SolveStatus::Infeasible: return DECOPT_ERR_INFEASIBLE;
      case opt::SolveStatus::Unbounded: return DECOPT_ERR_UNBOUNDED;
      case opt::SolveStatus::Numerical: return DECOPT_ERR_NUMERICAL;
    }
    return DECOPT_ERR_RUNTIME;
  } catch (const std::exception& e) {
    return classify(e);
  }
}

int decopt_solution_status(const decopt_solution* sol) {
  if (!sol) return DECOPT_SOL_NUMERICAL;
  switch (sol->result.status) {
    case opt::SolveStatus::Optimal: return DECOPT_SOL_OPTIMAL;
    case opt::SolveStatus::Infeasible: return DECOPT_SOL_INFEASIBLE;
    case opt::SolveStatus::Unbounded: return DECOPT_SOL_UNBOUNDED;
    case opt::SolveStatus::Numerical: return DECOPT_SOL_NUMERICAL;
  }
  return DECOPT_SOL_NUMERICAL;
}

double decopt_solution_objective(const decopt_solution* sol) {
  return sol ? sol->result.objective : 0.0;
}

double decopt_solution_best_bound(const decopt_solution* sol) {
  return sol ? sol->result.best_bound : 0.0;
}

int decopt_solution_num_vars(const decopt_solution* sol) {
  return sol ? static_cast<int>(sol->result.primal.size()) : 0;
}

decopt_status decopt_solution_primal(const decopt_solution* sol, double* out, int capacity) {
  if (!sol || !out) {
    set_error("null argument");
    return DECOPT_ERR_INVALID_ARG;
  }
  if (capacity < static_cast<int>(sol->result.primal.size())) {
    set_error("output buffer too small");
    return DECOPT_ERR_INVALID_ARG;
  }
  std::memcpy(out, sol->result.primal.data(), sol->result.primal.size() * sizeof(double));
  return DECOPT_OK;
}

decopt_status decopt_solution_row_duals(const decopt_solution* sol, double* out, int capacity) {
  if (!sol || !out) {
    set_error("null argument");
    return DECOPT_ERR_INVALID_ARG;
  }
  if (!sol->result.has_duals) {
    set_error("duals unavailable: integer solve or non-optimal status");
    return DECOPT_ERR_RUNTIME;
  }
  if (capacity < static_cast<int>(sol->result.row_duals.size())) {
    set_error("output buffer too small");
    return DECOPT_ERR_INVALID_ARG;
  }
  std::memcpy(out, sol->result.row_duals.data(), sol->result.row_duals.size() * sizeof(double));
  return DECOPT_OK;
}

decopt_status decopt_solution_bound_duals(const decopt_solution* sol, double* lower_out,
                                          double* upper_out, int capacity) {
  if (!sol || !lower_out || !upper_out) {
    set_error("null argument");
    return DECOPT_ERR_INVALID_ARG;
  }
  if (!sol->result.has_duals) {
    set_error("duals unavailable: integer solve or non-optimal status");
    return DECOPT_ERR_RUNTIME;
  }
  if (capacity < static_cast<int>(sol->result.lower_duals.size())) {
    set_error("output buffer too small");
    return DECOPT_ERR_INVALID_ARG;
  }
  std::memcpy(lower_out, sol->result.lower_duals.data(),
              sol->result.lower_duals.size() * sizeof(double));
  std::memcpy(upper_out, sol->result.upper_duals.data(),
              sol->result.upper_duals.size() * sizeof(double));
  return DECOPT_OK;
}

void decopt_solution_free(decopt_solution* sol) { delete sol; }

decopt_config* decopt_config_new(void) { return new decopt_config{}; }
void decopt_config_free(decopt_config* config) { delete config; }

decopt_status decopt_config_load(decopt_config* config, const char* path) {
  if (!config || !path) {
    set_error("null argument");
    return DECOPT_ERR_INVALID_ARG;
  }
  try {
    const KvDoc doc = KvDoc::load(path);
    for (const auto& [k, v] : doc.entries()) config->config.apply_override(k, v);
    return DECOPT_OK;
  } catch (const std::exception& e) {
    return classify(e);
  }
}

decopt_status decopt_config_set(decopt_config* config, const char* key, const char* value) {
  if (!config || !key || !value) {
    set_error("null argument");
    return DECOPT_ERR_INVALID_ARG;
  }
  try {
    config->config.apply_override(key, value);
    return DECOPT_OK;
  } catch (const std::exception& e) {
    return classify(e);
  }
}

#define DECOPT_PIPELINE(fn, call)                                  \
  decopt_status fn {                                               \
    if (!config || !out_dir) {                                     \
      set_error("null argument");                                  \
      return DECOPT_ERR_INVALID_ARG;                               \
    }                                                              \
    try {                                                          \
      call;                                                        \
      return DECOPT_OK;                                            \
    } catch (const std::exception& e) {                            \
      return classify(e);                                          \
    }                                                              \
  }

DECOPT_PIPELINE(decopt_run_generate(const decopt_config* config, const char* out_dir),
                run::pipeline_generate(config->config, out_dir))
DECOPT_PIPELINE(decopt_run_train(const decopt_config* config, const char* out_dir),
                run::pipeline_train(config->config, out_dir))
DECOPT_PIPELINE(decopt_run_evaluate(const decopt_config* config, const char* out_dir),
                run::pipeline_evaluate(config->config, out_dir))
DECOPT_PIPELINE(decopt_run_baseline(const decopt_config* config, const char* out_dir),
                run::pipeline_baseline(config->config, out_dir))

decopt_status decopt_run_experiment(const decopt_config* config, const char* name,
                                    const char* out_dir) {
  if (!config || !out_dir) {
    set_error("null argument");
    return DECOPT_ERR_INVALID_ARG;
  }
  try {
    run::ExperimentConfig cfg = config->config;
    if (name && *name) cfg.experiment = name;
    run::pipeline_experiment(cfg, out_dir);
    return DECOPT_OK;
  } catch (const std::exception& e) {
    return classify(e);
  }
}

decopt_status decopt_run_report(const decopt_config* config, const char* records_dir,
                                const char* out_dir) {
  if (!config || !records_dir || !out_dir) {
    set_error("null argument");
    return DECOPT_ERR_INVALID_ARG;
  }
  try {
    run::pipeline_report(config->config, records_dir, out_dir);
    return DECOPT_OK;
  } catch (const std::exception& e) {
    return classify(e);
  }
}

}  // extern "C"
