/* decopt - decision policies over optimization layers.
 *
 * C interface to the solver core and the experiment pipelines. All objects
 * are opaque handles; every function that can fail returns a decopt_status
 * and leaves a human-readable message in decopt_last_error() (thread
 * local). Array outputs are caller-allocated.
 */

#ifndef DECOPT_H
#define DECOPT_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum decopt_status {
  DECOPT_OK = 0,
  DECOPT_ERR_INVALID_ARG = 1,
  DECOPT_ERR_MALFORMED_MODEL = 2,
  DECOPT_ERR_INFEASIBLE = 3,
  DECOPT_ERR_UNBOUNDED = 4,
  DECOPT_ERR_NUMERICAL = 5,
  DECOPT_ERR_NODE_LIMIT = 6,
  DECOPT_ERR_IO = 7,
  DECOPT_ERR_RUNTIME = 8
} decopt_status;

/* Solution status codes reported by decopt_solution_status(). */
#define DECOPT_SOL_OPTIMAL 0
#define DECOPT_SOL_INFEASIBLE 1
#define DECOPT_SOL_UNBOUNDED 2
#define DECOPT_SOL_NUMERICAL 3

const char* decopt_version(void);
const char* decopt_last_error(void);

/* ------------------------------------------------------------ solver -- */

typedef struct decopt_lp decopt_lp;
typedef struct decopt_mip decopt_mip;
typedef struct decopt_solution decopt_solution;

/* Row senses: 'L' (<=), 'E' (=), 'G' (>=). Infinite bounds: +-HUGE_VAL. */

decopt_lp* decopt_lp_new(int num_vars);
void decopt_lp_free(decopt_lp* lp);
decopt_status decopt_lp_set_objective(decopt_lp* lp, const double* coeffs);
decopt_status decopt_lp_set_bounds(decopt_lp* lp, int var, double lower, double upper);
decopt_status decopt_lp_add_row(decopt_lp* lp, const double* coeffs, char sense, double rhs);
decopt_status decopt_lp_solve(const decopt_lp* lp, decopt_solution** out);
/* Writes the human-readable model dump (one row per line). */
decopt_status decopt_lp_write(const decopt_lp* lp, const char* path);

decopt_mip* decopt_mip_new(int num_vars);
void decopt_mip_free(decopt_mip* mip);
decopt_status decopt_mip_set_objective(decopt_mip* mip, const double* coeffs);
decopt_status decopt_mip_set_bounds(decopt_mip* mip, int var, double lower, double upper);
decopt_status decopt_mip_add_row(decopt_mip* mip, const double* coeffs, char sense, double rhs);
decopt_status decopt_mip_set_integer(decopt_mip* mip, int var, int is_integer);
/* binary == activation implies the row holds. */
decopt_status decopt_mip_add_indicator(decopt_mip* mip, int binary_var, int activation,
                                       const double* coeffs, char sense, double rhs);
/* Returns DECOPT_ERR_NODE_LIMIT when the tree was cut short; the solution
 * handle then carries the incumbent and its bound. */
decopt_status decopt_mip_solve(const decopt_mip* mip, double gap_tol, long node_limit,
                               decopt_solution** out);

int decopt_solution_status(const decopt_solution* sol);
double decopt_solution_objective(const decopt_solution* sol);
double decopt_solution_best_bound(const decopt_solution* sol);
int decopt_solution_num_vars(const decopt_solution* sol);
decopt_status decopt_solution_primal(const decopt_solution* sol, double* out, int capacity);
/* Row multipliers and bound multipliers; only optimal LP solves carry them. */
decopt_status decopt_solution_row_duals(const decopt_solution* sol, double* out, int capacity);
decopt_status decopt_solution_bound_duals(const decopt_solution* sol, double* lower_out,
                                          double* upper_out, int capacity);
void decopt_solution_free(decopt_solution* sol);

/* --------------------------------------------------------- pipelines -- */

typedef struct decopt_config decopt_config;

decopt_config* decopt_config_new(void);
void decopt_config_free(decopt_config* config);
decopt_status decopt_config_load(decopt_config* config, const char* path);
decopt_status decopt_config_set(decopt_config* config, const char* key, const char* value);

decopt_status decopt_run_generate(const decopt_config* config, const char* out_dir);
decopt_status decopt_run_train(const decopt_config* config, const char* out_dir);
decopt_status decopt_run_evaluate(const decopt_config* config, const char* out_dir);
decopt_status decopt_run_baseline(const decopt_config* config, const char* out_dir);
decopt_status decopt_run_experiment(const decopt_config* config, const char* name,
                                    const char* out_dir);
decopt_status decopt_run_report(const decopt_config* config, const char* records_dir,
                                const char* out_dir);

#ifdef __cplusplus
}
#endif

#endif /* DECOPT_H */
