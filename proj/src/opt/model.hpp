#pragma once

#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace decopt::opt {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Thrown for structurally broken models (dimension mismatches, inverted
// bounds, non-finite rhs). Detected before any solving starts.
struct ModelError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Sense : char { LessEqual = 'L', Equal = 'E', GreaterEqual = 'G' };

struct Row {
  std::vector<double> coeffs;
  Sense sense = Sense::LessEqual;
  double rhs = 0.0;
};

// Canonical linear program:
//   minimize  objective . x
//   subject to  rows (each coeffs . x <= / = / >= rhs)
//               lower <= x <= upper  (+-inf allowed)
struct LinearProgram {
  int num_vars = 0;
  std::vector<double> objective;
  std::vector<Row> rows;
  std::vector<double> lower;
  std::vector<double> upper;

  explicit LinearProgram(int n = 0);
  void add_row(std::vector<double> coeffs, Sense sense, double rhs);
  // Throws ModelError on any violated structural invariant.
  void validate() const;
};

// "binary_var == activation  implies  implied holds".
struct Indicator {
  int binary_var = -1;
  int activation = 1;
  Row implied;
};

struct MipModel {
  LinearProgram base;
  std::vector<char> integrality;  // one flag per variable
  std::vector<Indicator> indicators;

  explicit MipModel(int n = 0);
  void set_integer(int var, bool flag = true);
  void add_indicator(int binary_var, int activation, Row implied);
  void validate() const;
};

enum class SolveStatus { Optimal, Infeasible, Unbounded, Numerical };

const char* to_string(SolveStatus s);

struct SolveResult {
  SolveStatus status = SolveStatus::Numerical;
  std::vector<double> primal;
  double objective = 0.0;

  // LP only. Convention: for every variable j,
  //   c_j - sum_i row_duals[i] * a_ij - lower_duals[j] + upper_duals[j] = 0
  // with lower_duals, upper_duals >= 0, row_duals >= 0 on >= rows,
  // <= 0 on <= rows, free on = rows.
  bool has_duals = false;
  std::vector<double> row_duals;
  std::vector<double> lower_duals;
  std::vector<double> upper_duals;

  // Branch and bound bookkeeping (MIP solves).
  bool node_limit_hit = false;
  double best_bound = -kInf;
  long nodes = 0;
  long iterations = 0;
  std::string message;
};

// Human-readable dump (one row per line) used for test fixtures.
std::string dump_model(const LinearProgram& lp);
std::string dump_model(const MipModel& mip);

}  // namespace decopt::opt
