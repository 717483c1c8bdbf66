#include "opt/model.hpp"

#include <cmath>

#include "common/textio.hpp"

namespace decopt::opt {

LinearProgram::LinearProgram(int n)
    : num_vars(n), objective(n, 0.0), lower(n, 0.0), upper(n, kInf) {}

void LinearProgram::add_row(std::vector<double> coeffs, Sense sense, double rhs) {
  Row r;
  r.coeffs = std::move(coeffs);
  r.sense = sense;
  r.rhs = rhs;
  rows.push_back(std::move(r));
}

void LinearProgram::validate() const {
  if (num_vars < 0) throw ModelError("negative variable count");
  const auto n = static_cast<std::size_t>(num_vars);
  if (objective.size() != n) throw ModelError("objective length != num_vars");
  if (lower.size() != n || upper.size() != n) throw ModelError("bound vector length != num_vars");
  for (int j = 0; j < num_vars; ++j) {
    if (std::isnan(lower[j]) || std::isnan(upper[j])) throw ModelError("NaN bound");
    if (std::isfinite(lower[j]) && std::isfinite(upper[j]) && lower[j] > upper[j])
      throw ModelError("lower bound exceeds upper bound for variable " + std::to_string(j));
    if (!std::isfinite(objective[j])) throw ModelError("non-finite objective coefficient");
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].coeffs.size() != n)
      throw ModelError("row " + std::to_string(i) + " coefficient length != num_vars");
    if (!std::isfinite(rows[i].rhs)) throw ModelError("non-finite rhs in row " + std::to_string(i));
    for (double c : rows[i].coeffs)
      if (!std::isfinite(c)) throw ModelError("non-finite coefficient in row " + std::to_string(i));
  }
}

MipModel::MipModel(int n) : base(n), integrality(n, 0) {}

void MipModel::set_integer(int var, bool flag) {
  integrality.at(static_cast<std::size_t>(var)) = flag ? 1 : 0;
}

void MipModel::add_indicator(int binary_var, int activation, Row implied) {
  Indicator ind;
  ind.binary_var = binary_var;
  ind.activation = activation;
  ind.implied = std::move(implied);
  indicators.push_back(std::move(ind));
}

void MipModel::validate() const {
  base.validate();
  if (integrality.size() != static_cast<std::size_t>(base.num_vars))
    throw ModelError("integrality mask length != num_vars");
  for (const auto& ind : indicators) {
    if (ind.binary_var < 0 || ind.binary_var >= base.num_vars)
      throw ModelError("indicator binary out of range");
    if (ind.activation != 0 && ind.activation != 1)
      throw ModelError("indicator activation must be 0 or 1");
    if (!integrality[ind.binary_var]) throw ModelError("indicator binary not marked integral");
    if (base.lower[ind.binary_var] < -1e-12 || base.upper[ind.binary_var] > 1.0 + 1e-12)
      throw ModelError("indicator binary must have bounds within [0,1]");
    if (ind.implied.coeffs.size() != static_cast<std::size_t>(base.num_vars))
      throw ModelError("indicator row length != num_vars");
  }
}

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Unbounded: return "unbounded";
    case SolveStatus::Numerical: return "numerical";
  }
  return "?";
}

namespace {

std::string join_coeffs(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += " ";
    out += format_double(v[i]);
  }
  return out;
}

std::string bound_str(double v) {
  if (v == kInf) return "inf";
  if (v == -kInf) return "-inf";
  return format_double(v);
}

void dump_row(std::string& out, const Row& r) {
  out += join_coeffs(r.coeffs);
  out += " ";
  out += static_cast<char>(r.sense);
  out += " ";
  out += format_double(r.rhs);
  out += "\n";
}

}  // namespace

std::string dump_model(const LinearProgram& lp) {
  std::string out = "minimize " + join_coeffs(lp.objective) + "\n";
  for (const auto& r : lp.rows) dump_row(out, r);
  for (int j = 0; j < lp.num_vars; ++j)
    out += "x" + std::to_string(j) + " in [" + bound_str(lp.lower[j]) + ", " +
           bound_str(lp.upper[j]) + "]\n";
  return out;
}

std::string dump_model(const MipModel& mip) {
  std::string out = dump_model(mip.base);
  std::string ints;
  for (int j = 0; j < mip.base.num_vars; ++j)
    if (mip.integrality[j]) ints += (ints.empty() ? "" : " ") + ("x" + std::to_string(j));
  if (!ints.empty()) out += "integer " + ints + "\n";
  for (const auto& ind : mip.indicators) {
    out += "x" + std::to_string(ind.binary_var) + " == " + std::to_string(ind.activation) +
           " -> ";
    dump_row(out, ind.implied);
  }
  return out;
}

}  // namespace decopt::opt
