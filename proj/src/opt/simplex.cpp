#include "opt/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

namespace decopt::opt {

namespace {

constexpr double kFeasTol = 1e-7;   // internal feasibility tolerance
constexpr double kOptTol = 1e-7;    // reduced-cost tolerance
constexpr double kPivotTol = 1e-9;  // smallest acceptable pivot element
constexpr double kZeroStep = 1e-12;

struct SparseCol {
  std::vector<std::pair<int, double>> entries;
  void add(int row, double v) {
    if (v != 0.0) entries.emplace_back(row, v);
  }
};

enum class VarState : char { AtLower, AtUpper, Basic };

// How an internal column maps back onto an original variable.
enum class MapKind : char { Shifted, Negated, SplitPos, SplitNeg, Slack, Artificial };

struct ColInfo {
  SparseCol col;
  double cost = 0.0;   // phase-2 cost
  double upper = kInf; // internal lower bound is always 0
  MapKind kind = MapKind::Slack;
  int origin = -1;     // original variable or row index
};

class Simplex {
 public:
  Simplex(const LinearProgram& lp, const std::vector<double>& lower,
          const std::vector<double>& upper)
      : lp_(lp), lo_(lower), up_(upper), m_(static_cast<int>(lp.rows.size())) {}

  SolveResult run() {
    SolveResult res;
    build_columns();
    crash_basis();
    if (need_phase1_) {
      const int p1 = optimize(/*phase1=*/true);
      if (p1 != 0) {
        res.status = SolveStatus::Numerical;
        res.message = "phase 1 iteration limit";
        res.iterations = iterations_;
        return res;
      }
      if (phase1_objective() > kFeasTol * (1.0 + rhs_scale_)) {
        res.status = SolveStatus::Infeasible;
        res.iterations = iterations_;
        return res;
      }
      retire_artificials();
    }
    const int p2 = optimize(/*phase1=*/false);
    res.iterations = iterations_;
    if (p2 == 2) {
      res.status = SolveStatus::Unbounded;
      return res;
    }
    if (p2 != 0) {
      res.status = SolveStatus::Numerical;
      res.message = "phase 2 iteration limit";
      return res;
    }
    extract(res);
    return res;
  }

 private:
  const LinearProgram& lp_;
  const std::vector<double>& lo_;
  const std::vector<double>& up_;
  int m_ = 0;

  std::vector<ColInfo> cols_;
  std::vector<double> rhs_;        // after shifting nonbasic contributions of bounds
  double rhs_scale_ = 1.0;
  bool need_phase1_ = false;

  // Original variable -> internal column(s).
  struct VarMap {
    MapKind kind;
    int col = -1;
    int col2 = -1;   // negative part for split variables
    double shift = 0.0;
  };
  std::vector<VarMap> vmap_;

  std::vector<int> basis_;        // per row: column index
  std::vector<VarState> state_;   // per column
  std::vector<double> xb_;        // basic values
  std::vector<double> binv_;      // m x m row-major
  long iterations_ = 0;
  long degenerate_streak_ = 0;
  bool bland_ = false;
  int first_artificial_ = -1;

  double& binv(int i, int j) { return binv_[static_cast<std::size_t>(i) * m_ + j]; }

  void build_columns() {
    const int n = lp_.num_vars;
    vmap_.resize(n);
    for (int j = 0; j < n; ++j) {
      const double lo = lo_[j], up = up_[j];
      VarMap vm{};
      if (lo == -kInf && up == kInf) {
        vm.kind = MapKind::SplitPos;
        ColInfo pos, neg;
        for (int i = 0; i < m_; ++i) {
          const double a = lp_.rows[i].coeffs[j];
          pos.col.add(i, a);
          neg.col.add(i, -a);
        }
        pos.cost = lp_.objective[j];
        neg.cost = -lp_.objective[j];
        pos.kind = MapKind::SplitPos;
        neg.kind = MapKind::SplitNeg;
        pos.origin = neg.origin = j;
        vm.col = static_cast<int>(cols_.size());
        cols_.push_back(std::move(pos));
        vm.col2 = static_cast<int>(cols_.size());
        cols_.push_back(std::move(neg));
      } else if (lo == -kInf) {
        // x = up - xhat, xhat >= 0
        vm.kind = MapKind::Negated;
        vm.shift = up;
        ColInfo ci;
        for (int i = 0; i < m_; ++i) ci.col.add(i, -lp_.rows[i].coeffs[j]);
        ci.cost = -lp_.objective[j];
        ci.kind = MapKind::Negated;
        ci.origin = j;
        vm.col = static_cast<int>(cols_.size());
        cols_.push_back(std::move(ci));
      } else {
        // x = lo + xhat, 0 <= xhat <= up - lo
        vm.kind = MapKind::Shifted;
        vm.shift = lo;
        ColInfo ci;
        for (int i = 0; i < m_; ++i) ci.col.add(i, lp_.rows[i].coeffs[j]);
        ci.cost = lp_.objective[j];
        ci.upper = (up == kInf) ? kInf : up - lo;
        ci.kind = MapKind::Shifted;
        ci.origin = j;
        vm.col = static_cast<int>(cols_.size());
        cols_.push_back(std::move(ci));
      }
      vmap_[j] = vm;
    }
    // Shift the rhs by the fixed part of each substitution.
    rhs_.assign(m_, 0.0);
    for (int i = 0; i < m_; ++i) {
      double b = lp_.rows[i].rhs;
      for (int j = 0; j < n; ++j) {
        const double a = lp_.rows[i].coeffs[j];
        if (a == 0.0) continue;
        if (vmap_[j].kind == MapKind::Shifted && vmap_[j].shift != 0.0) b -= a * vmap_[j].shift;
        if (vmap_[j].kind == MapKind::Negated) b -= a * vmap_[j].shift;
      }
      rhs_[i] = b;
    }
    // Slacks for inequality rows.
    for (int i = 0; i < m_; ++i) {
      const Sense s = lp_.rows[i].sense;
      if (s == Sense::Equal) continue;
      ColInfo ci;
      ci.col.add(i, s == Sense::LessEqual ? 1.0 : -1.0);
      ci.kind = MapKind::Slack;
      ci.origin = i;
      cols_.push_back(std::move(ci));
    }
    rhs_scale_ = 0.0;
    for (double b : rhs_) rhs_scale_ += std::abs(b);
  }

  void crash_basis() {
    basis_.assign(m_, -1);
    state_.assign(cols_.size(), VarState::AtLower);
    // Slack columns, if their crash value is feasible, form the basis.
    for (std::size_t c = 0; c < cols_.size(); ++c) {
      if (cols_[c].kind != MapKind::Slack) continue;
      const int i = cols_[c].col.entries[0].first;
      const double coeff = cols_[c].col.entries[0].second;
      const double val = rhs_[i] / coeff;
      if (val >= 0.0) basis_[i] = static_cast<int>(c);
    }
    first_artificial_ = static_cast<int>(cols_.size());
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] >= 0) continue;
      ColInfo art;
      art.col.add(i, rhs_[i] >= 0.0 ? 1.0 : -1.0);
      art.kind = MapKind::Artificial;
      art.origin = i;
      basis_[i] = static_cast<int>(cols_.size());
      cols_.push_back(std::move(art));
      need_phase1_ = true;
    }
    state_.resize(cols_.size(), VarState::AtLower);
    for (int i = 0; i < m_; ++i) state_[basis_[i]] = VarState::Basic;

    // The crash basis is diagonal (+-1): invert directly.
    binv_.assign(static_cast<std::size_t>(m_) * m_, 0.0);
    for (int i = 0; i < m_; ++i) {
      const double coeff = cols_[basis_[i]].col.entries[0].second;
      binv(i, i) = 1.0 / coeff;
    }
    recompute_basics();
  }

  double nonbasic_value(int c) const {
    return state_[c] == VarState::AtUpper ? cols_[c].upper : 0.0;
  }

  void recompute_basics() {
    // xb = Binv * (rhs - sum over nonbasic-at-upper columns)
    std::vector<double> r = rhs_;
    for (std::size_t c = 0; c < cols_.size(); ++c) {
      if (state_[c] != VarState::AtUpper) continue;
      const double v = cols_[c].upper;
      for (const auto& [i, a] : cols_[c].col.entries) r[i] -= a * v;
    }
    xb_.assign(m_, 0.0);
    for (int i = 0; i < m_; ++i) {
      double acc = 0.0;
      for (int k = 0; k < m_; ++k) acc += binv(i, k) * r[k];
      xb_[i] = acc;
    }
  }

  bool refactorize() {
    // Invert the basis from scratch (Gauss-Jordan with partial pivot).
    std::vector<double> mat(static_cast<std::size_t>(m_) * m_, 0.0);
    for (int p = 0; p < m_; ++p)
      for (const auto& [i, a] : cols_[basis_[p]].col.entries)
        mat[static_cast<std::size_t>(i) * m_ + p] = a;
    std::vector<double> inv(static_cast<std::size_t>(m_) * m_, 0.0);
    for (int i = 0; i < m_; ++i) inv[static_cast<std::size_t>(i) * m_ + i] = 1.0;
    for (int c = 0; c < m_; ++c) {
      int pr = -1;
      double best = 0.0;
      for (int i = c; i < m_; ++i) {
        const double v = std::abs(mat[static_cast<std::size_t>(i) * m_ + c]);
        if (v > best) {
          best = v;
          pr = i;
        }
      }
      if (pr < 0 || best < 1e-12) return false;
      if (pr != c) {
        for (int k = 0; k < m_; ++k) {
          std::swap(mat[static_cast<std::size_t>(pr) * m_ + k], mat[static_cast<std::size_t>(c) * m_ + k]);
          std::swap(inv[static_cast<std::size_t>(pr) * m_ + k], inv[static_cast<std::size_t>(c) * m_ + k]);
        }
      }
      const double piv = mat[static_cast<std::size_t>(c) * m_ + c];
      for (int k = 0; k < m_; ++k) {
        mat[static_cast<std::size_t>(c) * m_ + k] /= piv;
        inv[static_cast<std::size_t>(c) * m_ + k] /= piv;
      }
      for (int i = 0; i < m_; ++i) {
        if (i == c) continue;
        const double f = mat[static_cast<std::size_t>(i) * m_ + c];
        if (f == 0.0) continue;
        for (int k = 0; k < m_; ++k) {
          mat[static_cast<std::size_t>(i) * m_ + k] -= f * mat[static_cast<std::size_t>(c) * m_ + k];
          inv[static_cast<std::size_t>(i) * m_ + k] -= f * inv[static_cast<std::size_t>(c) * m_ + k];
        }
      }
    }
    binv_ = std::move(inv);
    recompute_basics();
    return true;
  }

  double col_cost(int c, bool phase1) const {
    if (phase1) return cols_[c].kind == MapKind::Artificial ? 1.0 : 0.0;
    return cols_[c].kind == MapKind::Artificial ? 0.0 : cols_[c].cost;
  }

  double phase1_objective() const {
    double obj = 0.0;
    for (int i = 0; i < m_; ++i)
      if (cols_[basis_[i]].kind == MapKind::Artificial) obj += xb_[i];
    return obj;
  }

  void compute_duals(bool phase1, std::vector<double>& y) const {
    y.assign(m_, 0.0);
    for (int i = 0; i < m_; ++i) {
      const double cb = col_cost(basis_[i], phase1);
      if (cb == 0.0) continue;
      const double* row = &binv_[static_cast<std::size_t>(i) * m_];
      for (int k = 0; k < m_; ++k) y[k] += cb * row[k];
    }
  }

  double reduced_cost(int c, bool phase1, const std::vector<double>& y) const {
    double d = col_cost(c, phase1);
    for (const auto& [i, a] : cols_[c].col.entries) d -= y[i] * a;
    return d;
  }

  // Returns 0 on optimal, 2 on unbounded, 3 on iteration limit.
  int optimize(bool phase1) {
    const long max_iter = 20000 + 100L * (m_ + static_cast<long>(cols_.size()));
    std::vector<double> y;
    std::vector<double> w(m_);
    const long bland_threshold = 3L * std::max(1, lp_.num_vars);
    while (true) {
      if (++iterations_ > max_iter) return 3;
      if (iterations_ % 512 == 0) {
        if (!refactorize()) return 3;
      }
      compute_duals(phase1, y);

      int enter = -1;
      double best = 0.0;
      for (std::size_t c = 0; c < cols_.size(); ++c) {
        if (state_[c] == VarState::Basic) continue;
        if (cols_[c].upper == 0.0) continue;  // pinned
        if (phase1 == false && cols_[c].kind == MapKind::Artificial) continue;
        const double d = reduced_cost(static_cast<int>(c), phase1, y);
        double score = 0.0;
        if (state_[c] == VarState::AtLower && d < -kOptTol) score = -d;
        if (state_[c] == VarState::AtUpper && d > kOptTol) score = d;
        if (score <= 0.0) continue;
        if (bland_) {
          enter = static_cast<int>(c);
          break;
        }
        if (score > best + 1e-15) {
          best = score;
          enter = static_cast<int>(c);
        }
      }
      if (enter < 0) return 0;  // optimal for this phase

      // FTRAN
      std::fill(w.begin(), w.end(), 0.0);
      for (const auto& [i, a] : cols_[enter].col.entries)
        for (int k = 0; k < m_; ++k) w[k] += binv(k, i) * a;

      const double dir = state_[enter] == VarState::AtLower ? 1.0 : -1.0;
      double limit = cols_[enter].upper;  // bound-flip distance (may be inf)
      int leave_row = -1;
      double leave_piv = 0.0;
      int leave_to_upper = 0;
      for (int i = 0; i < m_; ++i) {
        const double g = dir * w[i];
        const int bc = basis_[i];
        double t;
        int to_upper = 0;
        if (g > kPivotTol) {
          t = xb_[i] / g;
        } else if (g < -kPivotTol && cols_[bc].upper != kInf) {
          t = (cols_[bc].upper - xb_[i]) / (-g);
          to_upper = 1;
        } else {
          continue;
        }
        if (t < 0.0) t = 0.0;
        bool take;
        if (t < limit - 1e-11) {
          take = true;
        } else if (t <= limit + 1e-11 && limit != kInf) {
          // Tie: Bland takes the lowest variable index, otherwise prefer the
          // largest pivot for stability (first hit beats the bound flip).
          if (leave_row < 0)
            take = true;
          else if (bland_)
            take = basis_[i] < basis_[leave_row];
          else
            take = std::abs(w[i]) > std::abs(leave_piv);
        } else {
          take = false;
        }
        if (take) {
          limit = std::min(limit, t);
          leave_row = i;
          leave_piv = w[i];
          leave_to_upper = to_upper;
        }
      }

      if (limit == kInf) return 2;  // no blocking bound anywhere

      if (limit <= kZeroStep)
        ++degenerate_streak_;
      else
        degenerate_streak_ = 0;
      if (!bland_ && degenerate_streak_ > bland_threshold) bland_ = true;

      if (leave_row < 0) {
        // Bound flip: the entering variable traverses its whole range.
        for (int i = 0; i < m_; ++i) xb_[i] -= dir * limit * w[i];
        state_[enter] = state_[enter] == VarState::AtLower ? VarState::AtUpper : VarState::AtLower;
        continue;
      }

      // Pivot: entering replaces basis_[leave_row].
      const int leave_col = basis_[leave_row];
      for (int i = 0; i < m_; ++i) xb_[i] -= dir * limit * w[i];
      const double enter_val =
          state_[enter] == VarState::AtLower ? limit : cols_[enter].upper - limit;
      state_[leave_col] = leave_to_upper ? VarState::AtUpper : VarState::AtLower;
      xb_[leave_row] = enter_val;
      state_[enter] = VarState::Basic;
      basis_[leave_row] = enter;

      const double piv = w[leave_row];
      double* prow = &binv_[static_cast<std::size_t>(leave_row) * m_];
      for (int k = 0; k < m_; ++k) prow[k] /= piv;
      for (int i = 0; i < m_; ++i) {
        if (i == leave_row) continue;
        const double f = w[i];
        if (f == 0.0) continue;
        double* irow = &binv_[static_cast<std::size_t>(i) * m_];
        for (int k = 0; k < m_; ++k) irow[k] -= f * prow[k];
      }
    }
  }

  void retire_artificials() {
    // Pin every artificial at zero; pivot basic ones out where possible.
    for (std::size_t c = first_artificial_; c < cols_.size(); ++c) cols_[c].upper = 0.0;
    for (int r = 0; r < m_; ++r) {
      const int bc = basis_[r];
      if (cols_[bc].kind != MapKind::Artificial) continue;
      const double* row = &binv_[static_cast<std::size_t>(r) * m_];
      int found = -1;
      for (int c = 0; c < first_artificial_; ++c) {
        if (state_[c] == VarState::Basic) continue;
        double piv = 0.0;
        for (const auto& [i, a] : cols_[c].col.entries) piv += row[i] * a;
        if (std::abs(piv) > 1e-7) {
          found = c;
          break;
        }
      }
      if (found < 0) continue;  // dependent row, keep the pinned artificial
      // Degenerate swap: the artificial sits at 0, so no value moves.
      std::vector<double> w(m_, 0.0);
      for (const auto& [i, a] : cols_[found].col.entries)
        for (int k = 0; k < m_; ++k) w[k] += binv(k, i) * a;
      const double piv = w[r];
      if (std::abs(piv) < kPivotTol) continue;
      state_[bc] = VarState::AtLower;
      state_[found] = VarState::Basic;
      basis_[r] = found;
      double* prow = &binv_[static_cast<std::size_t>(r) * m_];
      for (int k = 0; k < m_; ++k) prow[k] /= piv;
      for (int i = 0; i < m_; ++i) {
        if (i == r) continue;
        const double f = w[i];
        if (f == 0.0) continue;
        double* irow = &binv_[static_cast<std::size_t>(i) * m_];
        for (int k = 0; k < m_; ++k) irow[k] -= f * prow[k];
      }
    }
    recompute_basics();
  }

  void extract(SolveResult& res) {
    recompute_basics();
    // Feasibility guard: if the final basic values drifted, refactorize once.
    double worst = 0.0;
    for (int i = 0; i < m_; ++i) {
      const int c = basis_[i];
      worst = std::max(worst, -xb_[i]);
      if (cols_[c].upper != kInf) worst = std::max(worst, xb_[i] - cols_[c].upper);
    }
    if (worst > kFeasTol * (1.0 + rhs_scale_)) {
      refactorize();
    }

    std::vector<double> value(cols_.size(), 0.0);
    for (std::size_t c = 0; c < cols_.size(); ++c) value[c] = nonbasic_value(static_cast<int>(c));
    for (int i = 0; i < m_; ++i) value[basis_[i]] = xb_[i];

    const int n = lp_.num_vars;
    res.primal.assign(n, 0.0);
    for (int j = 0; j < n; ++j) {
      const VarMap& vm = vmap_[j];
      double x = 0.0;
      switch (vm.kind) {
        case MapKind::Shifted: x = vm.shift + value[vm.col]; break;
        case MapKind::Negated: x = vm.shift - value[vm.col]; break;
        default: x = value[vm.col] - value[vm.col2]; break;
      }
      // Snap to bounds when within numerical noise.
      if (std::isfinite(lo_[j]) && std::abs(x - lo_[j]) < 1e-9) x = lo_[j];
      if (std::isfinite(up_[j]) && std::abs(x - up_[j]) < 1e-9) x = up_[j];
      res.primal[j] = x;
    }
    res.objective = 0.0;
    for (int j = 0; j < n; ++j) res.objective += lp_.objective[j] * res.primal[j];

    std::vector<double> y;
    compute_duals(false, y);
    res.row_duals.assign(m_, 0.0);
    for (int i = 0; i < m_; ++i) res.row_duals[i] = y[i];
    res.lower_duals.assign(n, 0.0);
    res.upper_duals.assign(n, 0.0);
    for (int j = 0; j < n; ++j) {
      const VarMap& vm = vmap_[j];
      if (vm.kind == MapKind::SplitPos) continue;  // free variable, no bound duals
      if (state_[vm.col] == VarState::Basic) continue;
      const double d = reduced_cost(vm.col, false, y);
      if (vm.kind == MapKind::Shifted) {
        if (state_[vm.col] == VarState::AtLower) {
          // Fixed variables carry whichever sign the reduced cost has.
          if (d >= 0.0)
            res.lower_duals[j] = d;
          else if (cols_[vm.col].upper == 0.0)
            res.upper_duals[j] = -d;
        } else {
          res.upper_duals[j] = std::max(-d, 0.0);
        }
      } else {  // Negated: internal lower bound is the original upper bound
        res.upper_duals[j] = std::max(d, 0.0);
      }
    }
    res.has_duals = true;
    res.status = SolveStatus::Optimal;
  }
};

}  // namespace

SolveResult solve_lp(const LinearProgram& lp, const std::vector<double>& lower,
                     const std::vector<double>& upper) {
  lp.validate();
  for (int j = 0; j < lp.num_vars; ++j) {
    if (std::isfinite(lower[j]) && std::isfinite(upper[j]) && lower[j] > upper[j]) {
      SolveResult res;
      res.status = SolveStatus::Infeasible;
      return res;
    }
  }
  Simplex s(lp, lower, upper);
  return s.run();
}

SolveResult solve_lp(const LinearProgram& lp) { return solve_lp(lp, lp.lower, lp.upper); }

}  // namespace decopt::opt
