#include "opt/mip.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <queue>

#include "opt/simplex.hpp"

namespace decopt::opt {

namespace {

constexpr double kIntTol = 1e-6;
constexpr double kPrune = 1e-9;

double row_extreme(const Row& r, const std::vector<double>& lo, const std::vector<double>& hi,
                   bool want_min) {
  double acc = 0.0;
  for (std::size_t j = 0; j < r.coeffs.size(); ++j) {
    const double a = r.coeffs[j];
    if (a == 0.0) continue;
    const double pick = (a > 0.0) == want_min ? lo[j] : hi[j];
    if (!std::isfinite(pick)) return want_min ? -kInf : kInf;
    acc += a * pick;
  }
  return acc;
}

// Compile "binary == activation  implies  row" to big-M rows. M is the
// largest violation of the row attainable inside the variable box.
void append_big_m_rows(LinearProgram& lp, const Indicator& ind) {
  const Row& r = ind.implied;
  auto add = [&](Sense sense, double big_m) {
    if (!std::isfinite(big_m))
      throw ModelError("indicator row has unbounded violation; bounds required");
    Row out;
    out.coeffs = r.coeffs;
    out.sense = sense;
    const double m = std::max(big_m, 0.0);
    if (sense == Sense::GreaterEqual) {
      // activation 1:  a'x - M b >= rhs - M ;  activation 0:  a'x + M b >= rhs
      if (ind.activation == 1) {
        out.coeffs[ind.binary_var] -= m;
        out.rhs = r.rhs - m;
      } else {
        out.coeffs[ind.binary_var] += m;
        out.rhs = r.rhs;
      }
    } else {
      // activation 1:  a'x + M b <= rhs + M ;  activation 0:  a'x - M b <= rhs
      if (ind.activation == 1) {
        out.coeffs[ind.binary_var] += m;
        out.rhs = r.rhs + m;
      } else {
        out.coeffs[ind.binary_var] -= m;
        out.rhs = r.rhs;
      }
    }
    lp.rows.push_back(std::move(out));
  };
  if (r.sense == Sense::GreaterEqual || r.sense == Sense::Equal)
    add(Sense::GreaterEqual, r.rhs - row_extreme(r, lp.lower, lp.upper, true));
  if (r.sense == Sense::LessEqual || r.sense == Sense::Equal)
    add(Sense::LessEqual, row_extreme(r, lp.lower, lp.upper, false) - r.rhs);
}

struct Node {
  double bound = 0.0;
  long id = 0;
  int parent = -1;
  int var = -1;           // bound change relative to the parent
  bool tightened_upper = false;
  double value = 0.0;
  int branch_var = -1;    // fractional variable recorded at solve time
  double branch_val = 0.0;
};

struct QueueEntry {
  double bound;
  long id;
  std::size_t index;
  bool operator>(const QueueEntry& o) const {
    if (bound != o.bound) return bound > o.bound;
    return id > o.id;
  }
};

class BranchAndBound {
 public:
  BranchAndBound(const MipModel& mip, const MipOptions& opt) : mip_(mip), opt_(opt) {
    expanded_ = mip.base;
    for (const auto& ind : mip.indicators) append_big_m_rows(expanded_, ind);
  }

  SolveResult run() {
    const auto start = std::chrono::steady_clock::now();
    auto out_of_time = [&] {
      if (!std::isfinite(opt_.time_limit_s)) return false;
      const std::chrono::duration<double> e = std::chrono::steady_clock::now() - start;
      return e.count() > opt_.time_limit_s;
    };

    SolveResult out;
    if (opt_.initial_incumbent) (void)try_incumbent(*opt_.initial_incumbent);

    std::vector<double> lo = expanded_.lower;
    std::vector<double> hi = expanded_.upper;
    Node root;
    root.id = next_id_++;
    if (!solve_node(root, lo, hi, out)) return out;  // infeasible/unbounded root

    std::priority_queue<QueueEntry, std::vector<QueueEntry>, std::greater<QueueEntry>> open;
    if (root.branch_var >= 0) {
      nodes_store_.push_back(root);
      open.push({root.bound, root.id, nodes_store_.size() - 1});
    }

    bool limit_hit = false;
    while (!open.empty()) {
      if (nodes_solved_ >= opt_.node_limit || out_of_time()) {
        limit_hit = true;
        break;
      }
      const QueueEntry top = open.top();
      if (have_incumbent_) {
        const double gap = incumbent_obj_ - top.bound;
        if (gap <= opt_.gap_tol * (1.0 + std::abs(incumbent_obj_)) || gap <= kPrune) break;
      }
      open.pop();
      const Node node = nodes_store_[top.index];

      materialize_bounds(node, lo, hi);
      for (int side = 0; side < 2; ++side) {
        Node child;
        child.parent = static_cast<int>(top.index);
        child.var = node.branch_var;
        child.id = next_id_++;
        const double saved_lo = lo[child.var];
        const double saved_hi = hi[child.var];
        if (side == 0) {
          child.tightened_upper = true;
          child.value = std::floor(node.branch_val);
          hi[child.var] = child.value;
        } else {
          child.tightened_upper = false;
          child.value = std::ceil(node.branch_val);
          lo[child.var] = child.value;
        }
        SolveResult scratch;
        if (solve_node(child, lo, hi, scratch) && child.branch_var >= 0) {
          if (!have_incumbent_ || child.bound < incumbent_obj_ - kPrune) {
            nodes_store_.push_back(child);
            open.push({child.bound, child.id, nodes_store_.size() - 1});
          }
        }
        lo[child.var] = saved_lo;
        hi[child.var] = saved_hi;
      }
    }

    double open_bound = kInf;
    while (!open.empty()) {
      open_bound = std::min(open_bound, open.top().bound);
      open.pop();
    }

    out = SolveResult{};
    out.nodes = nodes_solved_;
    out.node_limit_hit = limit_hit;
    if (have_incumbent_) {
      out.status = SolveStatus::Optimal;
      out.primal = incumbent_;
      out.objective = incumbent_obj_;
      out.best_bound = std::min(open_bound, incumbent_obj_);
      out.has_duals = false;
    } else if (limit_hit) {
      out.status = SolveStatus::Numerical;
      out.best_bound = open_bound;
      out.message = "node limit reached before any integer-feasible point";
    } else {
      out.status = SolveStatus::Infeasible;
    }
    return out;
  }

 private:
  const MipModel& mip_;
  const MipOptions& opt_;
  LinearProgram expanded_;
  std::deque<Node> nodes_store_;
  long next_id_ = 0;
  long nodes_solved_ = 0;
  bool have_incumbent_ = false;
  std::vector<double> incumbent_;
  double incumbent_obj_ = kInf;

  void materialize_bounds(const Node& node, std::vector<double>& lo, std::vector<double>& hi) {
    lo = expanded_.lower;
    hi = expanded_.upper;
    const Node* cur = &node;
    while (true) {
      if (cur->var >= 0) {
        if (cur->tightened_upper)
          hi[cur->var] = std::min(hi[cur->var], cur->value);
        else
          lo[cur->var] = std::max(lo[cur->var], cur->value);
      }
      if (cur->parent < 0) break;
      cur = &nodes_store_[cur->parent];
    }
  }

  int most_fractional(const std::vector<double>& x, double threshold = kIntTol) const {
    int best = -1;
    double best_half_dist = kInf;  // |frac - 0.5|, smaller = more fractional
    for (int j = 0; j < mip_.base.num_vars; ++j) {
      if (!mip_.integrality[j]) continue;
      if (std::abs(x[j] - std::round(x[j])) <= threshold) continue;
      const double d = std::abs(x[j] - std::floor(x[j]) - 0.5);
      if (best < 0 || d < best_half_dist - 1e-15) {
        best = j;
        best_half_dist = d;
      }
    }
    return best;
  }

  // Solves a node LP; fills node.bound / branch data. Returns false and
  // fills `out` for a decisive root status, true otherwise.
  bool solve_node(Node& node, const std::vector<double>& lo, const std::vector<double>& hi,
                  SolveResult& out) {
    ++nodes_solved_;
    SolveResult lp = solve_lp(expanded_, lo, hi);
    if (lp.status == SolveStatus::Unbounded && node.parent < 0 && node.var < 0) {
      out = lp;
      out.nodes = nodes_solved_;
      return false;
    }
    if (lp.status != SolveStatus::Optimal) {
      if (node.parent < 0 && node.var < 0) {
        out = lp;
        out.nodes = nodes_solved_;
        return false;
      }
      return true;  // pruned child (infeasible or numerical)
    }
    node.bound = lp.objective;
    if (have_incumbent_ && node.bound >= incumbent_obj_ - kPrune) {
      node.branch_var = -1;
      return true;  // dominated
    }
    const int frac_var = most_fractional(lp.primal);
    if (frac_var < 0) {
      // Integral within tolerance: snap and recheck against the real model.
      int violated_indicator = -1;
      const Probe probe = try_incumbent(lp.primal, &violated_indicator);
      if (probe == Probe::IndicatorViolated) {
        // Big-M slack let an indicator binary drift: branch on it exactly.
        node.branch_var = mip_.indicators[violated_indicator].binary_var;
        node.branch_val = 0.5;
        return true;
      }
      if (probe == Probe::Rejected) {
        // Snapping disturbed a row: force exactness on the least integral.
        const int v = most_fractional(lp.primal, 1e-12);
        if (v >= 0) {
          node.branch_var = v;
          node.branch_val = lp.primal[v];
          return true;
        }
      }
      node.branch_var = -1;
      return true;
    }
    node.branch_var = frac_var;
    node.branch_val = lp.primal[frac_var];
    return true;
  }

  enum class Probe { Ok, IndicatorViolated, Rejected };

  // Snap integers and verify the original model before accepting a point.
  Probe try_incumbent(const std::vector<double>& x_in, int* violated_indicator = nullptr) {
    std::vector<double> x = x_in;
    for (int j = 0; j < mip_.base.num_vars; ++j) {
      if (!mip_.integrality[j]) continue;
      const double r = std::round(x[j]);
      if (std::abs(x[j] - r) > kIntTol) return Probe::Rejected;
      x[j] = r;
    }
    for (int j = 0; j < mip_.base.num_vars; ++j) {
      if (std::isfinite(mip_.base.lower[j]) && x[j] < mip_.base.lower[j] - 1e-7)
        return Probe::Rejected;
      if (std::isfinite(mip_.base.upper[j]) && x[j] > mip_.base.upper[j] + 1e-7)
        return Probe::Rejected;
    }
    auto row_holds = [&](const Row& r) {
      double act = 0.0;
      for (int j = 0; j < mip_.base.num_vars; ++j) act += r.coeffs[j] * x[j];
      const double tol = 1e-6 * (1.0 + std::abs(r.rhs));
      switch (r.sense) {
        case Sense::LessEqual: return act <= r.rhs + tol;
        case Sense::GreaterEqual: return act >= r.rhs - tol;
        case Sense::Equal: return std::abs(act - r.rhs) <= tol;
      }
      return false;
    };
    for (const auto& r : mip_.base.rows)
      if (!row_holds(r)) return Probe::Rejected;
    for (std::size_t k = 0; k < mip_.indicators.size(); ++k) {
      const auto& ind = mip_.indicators[k];
      if (std::lround(x[ind.binary_var]) != ind.activation) continue;
      if (!row_holds(ind.implied)) {
        if (violated_indicator) *violated_indicator = static_cast<int>(k);
        return Probe::IndicatorViolated;
      }
    }
    double obj = 0.0;
    for (int j = 0; j < mip_.base.num_vars; ++j) obj += mip_.base.objective[j] * x[j];
    if (!have_incumbent_ || obj < incumbent_obj_ - kPrune) {
      have_incumbent_ = true;
      incumbent_ = std::move(x);
      incumbent_obj_ = obj;
    }
    return Probe::Ok;
  }
};

}  // namespace

SolveResult solve_mip(const MipModel& mip, const MipOptions& options) {
  mip.validate();
  BranchAndBound bb(mip, options);
  return bb.run();
}

SolveResult solve_mip(const MipModel& mip, double gap_tol) {
  MipOptions opt;
  opt.gap_tol = gap_tol;
  return solve_mip(mip, opt);
}

}  // namespace decopt::opt
