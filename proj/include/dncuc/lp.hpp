// Bounded-variable revised simplex over sparse columns.
//
// Solves  min c'x + c0  s.t.  rows (<=, >=, ==),  lb <= x <= ub.
// Internally every row gets a slack (a'x + s = rhs with sense-shaped slack
// bounds) plus an artificial column used by phase 1. The basis inverse is a
// sparse LU refreshed periodically and patched between refreshes with
// product-form eta updates. Warm restarts (changed bounds, appended cut
// rows) go through the dual simplex, which is what makes branch-and-bound
// re-solves cheap.
#pragma once

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "dncuc/common.hpp"

namespace dncuc {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class RowSense { le, ge, eq };
enum class LpStatus { optimal, infeasible, unbounded, iter_limit };

inline const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::unbounded: return "unbounded";
    default: return "iter_limit";
  }
}

struct LpRow {
  RowSense sense = RowSense::le;
  double rhs = 0.0;
  std::vector<std::pair<int, double>> coef;  // (column, value), column < n
};

struct LpProblem {
  std::vector<double> c, lb, ub;
  std::vector<LpRow> rows;
  double c0 = 0.0;  // constant objective offset

  int num_vars() const { return static_cast<int>(c.size()); }
  int num_rows() const { return static_cast<int>(rows.size()); }

  int add_var(double l, double u, double cost) {
    lb.push_back(l);
    ub.push_back(u);
    c.push_back(cost);
    return num_vars() - 1;
  }

  int add_row(RowSense sense, double rhs, std::vector<std::pair<int, double>> coef) {
    rows.push_back({sense, rhs, std::move(coef)});
    return num_rows() - 1;
  }
};

enum class VarStatus : unsigned char { basic, at_lower, at_upper, free_zero };

struct SimplexBasis {
  std::vector<int> basic;
  std::vector<VarStatus> vstat;
};

struct LpSolution {
  LpStatus status = LpStatus::iter_limit;
  double objective = 0.0;
  std::vector<double> x;        // structural variables
  std::vector<double> y;        // row duals (<= rows non-positive, >= non-negative)
  std::vector<double> redcost;  // structural reduced costs c - A'y
  std::vector<double> farkas;   // row multipliers certifying infeasibility
  std::vector<double> ray;      // structural unbounded direction
  long iterations = 0;
};

class SimplexSolver {
public:
  explicit SimplexSolver(LpProblem prob) : prob_(std::move(prob)) { build(); }

  const LpProblem& problem() const { return prob_; }

  // Cold solve: phase 1 from the all-artificial basis, then phase 2.
  LpSolution solve() {
    reset_to_artificial_basis();
    LpSolution sol;
    if (!phase1(sol)) return finish(sol);
    return finish(phase2(sol));
  }

  // Tighten/restore a structural variable's bounds. Keeps dual feasibility,
  // so a following resolve() is cheap.
  void change_bounds(int j, double l, double u) {
    prob_.lb[j] = l;
    prob_.ub[j] = u;
    lb_[j] = l;
    ub_[j] = u;
    if (vstat_[j] == VarStatus::basic) return;  // dual loop repairs any violation
    if (vstat_[j] == VarStatus::at_lower) {
      if (std::isfinite(l)) x_[j] = l;
      else { vstat_[j] = VarStatus::free_zero; x_[j] = 0.0; }
    } else if (vstat_[j] == VarStatus::at_upper) {
      if (std::isfinite(u)) x_[j] = u;
      else { vstat_[j] = VarStatus::free_zero; x_[j] = 0.0; }
    }
    if (vstat_[j] != VarStatus::free_zero) {
      if (x_[j] < l) { x_[j] = l; vstat_[j] = VarStatus::at_lower; }
      if (x_[j] > u) { x_[j] = u; vstat_[j] = VarStatus::at_upper; }
    }
    basics_stale_ = true;
  }

  // Appends a row (its slack enters the basis); use resolve() afterwards.
  int add_cut(const LpRow& row) {
    int i = prob_.add_row(row.sense, row.rhs, row.coef);
    append_row_columns(i);
    basic_.push_back(slack_col_[i]);
    vstat_[slack_col_[i]] = VarStatus::basic;
    factor_stale_ = true;
    basics_stale_ = true;
    return i;
  }

  // Dual simplex from the current basis. Falls back to a cold solve when the
  // warm basis is unusable.
  LpSolution resolve() {
    for (int j = 0; j < ncols_; ++j) {
      if (lb_[j] > ub_[j] + 1e-9) {  // emptied by branching
        LpSolution sol;
        sol.status = LpStatus::infeasible;
        return finish(sol);
      }
    }
    LpSolution sol;
    if (!warm_start_ready()) return solve();
    return finish(dual_loop(sol));
  }

  SimplexBasis basis() const { return {basic_, vstat_}; }

  void load_basis(const SimplexBasis& b) {
    basic_ = b.basic;
    vstat_ = b.vstat;
    vstat_.resize(static_cast<size_t>(ncols_), VarStatus::at_lower);
    for (int j = 0; j < ncols_; ++j) {
      switch (vstat_[j]) {
        case VarStatus::at_lower: x_[j] = std::isfinite(lb_[j]) ? lb_[j] : 0.0; break;
        case VarStatus::at_upper: x_[j] = std::isfinite(ub_[j]) ? ub_[j] : 0.0; break;
        case VarStatus::free_zero: x_[j] = 0.0; break;
        case VarStatus::basic: break;
      }
    }
    factor_stale_ = true;
    basics_stale_ = true;
  }

  long total_iterations() const { return iters_; }

private:
  static constexpr double kFeasTol = 1e-7;   // primal feasibility
  static constexpr double kDualTol = 1e-7;   // reduced-cost optimality
  static constexpr double kPivotTol = 1e-9;  // smallest acceptable pivot
  static constexpr int kRefactorEvery = 64;
  static constexpr long kMaxIters = 200000;

  // ----- setup -----------------------------------------------------------

  void build() {
    nstruct_ = prob_.num_vars();
    ncols_ = 0;
    cols_.clear();
    lb_.clear();
    ub_.clear();
    cost_.clear();
    is_art_.clear();
    slack_col_.clear();
    art_col_.clear();
    x_.clear();
    vstat_.clear();
    for (int j = 0; j < nstruct_; ++j)
      push_col({}, prob_.lb[j], prob_.ub[j], prob_.c[j], false);
    for (int i = 0; i < prob_.num_rows(); ++i) append_row_columns(i);
    basic_.clear();
    factor_stale_ = true;
    basics_stale_ = true;
  }

  int push_col(std::vector<std::pair<int, double>> entries, double l, double u,
               double cost, bool art) {
    cols_.push_back(std::move(entries));
    lb_.push_back(l);
    ub_.push_back(u);
    cost_.push_back(cost);
    is_art_.push_back(art);
    x_.push_back(std::isfinite(l) ? l : (std::isfinite(u) ? u : 0.0));
    vstat_.push_back(std::isfinite(l)
                         ? VarStatus::at_lower
                         : (std::isfinite(u) ? VarStatus::at_upper
                                             : VarStatus::free_zero));
    return ncols_++;
  }

  // Adds row i's structural coefficients plus its slack and artificial.
  void append_row_columns(int i) {
    if (static_cast<int>(slack_col_.size()) != i)
      throw solve_error("rows must be appended in order");
    const LpRow& row = prob_.rows[i];
    for (const auto& [j, v] : row.coef) {
      if (j < 0 || j >= nstruct_) throw solve_error("row references unknown column");
      cols_[j].push_back({i, v});
    }
    double sl = 0.0, su = 0.0;
    if (row.sense == RowSense::le) su = kInf;
    if (row.sense == RowSense::ge) sl = -kInf;
    slack_col_.push_back(push_col({{i, 1.0}}, sl, su, 0.0, false));
    // Artificial: fixed at zero except while phase 1 runs.
    art_col_.push_back(push_col({{i, 1.0}}, 0.0, 0.0, 0.0, true));
  }

  void reset_to_artificial_basis() {
    int m = prob_.num_rows();
    basic_.assign(static_cast<size_t>(m), -1);
    for (int j = 0; j < ncols_; ++j) {
      if (is_art_[j]) continue;
      bool fl = std::isfinite(lb_[j]), fu = std::isfinite(ub_[j]);
      if (fl && fu) {
        vstat_[j] = (x_[j] - lb_[j] <= ub_[j] - x_[j]) ? VarStatus::at_lower
                                                       : VarStatus::at_upper;
        x_[j] = vstat_[j] == VarStatus::at_lower ? lb_[j] : ub_[j];
      } else if (fl) {
        vstat_[j] = VarStatus::at_lower;
        x_[j] = lb_[j];
      } else if (fu) {
        vstat_[j] = VarStatus::at_upper;
        x_[j] = ub_[j];
      } else {
        vstat_[j] = VarStatus::free_zero;
        x_[j] = 0.0;
      }
    }
    // Artificial i covers row i's residual; its sign keeps the start value >= 0.
    for (int i = 0; i < m; ++i) {
      double resid = prob_.rows[i].rhs;
      for (const auto& [j, v] : prob_.rows[i].coef) resid -= v * x_[j];
      resid -= x_[slack_col_[i]];
      int a = art_col_[i];
      cols_[a][0].second = resid < 0 ? -1.0 : 1.0;
      lb_[a] = 0.0;
      ub_[a] = kInf;
      x_[a] = std::fabs(resid);
      basic_[i] = a;
      vstat_[a] = VarStatus::basic;
    }
    factor_stale_ = true;
    basics_stale_ = true;
  }

  // ----- factorization ---------------------------------------------------

  void refactor() {
    int m = prob_.num_rows();
    etas_.clear();
    factor_stale_ = false;
    if (m == 0) return;
    std::vector<Eigen::Triplet<double>> trip;
    for (int i = 0; i < m; ++i)
      for (const auto& [r, v] : cols_[basic_[i]]) trip.push_back({r, i, v});
    Eigen::SparseMatrix<double> B(m, m);
    B.setFromTriplets(trip.begin(), trip.end());
    lu_.compute(B);
    if (lu_.info() != Eigen::Success) throw solve_error("basis factorization failed");
  }

  // v := B^-1 v
  void ftran(std::vector<double>& v) const {
    int m = prob_.num_rows();
    if (m == 0) return;
    Eigen::VectorXd w = lu_.solve(Eigen::Map<Eigen::VectorXd>(v.data(), m));
    for (const auto& eta : etas_) {
      double piv = w[eta.row] / eta.pivot;
      if (piv != 0.0)
        for (const auto& [i, d] : eta.sparse) w[i] -= d * piv;
      w[eta.row] = piv;
    }
    for (int i = 0; i < m; ++i) v[i] = w[i];
  }

  // v := B^-T v
  void btran(std::vector<double>& v) const {
    int m = prob_.num_rows();
    if (m == 0) return;
    Eigen::VectorXd w = Eigen::Map<Eigen::VectorXd>(v.data(), m);
    for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
      double acc = w[it->row];
      for (const auto& [i, d] : it->sparse) acc -= d * w[i];
      w[it->row] = acc / it->pivot;
    }
    Eigen::VectorXd out = lu_.adjoint().solve(w);
    for (int i = 0; i < m; ++i) v[i] = out[i];
  }

  void append_eta(int r, const std::vector<double>& w) {
    Eta e;
    e.row = r;
    e.pivot = w[r];
    for (int i = 0; i < static_cast<int>(w.size()); ++i)
      if (i != r && w[i] != 0.0) e.sparse.push_back({i, w[i]});
    etas_.push_back(std::move(e));
  }

  void ensure_factor() {
    if (factor_stale_ || static_cast<int>(etas_.size()) > kRefactorEvery) refactor();
  }

  void compute_basics() {
    int m = prob_.num_rows();
    ensure_factor();
    std::vector<double> rhs(static_cast<size_t>(m), 0.0);
    for (int i = 0; i < m; ++i) rhs[i] = prob_.rows[i].rhs;
    for (int j = 0; j < ncols_; ++j) {
      if (vstat_[j] == VarStatus::basic || x_[j] == 0.0) continue;
      for (const auto& [r, v] : cols_[j]) rhs[r] -= v * x_[j];
    }
    ftran(rhs);
    for (int i = 0; i < m; ++i) x_[basic_[i]] = rhs[i];
    basics_stale_ = false;
  }

  // ----- pricing helpers --------------------------------------------------

  std::vector<double> duals(const std::vector<double>& cost) const {
    int m = prob_.num_rows();
    std::vector<double> y(static_cast<size_t>(m), 0.0);
    for (int i = 0; i < m; ++i) y[i] = cost[basic_[i]];
    btran(y);
    return y;
  }

  double redcost_of(int j, const std::vector<double>& y,
                    const std::vector<double>& cost) const {
    double d = cost[j];
    for (const auto& [r, v] : cols_[j]) d -= y[r] * v;
    return d;
  }

  // ----- primal simplex ---------------------------------------------------

  LpStatus primal_loop(const std::vector<double>& cost, bool phase_one,
                       LpSolution& sol) {
    int m = prob_.num_rows();
    if (m == 0) {  // pure-bounds problem: rest each var at its cheap bound
      for (int j = 0; j < nstruct_; ++j) {
        if (cost[j] < -kDualTol) {
          if (!std::isfinite(ub_[j])) {
            sol.ray.assign(static_cast<size_t>(nstruct_), 0.0);
            sol.ray[j] = 1.0;
            return LpStatus::unbounded;
          }
          x_[j] = ub_[j];
          vstat_[j] = VarStatus::at_upper;
        } else if (cost[j] > kDualTol) {
          if (!std::isfinite(lb_[j])) {
            sol.ray.assign(static_cast<size_t>(nstruct_), 0.0);
            sol.ray[j] = -1.0;
            return LpStatus::unbounded;
          }
          x_[j] = lb_[j];
          vstat_[j] = VarStatus::at_lower;
        }
      }
      return LpStatus::optimal;
    }

    int degen_run = 0;
    std::vector<double> w(static_cast<size_t>(m));
    for (long it = 0; it < kMaxIters; ++it, ++iters_, ++sol.iterations) {
      ensure_factor();
      if (basics_stale_) compute_basics();
      bool bland = degen_run > 2 * (ncols_ + m);
      std::vector<double> y = duals(cost);

      // Pricing: Dantzig by default, Bland after a long degenerate run.
      int q = -1, delta_q = 0;
      double best = kDualTol;
      for (int j = 0; j < ncols_; ++j) {
        if (vstat_[j] == VarStatus::basic || lb_[j] == ub_[j]) continue;
        double d = redcost_of(j, y, cost);
        int delta = 0;
        if (vstat_[j] == VarStatus::at_lower && d < -kDualTol) delta = 1;
        else if (vstat_[j] == VarStatus::at_upper && d > kDualTol) delta = -1;
        else if (vstat_[j] == VarStatus::free_zero && std::fabs(d) > kDualTol)
          delta = d < 0 ? 1 : -1;
        if (!delta) continue;
        if (bland) { q = j; delta_q = delta; break; }
        if (std::fabs(d) > best) { best = std::fabs(d); q = j; delta_q = delta; }
      }
      if (q < 0) return LpStatus::optimal;

      std::fill(w.begin(), w.end(), 0.0);
      for (const auto& [r, v] : cols_[q]) w[r] = v;
      ftran(w);

      // Ratio test: entering moves by delta_q * t, t >= 0; basic i moves by
      // -delta_q * w[i] * t. Stop at the first bound hit.
      double t_best = kInf;
      int leave = -1;
      double leave_to = 0.0;
      bool flip = false;
      if (ub_[q] - lb_[q] < kInf) {
        t_best = ub_[q] - lb_[q];
        flip = true;
      }
      for (int i = 0; i < m; ++i) {
        if (std::fabs(w[i]) <= kPivotTol) continue;
        int b = basic_[i];
        double dir = -delta_q * w[i];
        double t, to;
        if (dir > 0) {
          if (!std::isfinite(ub_[b])) continue;
          t = (ub_[b] - x_[b]) / dir;
          to = ub_[b];
        } else {
          if (!std::isfinite(lb_[b])) continue;
          t = (lb_[b] - x_[b]) / dir;
          to = lb_[b];
        }
        if (t < 0.0) t = 0.0;  // tiny drift past a bound
        if (t < t_best - 1e-12) {
          t_best = t;
          leave = i;
          leave_to = to;
          flip = false;
        } else if (!flip && leave >= 0 && t < t_best + 1e-12) {
          bool prefer = bland ? basic_[i] < basic_[leave]
                              : std::fabs(w[i]) > std::fabs(w[leave]);
          if (prefer) { leave = i; leave_to = to; }
        }
      }

      if (t_best == kInf) {
        sol.ray.assign(static_cast<size_t>(nstruct_), 0.0);
        if (q < nstruct_) sol.ray[q] = delta_q;
        for (int i = 0; i < m; ++i)
          if (basic_[i] < nstruct_ && std::fabs(w[i]) > kPivotTol)
            sol.ray[basic_[i]] = -delta_q * w[i];
        return LpStatus::unbounded;
      }

      degen_run = t_best < 1e-10 ? degen_run + 1 : 0;

      double step = delta_q * t_best;
      for (int i = 0; i < m; ++i)
        if (w[i] != 0.0) x_[basic_[i]] -= step * w[i];
      x_[q] += step;
      if (flip) {
        vstat_[q] = delta_q > 0 ? VarStatus::at_upper : VarStatus::at_lower;
        x_[q] = vstat_[q] == VarStatus::at_upper ? ub_[q] : lb_[q];
      } else {
        int b = basic_[leave];
        x_[b] = leave_to;
        vstat_[b] = (std::isfinite(ub_[b]) && leave_to == ub_[b] && lb_[b] != ub_[b])
                        ? VarStatus::at_upper
                        : VarStatus::at_lower;
        if (phase_one && is_art_[b]) {  // never let an artificial re-enter
          lb_[b] = 0.0;
          ub_[b] = 0.0;
          x_[b] = 0.0;
        }
        basic_[leave] = q;
        vstat_[q] = VarStatus::basic;
        append_eta(leave, w);
      }
    }
    return LpStatus::iter_limit;
  }

  // Phase 1: minimize the artificial sum. Returns false (sol filled) when
  // infeasible or out of iterations.
  bool phase1(LpSolution& sol) {
    int m = prob_.num_rows();
    if (m == 0) return true;
    compute_basics();
    std::vector<double> cost(static_cast<size_t>(ncols_), 0.0);
    for (int a : art_col_) cost[a] = 1.0;
    LpStatus st = primal_loop(cost, true, sol);
    if (st == LpStatus::iter_limit) {
      sol.status = st;
      return false;
    }
    double infeas = 0.0;
    for (int a : art_col_) infeas += std::fabs(x_[a]);
    if (infeas > 1e-6) {
      sol.status = LpStatus::infeasible;
      sol.farkas = duals(cost);  // prices the impossible row combination
      return false;
    }
    // Swap zero-level artificials out of the basis where a usable pivot
    // exists; a row with none is redundant and keeps its artificial, fixed.
    std::vector<double> rho(static_cast<size_t>(m));
    std::vector<double> w(static_cast<size_t>(m));
    for (int i = 0; i < m; ++i) {
      if (!is_art_[basic_[i]]) continue;
      ensure_factor();
      std::fill(rho.begin(), rho.end(), 0.0);
      rho[i] = 1.0;
      btran(rho);
      int enter = -1;
      double best = 100 * kPivotTol;
      for (int j = 0; j < ncols_; ++j) {
        if (vstat_[j] == VarStatus::basic || is_art_[j] || lb_[j] == ub_[j]) continue;
        double alpha = 0.0;
        for (const auto& [r, v] : cols_[j]) alpha += rho[r] * v;
        if (std::fabs(alpha) > best) { best = std::fabs(alpha); enter = j; }
      }
      if (enter < 0) continue;
      std::fill(w.begin(), w.end(), 0.0);
      for (const auto& [r, v] : cols_[enter]) w[r] = v;
      ftran(w);
      int a = basic_[i];
      basic_[i] = enter;
      vstat_[enter] = VarStatus::basic;  // enters at its current bound value
      vstat_[a] = VarStatus::at_lower;
      x_[a] = 0.0;
      append_eta(i, w);
    }
    for (int a : art_col_) {
      lb_[a] = 0.0;
      ub_[a] = 0.0;
      if (vstat_[a] != VarStatus::basic) x_[a] = 0.0;
    }
    basics_stale_ = true;
    return true;
  }

  LpSolution& phase2(LpSolution& sol) {
    compute_basics();
    sol.status = primal_loop(cost_, false, sol);
    return sol;
  }

  // ----- dual simplex -----------------------------------------------------

  // Refactorizes and repairs dual feasibility by bound flips; false means the
  // caller should fall back to a cold solve.
  bool warm_start_ready() {
    if (basic_.size() != static_cast<size_t>(prob_.num_rows())) return false;
    try {
      refactor();
    } catch (const solve_error&) {
      return false;
    }
    compute_basics();
    std::vector<double> y = duals(cost_);
    for (int j = 0; j < ncols_; ++j) {
      if (vstat_[j] == VarStatus::basic || lb_[j] == ub_[j]) continue;
      double d = redcost_of(j, y, cost_);
      if (vstat_[j] == VarStatus::at_lower && d < -kDualTol) {
        if (!std::isfinite(ub_[j])) return false;
        vstat_[j] = VarStatus::at_upper;
        x_[j] = ub_[j];
        basics_stale_ = true;
      } else if (vstat_[j] == VarStatus::at_upper && d > kDualTol) {
        if (!std::isfinite(lb_[j])) return false;
        vstat_[j] = VarStatus::at_lower;
        x_[j] = lb_[j];
        basics_stale_ = true;
      } else if (vstat_[j] == VarStatus::free_zero && std::fabs(d) > kDualTol) {
        return false;
      }
    }
    if (basics_stale_) compute_basics();
    return true;
  }

  LpSolution& dual_loop(LpSolution& sol) {
    int m = prob_.num_rows();
    std::vector<double> rho(static_cast<size_t>(m));
    std::vector<double> w(static_cast<size_t>(m));
    for (long it = 0; it < kMaxIters; ++it, ++iters_, ++sol.iterations) {
      ensure_factor();
      if (basics_stale_) compute_basics();

      int r = -1;
      double viol = kFeasTol;
      bool below = false;
      for (int i = 0; i < m; ++i) {
        int b = basic_[i];
        double vb = lb_[b] - x_[b], va = x_[b] - ub_[b];
        if (vb > viol) { viol = vb; r = i; below = true; }
        if (va > viol) { viol = va; r = i; below = false; }
      }
      if (r < 0) {
        sol.status = LpStatus::optimal;
        return sol;
      }

      std::fill(rho.begin(), rho.end(), 0.0);
      rho[r] = 1.0;
      btran(rho);
      std::vector<double> y = duals(cost_);

      // x_B[r] must rise (below) or fall; dx_Br = -alpha_j dx_j restricts the
      // admissible entering columns. The dual ratio |d_j| / |alpha_j| keeps
      // the remaining reduced costs sign-feasible.
      int q = -1;
      double best_ratio = kInf, alpha_q = 0.0;
      for (int j = 0; j < ncols_; ++j) {
        if (vstat_[j] == VarStatus::basic || lb_[j] == ub_[j]) continue;
        double alpha = 0.0;
        for (const auto& [rr, v] : cols_[j]) alpha += rho[rr] * v;
        if (std::fabs(alpha) <= kPivotTol) continue;
        bool ok;
        if (below)
          ok = (vstat_[j] == VarStatus::at_lower && alpha < 0) ||
               (vstat_[j] == VarStatus::at_upper && alpha > 0) ||
               vstat_[j] == VarStatus::free_zero;
        else
          ok = (vstat_[j] == VarStatus::at_lower && alpha > 0) ||
               (vstat_[j] == VarStatus::at_upper && alpha < 0) ||
               vstat_[j] == VarStatus::free_zero;
        if (!ok) continue;
        double ratio = std::fabs(redcost_of(j, y, cost_)) / std::fabs(alpha);
        if (ratio < best_ratio - 1e-12 ||
            (ratio < best_ratio + 1e-12 &&
             (q < 0 || std::fabs(alpha) > std::fabs(alpha_q)))) {
          best_ratio = ratio;
          q = j;
          alpha_q = alpha;
        }
      }
      if (q < 0) {  // dual unbounded: the row combination rho is a certificate
        sol.status = LpStatus::infeasible;
        sol.farkas.assign(static_cast<size_t>(m), 0.0);
        double s = below ? -1.0 : 1.0;
        for (int i = 0; i < m; ++i) sol.farkas[i] = s * rho[i];
        return sol;
      }

      int b = basic_[r];
      double target = below ? lb_[b] : ub_[b];
      double dxq = (x_[b] - target) / alpha_q;

      std::fill(w.begin(), w.end(), 0.0);
      for (const auto& [rr, v] : cols_[q]) w[rr] = v;
      ftran(w);

      for (int i = 0; i < m; ++i)
        if (w[i] != 0.0) x_[basic_[i]] -= dxq * w[i];
      x_[q] += dxq;
      x_[b] = target;
      vstat_[b] = target == lb_[b] ? VarStatus::at_lower : VarStatus::at_upper;
      basic_[r] = q;
      vstat_[q] = VarStatus::basic;
      append_eta(r, w);
    }
    sol.status = LpStatus::iter_limit;
    return sol;
  }

  // ----- wrap-up ----------------------------------------------------------

  LpSolution& finish(LpSolution& sol) {
    sol.x.assign(static_cast<size_t>(nstruct_), 0.0);
    if (sol.status == LpStatus::optimal || sol.status == LpStatus::unbounded) {
      for (int j = 0; j < nstruct_; ++j) sol.x[j] = x_[j];
      double obj = prob_.c0;
      for (int j = 0; j < nstruct_; ++j) obj += prob_.c[j] * x_[j];
      sol.objective = obj;
    }
    if (sol.status == LpStatus::optimal) {
      if (prob_.num_rows() > 0) {
        sol.y = duals(cost_);
        sol.redcost.assign(static_cast<size_t>(nstruct_), 0.0);
        for (int j = 0; j < nstruct_; ++j)
          sol.redcost[j] = redcost_of(j, sol.y, cost_);
      } else {
        sol.redcost = prob_.c;
      }
    }
    return sol;
  }
  LpSolution finish(LpSolution&& sol) { return std::move(finish(sol)); }

  struct Eta {
    int row = 0;
    double pivot = 1.0;
    std::vector<std::pair<int, double>> sparse;  // off-pivot entries
  };

  LpProblem prob_;
  int nstruct_ = 0;
  int ncols_ = 0;
  std::vector<std::vector<std::pair<int, double>>> cols_;
  std::vector<double> lb_, ub_, cost_, x_;
  std::vector<char> is_art_;
  std::vector<VarStatus> vstat_;
  std::vector<int> basic_, slack_col_, art_col_;
  mutable Eigen::SparseLU<Eigen::SparseMatrix<double>> lu_;  // FTRAN/BTRAN are const
  std::vector<Eta> etas_;
  bool factor_stale_ = true;
  bool basics_stale_ = true;
  long iters_ = 0;
};

}  // namespace dncuc
