#pragma once
// Branch-and-bound MILP solver with outer-approximation support for
// separable convex quadratics.  Nodes re-solve with the dual simplex from
// the parent basis; quadratic terms enter through epigraph variables whose
// tangent cuts are appended to the same solver across rounds.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "dncuc/common.hpp"
#include "dncuc/lp.hpp"

namespace dncuc {

// (q/2) * (x[var] - center)^2 added to the objective.
struct QuadTerm {
  int var = -1;
  double q = 0.0;
  double center = 0.0;
};

struct MilpConfig {
  double mip_gap = 1e-3;   // relative gap target, (obj - bound) / max(1, |obj|)
  double int_tol = 1e-6;   // integrality tolerance on branching variables
  std::int64_t max_nodes = 200000;
  int max_oa_rounds = 200;  // outer-approximation passes around branch and bound
  double oa_tol = 1e-6;     // relative epigraph violation accepted at the end
  // Accepted distance between a quadratic's variable and its cut-certified
  // minimizer; 0 turns the check off. A value-only gap test lets flat
  // quadratics park far from their minimum, which matters when the position
  // itself is the answer (consensus penalties).
  double quad_point_tol = 1e-5;
};

struct MilpResult {
  LpStatus status = LpStatus::iter_limit;
  double objective = kInf;  // best incumbent under the true (quadratic) objective
  double bound = -kInf;     // proven lower bound for the true objective
  double gap = kInf;
  std::vector<double> x;    // incumbent over the original variables
  std::int64_t nodes = 0;
  std::int64_t lp_iterations = 0;
  int oa_rounds = 0;
};

class MilpSolver {
 public:
  MilpSolver(LpProblem base, std::vector<int> integer_vars, MilpConfig cfg = {})
      : base_(std::move(base)), ints_(std::move(integer_vars)), cfg_(cfg) {
    for (int j : ints_) {
      if (j < 0 || j >= base_.num_vars())
        throw config_error(strfmt("integer variable %d out of range", j));
    }
    std::sort(ints_.begin(), ints_.end());
    ints_.erase(std::unique(ints_.begin(), ints_.end()), ints_.end());
  }

  // Registers (q/2)(x_j - center)^2.  Terms on the same variable may repeat.
  void add_quadratic(int var, double q, double center) {
    if (var < 0 || var >= base_.num_vars())
      throw config_error(strfmt("quadratic variable %d out of range", var));
    if (q < 0.0) throw config_error("quadratic coefficient must be nonnegative");
    if (q > 0.0) quads_.push_back({var, q, center});
  }

  // Permanently narrows a variable's domain (used to pin binaries).
  void fix_var(int var, double value) {
    if (var < 0 || var >= base_.num_vars())
      throw config_error(strfmt("fixed variable %d out of range", var));
    base_.lb[var] = value;
    base_.ub[var] = value;
  }

  const LpProblem& problem() const { return base_; }

  MilpResult solve() {
    MilpResult res;
    build_extended();
    SimplexSolver solver(ext_);
    incumbent_ = kInf;
    xbest_.clear();
    have_unbounded_ = false;

    for (int round = 0; round < cfg_.max_oa_rounds; ++round) {
      res.oa_rounds = round + 1;
      BnbStats stats;
      branch_and_bound(solver, stats);
      res.nodes += stats.nodes;
      res.lp_iterations = solver.total_iterations();

      if (have_unbounded_) {
        // The epigraph relaxation escaped to infinity.  With quadratics the
        // model may just be missing steep tangents: plant them further out
        // and retry; without quadratics the relaxation verdict still leaves
        // the integer question open and a feasibility probe settles it.
        if (!quads_.empty() && widen_tangents(solver, round)) continue;
        if (!xbest_.empty()) {
          res.status = LpStatus::unbounded;
          return res;
        }
        switch (probe_integer_feasibility()) {
          case LpStatus::optimal: res.status = LpStatus::unbounded; break;
          case LpStatus::infeasible: res.status = LpStatus::infeasible; break;
          default: res.status = LpStatus::iter_limit; break;
        }
        return res;
      }
      if (xbest_.empty()) {
        res.status = stats.hit_node_limit ? LpStatus::iter_limit : LpStatus::infeasible;
        return res;
      }

      const double scale = std::max(1.0, std::abs(incumbent_));
      res.objective = incumbent_;
      res.bound = std::min(stats.bound, incumbent_);
      res.gap = (incumbent_ - res.bound) / scale;
      res.x.assign(xbest_.begin(), xbest_.begin() + base_.num_vars());

      if (stats.hit_node_limit) {
        res.status = LpStatus::iter_limit;
        return res;
      }
      if (res.gap <= cfg_.mip_gap + cfg_.oa_tol + 1e-12) {
        // The value gap is closed; keep refining until the quadratics'
        // variables have also settled in position, meaning no term sags
        // past its cut threshold at either witness point.
        bool moved = false;
        if (!stats.bound_x.empty()) moved = add_tangents_at(solver, stats.bound_x);
        if (add_tangents_at(solver, xbest_)) moved = true;
        if (!moved) {
          res.status = LpStatus::optimal;
          return res;
        }
        continue;
      }
      // The epigraph sags below the true objective somewhere: tighten it at
      // the point holding the bound down and at the incumbent, then rerun.
      bool cut = false;
      if (!stats.bound_x.empty()) cut = add_tangents_at(solver, stats.bound_x);
      if (add_tangents_at(solver, xbest_)) cut = true;
      if (!cut) {
        res.status = LpStatus::iter_limit;  // no cuts left yet gap open
        return res;
      }
    }
    // Out of rounds. The value-gap promise may still be kept even when the
    // position refinement did not fully settle.
    res.status = (!xbest_.empty() && res.gap <= cfg_.mip_gap + cfg_.oa_tol + 1e-12)
                     ? LpStatus::optimal
                     : LpStatus::iter_limit;
    return res;
  }

 private:
  struct BnbStats {
    std::int64_t nodes = 0;
    double bound = kInf;          // min over all leaf relaxation values
    std::vector<double> bound_x;  // relaxation point attaining that minimum
    bool hit_node_limit = false;

    void fold(const LpSolution& rel) {
      if (rel.objective < bound) {
        bound = rel.objective;
        bound_x = rel.x;
      }
    }
  };

  void build_extended() {
    if (built_) {
      // Re-sync bounds with base_ (fix_var may have run between solves).
      for (int j = 0; j < base_.num_vars(); ++j) {
        ext_.lb[j] = base_.lb[j];
        ext_.ub[j] = base_.ub[j];
      }
      return;
    }
    ext_ = base_;
    tvar_.clear();
    for (const QuadTerm& t : quads_) {
      tvar_.push_back(ext_.add_var(0.0, kInf, 1.0));
      // Seed tangents at the variable's bounds (or unit offsets when a side
      // is open) so the epigraph starts out pinched around the vertex.
      const double lo = std::isfinite(base_.lb[t.var]) ? base_.lb[t.var] : t.center - 1.0;
      const double hi = std::isfinite(base_.ub[t.var]) ? base_.ub[t.var] : t.center + 1.0;
      for (double at : {lo, hi}) push_tangent(ext_, tvar_.back(), t, at);
    }
    built_ = true;
  }

  static void push_tangent(LpProblem& p, int tv, const QuadTerm& t, double at) {
    const double slope = t.q * (at - t.center);
    if (slope == 0.0) return;  // t >= 0 is already the lower bound
    const double val = 0.5 * t.q * sqr(at - t.center);
    p.add_row(RowSense::le, slope * at - val, {{t.var, slope}, {tv, -1.0}});
  }

  bool add_tangents_at(SimplexSolver& solver, const std::vector<double>& x) {
    bool any = false;
    const double scale = std::max(1.0, std::abs(incumbent_));
    // Cut anything sagging more than a share of the allowed total, so the
    // summed slack across terms can never hold the gap open without at
    // least one term still being cuttable.
    const double value_thresh =
        cfg_.oa_tol * scale / (4.0 * double(std::max<std::size_t>(1, quads_.size())));
    for (std::size_t k = 0; k < quads_.size(); ++k) {
      const QuadTerm& t = quads_[k];
      const double viol = 0.5 * t.q * sqr(x[t.var] - t.center) - x[tvar_[k]];
      double thresh = value_thresh;
      if (cfg_.quad_point_tol > 0.0) {
        // A sag of (q/2) d^2 means the variable may sit d away from the
        // certified minimizer; keep cutting until d is small. The floor
        // guards against chasing sags below the simplex noise level, where
        // fresh cuts stop moving anything.
        const double pos_thresh = std::max(0.5 * t.q * sqr(cfg_.quad_point_tol), 1e-11 * scale);
        thresh = std::min(thresh, pos_thresh);
      }
      if (viol <= thresh) continue;
      const double slope = t.q * (x[t.var] - t.center);
      if (slope == 0.0) continue;
      const double val = 0.5 * t.q * sqr(x[t.var] - t.center);
      LpRow row;
      row.sense = RowSense::le;
      row.rhs = slope * x[t.var] - val;
      row.coef = {{t.var, slope}, {tvar_[k], -1.0}};
      solver.add_cut(row);
      any = true;
    }
    return any;
  }

  bool widen_tangents(SimplexSolver& solver, int round) {
    // Push tangents out at center +/- 2^round on open-ended quad variables.
    const double reach = std::ldexp(1.0, round + 1);
    if (reach > 1e12) return false;  // not the quadratics' doing; truly unbounded
    bool any = false;
    for (std::size_t k = 0; k < quads_.size(); ++k) {
      const QuadTerm& t = quads_[k];
      for (double sgn : {-1.0, 1.0}) {
        const double bnd = sgn < 0 ? base_.lb[t.var] : base_.ub[t.var];
        if (std::isfinite(bnd)) continue;
        const double at = t.center + sgn * reach;
        const double slope = t.q * (at - t.center);
        LpRow row;
        row.sense = RowSense::le;
        row.rhs = slope * at - 0.5 * t.q * sqr(at - t.center);
        row.coef = {{t.var, slope}, {tvar_[k], -1.0}};
        solver.add_cut(row);
        any = true;
      }
    }
    have_unbounded_ = false;
    return any;
  }

  // An unbounded relaxation says nothing about mixed-integer feasibility
  // (presolve-style bound conflicts on integer columns still lurk), so run a
  // zero-objective search that stops at the first integral point.
  LpStatus probe_integer_feasibility() const {
    LpProblem zp = base_;
    std::fill(zp.c.begin(), zp.c.end(), 0.0);
    zp.c0 = 0.0;
    MilpConfig fcfg;
    fcfg.mip_gap = 1.0;  // any integral point prunes the rest of the tree
    fcfg.int_tol = cfg_.int_tol;
    fcfg.max_nodes = cfg_.max_nodes;
    MilpSolver probe(zp, ints_, fcfg);
    return probe.solve().status;
  }

  double true_objective(const std::vector<double>& x) const {
    double v = base_.c0;
    for (int j = 0; j < base_.num_vars(); ++j) v += base_.c[j] * x[j];
    for (const QuadTerm& t : quads_) v += 0.5 * t.q * sqr(x[t.var] - t.center);
    return v;
  }

  int pick_branch_var(const std::vector<double>& x) const {
    int best = -1;
    double best_frac = cfg_.int_tol;
    for (int j : ints_) {
      const double f = x[j] - std::floor(x[j]);
      const double dist = std::min(f, 1.0 - f);
      if (dist > best_frac) {
        best_frac = dist;
        best = j;
      }
    }
    return best;
  }

  void branch_and_bound(SimplexSolver& solver, BnbStats& stats) {
    dfs(solver, stats, 0);
  }

  void dfs(SimplexSolver& solver, BnbStats& stats, int depth) {
    if (stats.hit_node_limit) return;
    if (++stats.nodes > cfg_.max_nodes) {
      stats.hit_node_limit = true;
      return;
    }
    LpSolution rel = solver.resolve();
    if (rel.status == LpStatus::infeasible) return;
    if (rel.status == LpStatus::unbounded) {
      have_unbounded_ = true;
      return;
    }
    if (rel.status == LpStatus::iter_limit)
      throw solve_error("simplex iteration limit inside branch and bound");

    const double cutoff =
        std::isfinite(incumbent_)
            ? incumbent_ - cfg_.mip_gap * std::max(1.0, std::abs(incumbent_))
            : kInf;
    if (rel.objective >= cutoff) {
      // Not worth branching, but an integral point inside the slack may
      // still beat the incumbent outright; keeping it matters when later
      // tangent rounds sharpen the positions under an unchanged value.
      if (pick_branch_var(rel.x) < 0) {
        const double truth = true_objective(rel.x);
        if (truth < incumbent_) {
          incumbent_ = truth;
          xbest_ = rel.x;
        }
      }
      stats.fold(rel);
      return;
    }

    const int j = pick_branch_var(rel.x);
    if (j < 0) {
      // Integral.  Score it under the true objective (epigraph may undershoot).
      const double truth = true_objective(rel.x);
      if (truth < incumbent_) {
        incumbent_ = truth;
        xbest_ = rel.x;
      }
      stats.fold(rel);
      return;
    }

    const double v = rel.x[j];
    const double l0 = solver.problem().lb[j];
    const double u0 = solver.problem().ub[j];
    SimplexBasis snap = solver.basis();

    const bool down_first = (v - std::floor(v)) <= (std::ceil(v) - v);
    for (int side = 0; side < 2; ++side) {
      const bool down = (side == 0) == down_first;
      if (down)
        solver.change_bounds(j, l0, std::floor(v));
      else
        solver.change_bounds(j, std::ceil(v), u0);
      dfs(solver, stats, depth + 1);
      solver.load_basis(snap);
      if (stats.hit_node_limit || have_unbounded_) {
        // Skipped subtrees still sit above this node's relaxation value.
        stats.fold(rel);
        break;
      }
    }
    solver.change_bounds(j, l0, u0);
  }

  LpProblem base_;
  LpProblem ext_;
  std::vector<int> ints_;
  std::vector<QuadTerm> quads_;
  std::vector<int> tvar_;
  MilpConfig cfg_;
  bool built_ = false;
  bool have_unbounded_ = false;
  double incumbent_ = kInf;
  std::vector<double> xbest_;
};

}  // namespace dncuc
