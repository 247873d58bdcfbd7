// Consensus ADMM state machine over the decoupled system: averaging of
// duplicated tie-line values, dual updates, per-variable adaptive penalties,
// residual tracking, stopping, and the relaxed warm-start run.
#pragma once

#include <cmath>
#include <vector>

#include "dncuc/fixes.hpp"
#include "dncuc/ncuc.hpp"
#include "dncuc/system.hpp"

namespace dncuc {

struct AdmmConfig {
  double eps1 = 1e-3;  // per-area multiplier-change threshold
  double eps2 = 1e-3;  // penalty-weighted consensus-change threshold
  double rho0 = 8.0;
  bool adapt_rho = true;
  double alpha_incr = 2.0;
  double alpha_decr = 2.0;
  double mu = 5.0;
  int rho_freeze_after = 0;  // stop adapting past this iteration; 0 = never
  bool fix_globals = false;  // pin agreed duplicated values once stable
  double consensus_tol = 1e-4;
  int fix_streak = 5;  // iterations the mismatch must stay below tolerance
  int max_iters = 500;

  void validate_or_throw() const {
    if (eps1 <= 0 || eps2 <= 0) throw config_error("stopping thresholds must be positive");
    if (rho0 <= 0) throw config_error("initial penalty must be positive");
    if (adapt_rho && (alpha_incr <= 1 || alpha_decr <= 1 || mu <= 1))
      throw config_error("penalty adaptation factors must exceed 1");
    if (max_iters < 1) throw config_error("max iterations must be at least 1");
  }
};

struct AdmmState {
  int k = 1;
  std::vector<std::vector<double>> Z, Zprev;  // [g][t]
  std::vector<std::vector<std::vector<double>>> lambda, lambda_prev;  // [area][slot][t]
  std::vector<std::vector<double>> rho;   // [g][t]
  std::vector<std::vector<double>> r, s;  // [g][t] per-variable residuals
  std::vector<double> dlambda2;           // [area] squared multiplier change
  double weighted_dz2 = kInf;             // sum of rho * (Z change)^2
  double mismatch2 = 0.0;  // conventional primal mismatch norm, logged only
  std::vector<std::vector<int>> agree_streak;  // [g][t] for global fixing
  int last_consensus_k = 0, last_dual_k = 0;
};

inline AdmmState make_admm_state(const MultiAreaSystem& sys, const AdmmConfig& cfg) {
  cfg.validate_or_throw();
  if (!sys.decoupled()) throw config_error("consensus updates need a decoupled system");
  AdmmState st;
  const int ng = sys.gmap.n_globals, nt = sys.nt;
  auto zeros = [&] { return std::vector<std::vector<double>>(ng, std::vector<double>(nt, 0.0)); };
  st.Z = zeros();
  st.Zprev = zeros();
  st.rho = std::vector<std::vector<double>>(ng, std::vector<double>(nt, cfg.rho0));
  st.r = zeros();
  st.s = zeros();
  st.agree_streak.assign(ng, std::vector<int>(nt, 0));
  st.lambda.resize(sys.areas.size());
  for (size_t a = 0; a < sys.areas.size(); ++a)
    st.lambda[a].assign(sys.gmap.by_area[a].size(), std::vector<double>(nt, 0.0));
  st.lambda_prev = st.lambda;
  st.dlambda2.assign(sys.areas.size(), kInf);
  return st;
}

namespace detail {
inline bool global_selected(const std::vector<int>* globals, int g) {
  if (!globals) return true;
  for (int x : *globals)
    if (x == g) return true;
  return false;
}
}  // namespace detail

// Averaging step: Z becomes the mean of the signed duplicated values mapped
// onto it, and the penalty-scaled Z movement is recorded as the dual
// residual. `globals` restricts the update to a subset (asynchronous mode);
// when restricted, the aggregate norms are left for the caller to manage.
inline void update_consensus(AdmmState& st, const std::vector<SubproblemResult>& results,
                             const MultiAreaSystem& sys,
                             const std::vector<int>* globals = nullptr) {
  const int nt = sys.nt;
  const int ng = sys.gmap.n_globals;
  std::vector<std::vector<double>> acc(ng, std::vector<double>(nt, 0.0));
  std::vector<int> cnt(ng, 0);
  for (size_t a = 0; a < sys.gmap.by_area.size(); ++a) {
    const auto& slots = sys.gmap.by_area[a];
    for (size_t s = 0; s < slots.size(); ++s) {
      const int g = slots[s].global;
      if (!detail::global_selected(globals, g)) continue;
      if (results[a].slot.size() <= s || static_cast<int>(results[a].slot[s].size()) != nt)
        throw solve_error(strfmt("area %d result lacks slot %zu", sys.areas[a].id, s));
      for (int t = 0; t < nt; ++t) acc[g][t] += slots[s].sign * results[a].slot[s][t];
    }
    for (const auto& slot : slots)
      if (detail::global_selected(globals, slot.global)) ++cnt[slot.global];
  }
  double wdz = 0.0;
  for (int g = 0; g < ng; ++g) {
    if (!detail::global_selected(globals, g)) continue;
    for (int t = 0; t < nt; ++t) {
      st.Zprev[g][t] = st.Z[g][t];
      st.Z[g][t] = cnt[g] > 0 ? acc[g][t] / cnt[g] : 0.0;
      const double dz = st.Z[g][t] - st.Zprev[g][t];
      st.s[g][t] = st.rho[g][t] * std::abs(dz);
      wdz += st.rho[g][t] * dz * dz;
    }
  }
  if (!globals) st.weighted_dz2 = wdz;
  st.last_consensus_k = st.k;
}

// Multiplier step, using the penalties in effect before this iteration's
// adaptation. Also records the per-variable primal residual (largest signed
// deviation of any duplicate from the consensus value).
inline void update_duals(AdmmState& st, const std::vector<SubproblemResult>& results,
                         const MultiAreaSystem& sys,
                         const std::vector<int>* globals = nullptr) {
  if (st.last_consensus_k != st.k)
    throw solve_error("dual update requires this iteration's consensus update first");
  const int nt = sys.nt;
  const bool full = globals == nullptr;
  if (full) {
    st.lambda_prev = st.lambda;
    st.mismatch2 = 0.0;
  }
  std::vector<std::vector<double>> devmax(sys.gmap.n_globals, std::vector<double>(nt, 0.0));
  for (size_t a = 0; a < sys.gmap.by_area.size(); ++a) {
    const auto& slots = sys.gmap.by_area[a];
    double d2 = 0.0;
    for (size_t s = 0; s < slots.size(); ++s) {
      const int g = slots[s].global;
      if (!detail::global_selected(globals, g)) continue;
      for (int t = 0; t < nt; ++t) {
        const double dev = slots[s].sign * results[a].slot[s][t] - st.Z[g][t];
        const double step = st.rho[g][t] * dev;
        st.lambda[a][s][t] += step;
        d2 += step * step;
        devmax[g][t] = std::max(devmax[g][t], std::abs(dev));
        if (full) st.mismatch2 += dev * dev;
      }
    }
    if (full) st.dlambda2[a] = d2;
  }
  for (int g = 0; g < sys.gmap.n_globals; ++g)
    if (detail::global_selected(globals, g))
      for (int t = 0; t < nt; ++t) st.r[g][t] = devmax[g][t];
  st.last_dual_k = st.k;
}

// Per-variable penalty adaptation: grow when the consensus mismatch runs
// ahead of the consensus movement, shrink in the opposite case.
inline void update_rho(AdmmState& st, const AdmmConfig& cfg) {
  if (!cfg.adapt_rho) return;
  if (cfg.rho_freeze_after > 0 && st.k >= cfg.rho_freeze_after) return;
  for (size_t g = 0; g < st.rho.size(); ++g) {
    for (size_t t = 0; t < st.rho[g].size(); ++t) {
      if (st.r[g][t] > cfg.mu * st.s[g][t])
        st.rho[g][t] *= cfg.alpha_incr;
      else if (st.s[g][t] > cfg.mu * st.r[g][t])
        st.rho[g][t] /= cfg.alpha_decr;
    }
  }
}

// Converged when every area's multiplier change and the penalty-weighted
// consensus change are small.
inline bool check_stopping(const AdmmState& st, const AdmmConfig& cfg) {
  for (double d2 : st.dlambda2)
    if (d2 > cfg.eps1) return false;
  return st.weighted_dz2 <= cfg.eps2;
}

// Optionally pins duplicated values that have agreed for a sustained streak,
// so later subproblems treat them as constants.
inline void maybe_fix_globals(AdmmState& st, const AdmmConfig& cfg, FixLedger& ledger) {
  if (!cfg.fix_globals) return;
  for (size_t g = 0; g < st.r.size(); ++g) {
    for (size_t t = 0; t < st.r[g].size(); ++t) {
      if (st.r[g][t] <= cfg.consensus_tol)
        ++st.agree_streak[g][t];
      else
        st.agree_streak[g][t] = 0;
      if (st.agree_streak[g][t] >= cfg.fix_streak &&
          !ledger.global_fixed(static_cast<int>(g), static_cast<int>(t)))
        ledger.fix_global(static_cast<int>(g), static_cast<int>(t), st.Z[g][t], st.k);
    }
  }
}

// Builds, augments, and solves every area subproblem against the current
// state. Aborts on an infeasible subproblem (e.g. an over-constrained fix
// ledger) since there is no recovery path.
inline std::vector<SubproblemResult> solve_all_areas(const MultiAreaSystem& sys,
                                                     const AdmmState& st, const FixLedger& fixes,
                                                     bool relax, const SolverInterface& solver) {
  std::vector<SubproblemResult> out;
  out.reserve(sys.areas.size());
  for (size_t a = 0; a < sys.areas.size(); ++a) {
    NcucModel m = build_area_model(sys, static_cast<int>(a), fixes, relax);
    augment_admm(m, sys, st.lambda[a], st.Z, st.rho);
    SubproblemResult r = solve(m, solver);
    if (r.status == SolveStatus::infeasible)
      throw solve_error(strfmt("area %d subproblem infeasible", sys.areas[a].id));
    if (r.status == SolveStatus::time_limit && r.x.empty())
      throw solve_error(strfmt("area %d subproblem hit the node budget with no incumbent",
                               sys.areas[a].id));
    out.push_back(std::move(r));
  }
  return out;
}

// Warm start: run the whole loop on the continuous relaxation from zero
// multipliers, then hand back its final consensus values and multipliers
// with the iteration counter and penalties reset.
inline AdmmState initialize(const MultiAreaSystem& sys, const SolverInterface& solver,
                            const AdmmConfig& cfg) {
  AdmmState st = make_admm_state(sys, cfg);
  if (sys.gmap.n_globals == 0) return st;
  FixLedger none;
  while (st.k <= cfg.max_iters) {
    auto results = solve_all_areas(sys, st, none, /*relax=*/true, solver);
    update_consensus(st, results, sys);
    update_duals(st, results, sys);
    if (check_stopping(st, cfg)) {
      st.k = 1;
      for (auto& row : st.rho) row.assign(row.size(), cfg.rho0);
      st.dlambda2.assign(sys.areas.size(), kInf);
      st.weighted_dz2 = kInf;
      return st;
    }
    update_rho(st, cfg);
    ++st.k;
  }
  throw convergence_error(
      "relaxed warm-start run did not converge; check penalties and thresholds");
}

}  // namespace dncuc
