// Coordination runtimes over the consensus loop: the synchronous mode that
// advances every area in lockstep, the asynchronous mode that fires partial
// consensus updates on a simulated event clock, and the centralized benchmark
// the distributed costs are judged against. Both distributed modes share the
// trace format, the fix ledger, and the final solution audit.
#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <queue>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "dncuc/admm.hpp"
#include "dncuc/audit.hpp"
#include "dncuc/common.hpp"
#include "dncuc/fixes.hpp"
#include "dncuc/ncuc.hpp"
#include "dncuc/oscillation.hpp"
#include "dncuc/system.hpp"

namespace dncuc {

// Asynchronous schedule knobs. S is the number of areas that must deliver
// fresh results before a global variable's consensus update fires; tau/T
// bounds how far any area may run ahead: an area may start solve m+1 only
// while (m+1) * tau <= (G+1) * T, with G the count of completed global
// iterations, so the long-run rate ratio against the slowest area stays
// within T/tau and tau = T degenerates to lockstep.
struct ScheduleConfig {
  int S = 1;
  int tau = 1;
  int T = 1;
  std::vector<double> latency;  // simulated seconds per solve, one per area;
                                // empty = use each solve's measured time
  unsigned seed = 0;            // breaks ties between simultaneous completions

  void validate_or_throw(const MultiAreaSystem& sys) const {
    int smax = 0;
    std::vector<int> cnt(sys.gmap.n_globals, 0);
    for (const auto& slots : sys.gmap.by_area)
      for (const auto& sl : slots) ++cnt[sl.global];
    for (int c : cnt) smax = std::max(smax, c);
    if (sys.gmap.n_globals > 0 && (S < 1 || S > smax))
      throw config_error(strfmt("S=%d outside [1, %d] areas per shared variable", S, smax));
    if (tau < 1 || T < tau)
      throw config_error(strfmt("bounded delay needs 1 <= tau <= T, got %d/%d", tau, T));
    if (!latency.empty()) {
      if (latency.size() != sys.areas.size())
        throw config_error("latency list must give one entry per area");
      for (double l : latency)
        if (!(l > 0.0)) throw config_error("injected latencies must be positive");
    }
  }
};

// One trace line per area per global iteration.
struct TraceRow {
  int k = 0;
  int area = 0;  // external area id
  double objective = 0.0;
  double solve_seconds = 0.0;
  double r_norm2 = 0.0;  // ||lambda step||^2 for this area
  double s_norm2 = 0.0;  // rho-weighted consensus movement, whole system
  double rho_min = 0.0;
  double rho_max = 0.0;
  int fixed_binaries = 0;
  int fixed_globals = 0;
  double mismatch2 = 0.0;  // unweighted squared deviation from consensus
  int solves = 1;          // area completions inside this global iteration
};

// Consensus firing record (async): which global updated, when, and how many
// areas had delivered fresh values since its previous update.
struct FiringLog {
  double time = 0.0;
  int global = -1;
  int fresh = 0;
};

// Area solve record (async): simulated start and completion times.
struct SolveLog {
  int area = -1;
  double start = 0.0;
  double finish = 0.0;
};

struct RunReport {
  bool converged = false;
  int iterations = 0;             // global iterations (slowest area's count)
  double simulated_seconds = 0.0;
  double real_solve_seconds = 0.0;
  double tcost_dec = 0.0;         // true cost of the final distributed schedule
  double tcost_cen = 0.0;
  bool benchmarked = false;
  double diff_pct = 0.0;          // |dec - cen| / cen * 100, once benchmarked
  std::vector<TraceRow> trace;
  FixLedger ledger;
  std::vector<SubproblemResult> schedule;  // final per-area results
  AdmmState state;                         // final consensus values and duals
  std::vector<double> boundaries;          // async: sim time of each iteration end
  std::vector<FiringLog> firings;          // async: consensus updates
  std::vector<SolveLog> solves;            // async: area completions
};

inline void write_trace_csv(const RunReport& rep, std::ostream& os) {
  os << "k,area,objective,solve_seconds,r_norm2,s_norm2,rho_min,rho_max,"
        "fixed_binaries,fixed_globals,mismatch2,solves\n";
  for (const TraceRow& r : rep.trace)
    os << r.k << ',' << r.area << ',' << strfmt("%.9g", r.objective) << ','
       << strfmt("%.9g", r.solve_seconds) << ',' << strfmt("%.9g", r.r_norm2) << ','
       << strfmt("%.9g", r.s_norm2) << ',' << strfmt("%.9g", r.rho_min) << ','
       << strfmt("%.9g", r.rho_max) << ',' << r.fixed_binaries << ',' << r.fixed_globals
       << ',' << strfmt("%.9g", r.mismatch2) << ',' << r.solves << '\n';
}

// Per-iteration convergence summary: worst-area multiplier step plus the
// consensus movement norm, the quantities the stopping rule watches.
inline void write_convergence_csv(const RunReport& rep, std::ostream& os) {
  os << "k,max_r_norm2,s_norm2\n";
  int k = -1;
  double rmax = 0.0, s = 0.0;
  auto flush = [&]() {
    if (k >= 0) os << k << ',' << strfmt("%.9g", rmax) << ',' << strfmt("%.9g", s) << '\n';
  };
  for (const TraceRow& r : rep.trace) {
    if (r.k != k) {
      flush();
      k = r.k;
      rmax = 0.0;
      s = r.s_norm2;
    }
    rmax = std::max(rmax, r.r_norm2);
  }
  flush();
}

namespace detail {

inline double finite_or_zero(double v) { return std::isfinite(v) ? v : 0.0; }

// Builds, augments, solves, and optionally exports one area subproblem.
inline SubproblemResult solve_area(const MultiAreaSystem& sys, int a, const AdmmState& st,
                                   const FixLedger& fixes, bool relax,
                                   const SolverInterface& solver, const std::string& lp_dir,
                                   int k) {
  NcucModel m = build_area_model(sys, a, fixes, relax);
  augment_admm(m, sys, st.lambda[a], st.Z, st.rho);
  if (!lp_dir.empty()) {
    const std::string path = strfmt("%s/k%03d_area%d.lp", lp_dir.c_str(), k, sys.areas[a].id);
    std::ofstream os(path);
    if (!os) throw config_error("cannot write subproblem export to " + path);
    write_lp(m, os, strfmt("area%d_k%d", sys.areas[a].id, k));
  }
  SubproblemResult r = solve(m, solver);
  if (r.status == SolveStatus::infeasible)
    throw solve_error(strfmt("area %d subproblem infeasible", sys.areas[a].id));
  if (r.status == SolveStatus::time_limit && r.x.empty())
    throw solve_error(
        strfmt("area %d subproblem hit the node budget with no incumbent", sys.areas[a].id));
  return r;
}

inline solve_error with_ledger(const std::exception& e, const FixLedger& lg) {
  std::ostringstream os;
  os << e.what();
  if (!lg.entries().empty()) {
    os << "\nfix ledger at failure:\n";
    lg.write(os);
  }
  return solve_error(os.str());
}

inline void rho_range(const AdmmState& st, double& lo, double& hi) {
  lo = kInf;
  hi = -kInf;
  for (const auto& row : st.rho)
    for (double v : row) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  if (!(lo <= hi)) lo = hi = 0.0;
}

inline void append_trace(RunReport& rep, const MultiAreaSystem& sys, const AdmmState& st,
                         const std::vector<SubproblemResult>& results,
                         const std::vector<int>* solves_per_area) {
  double lo, hi;
  rho_range(st, lo, hi);
  for (size_t a = 0; a < sys.areas.size(); ++a) {
    TraceRow row;
    row.k = st.k;
    row.area = sys.areas[a].id;
    row.objective = results[a].objective;
    row.solve_seconds = results[a].solve_seconds;
    row.r_norm2 = finite_or_zero(st.dlambda2[a]);
    row.s_norm2 = finite_or_zero(st.weighted_dz2);
    row.rho_min = lo;
    row.rho_max = hi;
    row.fixed_binaries = rep.ledger.binaries_fixed();
    row.fixed_globals = rep.ledger.globals_fixed();
    row.mismatch2 = st.mismatch2;
    row.solves = solves_per_area ? (*solves_per_area)[a] : 1;
    rep.trace.push_back(row);
  }
}

// Agreement tolerance a converged run must honor: each copy's deviation from
// the consensus value is bounded by sqrt(eps1) / rho once multiplier steps
// pass the threshold, so duplicate copies can differ by twice that. The rho
// floor discounts one adaptation step taken after the last dual update.
inline double agreement_tol(const AdmmState& st, const AdmmConfig& cfg) {
  double lo, hi;
  rho_range(st, lo, hi);
  const double floor_rho = std::max(lo / std::max(cfg.alpha_incr, cfg.alpha_decr), 1e-12);
  return std::max(1e-6, 2.0 * std::sqrt(cfg.eps1) / floor_rho);
}

inline void finalize_report(RunReport& rep, const MultiAreaSystem& sys,
                            std::vector<SubproblemResult> results, AdmmState st,
                            const AdmmConfig& cfg) {
  rep.tcost_dec = 0.0;
  for (size_t a = 0; a < sys.areas.size(); ++a) {
    rep.tcost_dec += schedule_cost(sys, sys.areas[a].units, results[a].I, results[a].P);
    AuditReport ar = audit_solution(sys, static_cast<int>(a), results[a]);
    if (!ar.ok()) {
      std::ostringstream os;
      os << "final schedule fails its audit in area " << sys.areas[a].id << ":\n";
      ar.write(os);
      throw solve_error(os.str());
    }
  }
  if (rep.converged && sys.gmap.n_globals > 0) {
    std::vector<std::vector<std::vector<double>>> slots;
    slots.reserve(results.size());
    for (const auto& r : results) slots.push_back(r.slot);
    AuditReport ar = audit_consensus(sys, slots, agreement_tol(st, cfg));
    if (!ar.ok()) {
      std::ostringstream os;
      os << "converged run leaves duplicate tie values apart:\n";
      ar.write(os);
      throw solve_error(os.str());
    }
  }
  rep.schedule = std::move(results);
  rep.state = std::move(st);
}

// Shared path for systems with nothing to agree on: one solve per area.
inline RunReport run_uncoupled(const MultiAreaSystem& sys, const SolverInterface& solver,
                               AdmmState st, RunReport rep) {
  std::vector<SubproblemResult> results;
  results.reserve(sys.areas.size());
  double tmax = 0.0;
  for (size_t a = 0; a < sys.areas.size(); ++a) {
    results.push_back(solve_area(sys, static_cast<int>(a), st, rep.ledger, false, solver, "", 1));
    rep.real_solve_seconds += results.back().solve_seconds;
    tmax = std::max(tmax, results.back().solve_seconds);
  }
  st.dlambda2.assign(sys.areas.size(), 0.0);
  st.weighted_dz2 = 0.0;
  rep.converged = true;
  rep.iterations = 1;
  rep.simulated_seconds = tmax;
  append_trace(rep, sys, st, results, nullptr);
  finalize_report(rep, sys, std::move(results), std::move(st), AdmmConfig{});
  return rep;
}

}  // namespace detail

// Centralized benchmark on the original, undecoupled system.
struct CentralizedRun {
  SubproblemResult result;
  double tcost = kInf;
  bool feasible = false;
};

inline CentralizedRun run_centralized(const MultiAreaSystem& sys, const SolverInterface& solver) {
  NcucModel m = build_centralized_model(sys, /*relax=*/false);
  CentralizedRun out;
  out.result = solve(m, solver);
  if (out.result.status == SolveStatus::infeasible) return out;
  if (out.result.status == SolveStatus::time_limit && out.result.x.empty())
    throw solve_error("centralized solve hit the node budget with no incumbent");
  AuditReport ar = audit_solution(sys, -1, out.result);
  if (!ar.ok()) {
    std::ostringstream os;
    os << "centralized schedule fails its audit:\n";
    ar.write(os);
    throw solve_error(os.str());
  }
  std::vector<int> all(sys.units.size());
  for (size_t u = 0; u < all.size(); ++u) all[u] = static_cast<int>(u);
  out.tcost = schedule_cost(sys, all, out.result.I, out.result.P);
  out.feasible = true;
  return out;
}

// Fills in the benchmark columns of a finished distributed run. The
// centralized optimum can never sit above a feasible distributed schedule by
// more than the solver's own optimality slack; anything larger is a bug.
inline void attach_benchmark(RunReport& rep, const CentralizedRun& cen,
                             const SolverInterface& solver) {
  if (!cen.feasible) throw config_error("cannot benchmark against an infeasible centralized case");
  rep.tcost_cen = cen.tcost;
  rep.benchmarked = true;
  const double allowance = solver.mip_gap * std::max(1.0, std::fabs(cen.tcost)) + 1e-6;
  if (cen.tcost > rep.tcost_dec + allowance)
    throw solve_error(strfmt("centralized cost %.6f exceeds distributed cost %.6f beyond slack",
                             cen.tcost, rep.tcost_dec));
  if (std::fabs(cen.tcost) < 1e-12)
    rep.diff_pct = std::fabs(rep.tcost_dec - cen.tcost) < 1e-9 ? 0.0 : kInf;
  else
    rep.diff_pct = std::fabs(rep.tcost_dec - cen.tcost) / std::fabs(cen.tcost) * 100.0;
}

// Synchronous mode: every iteration solves all areas against the same state,
// exchanges flows, averages, steps the multipliers, adapts the penalties,
// then checks the stopping rule before any commitment fixing.
inline RunReport run_sync(const MultiAreaSystem& sys, const SolverInterface& solver,
                          const AdmmConfig& acfg, const OscillationConfig& ocfg,
                          const std::string& lp_dir = "") {
  acfg.validate_or_throw();
  RunReport rep;
  AdmmState st = initialize(sys, solver, acfg);
  if (sys.gmap.n_globals == 0)
    return detail::run_uncoupled(sys, solver, std::move(st), std::move(rep));

  CommitmentHistory hist(sys, ocfg.window);
  FixLedger& lg = rep.ledger;
  std::vector<SubproblemResult> results;
  while (true) {
    try {
      results.clear();
      for (size_t a = 0; a < sys.areas.size(); ++a)
        results.push_back(
            detail::solve_area(sys, static_cast<int>(a), st, lg, false, solver, lp_dir, st.k));
    } catch (const solve_error& e) {
      throw detail::with_ledger(e, lg);
    }
    double tmax = 0.0;
    for (const auto& r : results) {
      rep.real_solve_seconds += r.solve_seconds;
      tmax = std::max(tmax, r.solve_seconds);
    }
    rep.simulated_seconds += tmax;
    hist.record_iteration(sys, results);
    update_consensus(st, results, sys);
    update_duals(st, results, sys);
    detail::append_trace(rep, sys, st, results, nullptr);
    update_rho(st, acfg);
    if (check_stopping(st, acfg)) {
      rep.converged = true;
      rep.iterations = st.k;
      break;
    }
    if (st.k >= acfg.max_iters) {
      rep.converged = false;
      rep.iterations = st.k;
      break;
    }
    auto osc = detect_oscillation(hist, sys, st.k, lg, ocfg);
    for (const FixEntry& e : select_fixes(osc, sys, ocfg, st.k)) lg.fix_binary(e);
    maybe_fix_globals(st, acfg, lg);
    ++st.k;
  }
  detail::finalize_report(rep, sys, std::move(results), std::move(st), acfg);
  return rep;
}

// Asynchronous mode on a discrete-event clock. Areas solve against whatever
// consensus state exists when they start; a global variable's averaging and
// multiplier step fire as soon as S of its areas have reported since its
// last update, using the most recent value from every copy. Penalty
// adaptation, stopping checks, and commitment fixing happen only at global
// iteration boundaries, delimited by the slowest area's completions.
inline RunReport run_async(const MultiAreaSystem& sys, const SolverInterface& solver,
                           const AdmmConfig& acfg, const OscillationConfig& ocfg,
                           const ScheduleConfig& sched, const std::string& lp_dir = "") {
  acfg.validate_or_throw();
  sched.validate_or_throw(sys);
  RunReport rep;
  AdmmState st = initialize(sys, solver, acfg);
  if (sys.gmap.n_globals == 0)
    return detail::run_uncoupled(sys, solver, std::move(st), std::move(rep));

  const int na = static_cast<int>(sys.areas.size());
  const int ng = sys.gmap.n_globals;
  CommitmentHistory hist(sys, ocfg.window);
  FixLedger& lg = rep.ledger;

  // Seed the slot cache with relaxed solves against the warm-start state so
  // an early partial update has a value for every copy it averages over.
  std::vector<SubproblemResult> latest;
  try {
    for (int a = 0; a < na; ++a)
      latest.push_back(detail::solve_area(sys, a, st, lg, true, solver, "", 0));
  } catch (const solve_error& e) {
    throw detail::with_ledger(e, lg);
  }

  std::vector<std::vector<int>> incident(na);  // globals touching each area
  for (int a = 0; a < na; ++a) {
    std::vector<char> seen(ng, 0);
    for (const auto& sl : sys.gmap.by_area[a])
      if (!seen[sl.global]) {
        seen[sl.global] = 1;
        incident[a].push_back(sl.global);
      }
  }

  struct Completion {
    double time = 0.0;
    unsigned long long tie = 0;  // seeded draw orders simultaneous events
    long long seq = 0;
    int area = -1;
    SubproblemResult result;
    bool operator>(const Completion& o) const {
      if (time != o.time) return time > o.time;
      if (tie != o.tie) return tie > o.tie;
      return seq > o.seq;
    }
  };
  std::vector<Completion> heap;  // min-heap on (time, tie, seq)
  auto push_event = [&](Completion c) {
    heap.push_back(std::move(c));
    std::push_heap(heap.begin(), heap.end(), std::greater<Completion>{});
  };
  auto pop_event = [&]() {
    std::pop_heap(heap.begin(), heap.end(), std::greater<Completion>{});
    Completion c = std::move(heap.back());
    heap.pop_back();
    return c;
  };
  std::mt19937_64 rng(sched.seed);
  long long seq = 0;

  std::vector<int> done_solves(na, 0);           // completions per area
  std::vector<int> solves_in_iter(na, 0);        // completions since last boundary
  std::vector<char> blocked(na, 0);
  std::vector<std::vector<char>> fresh(ng, std::vector<char>(na, 0));
  std::vector<int> fresh_cnt(ng, 0);
  auto lam_snap = st.lambda;
  auto z_snap = st.Z;
  double clock = 0.0;

  auto min_done = [&]() { return *std::min_element(done_solves.begin(), done_solves.end()); };
  auto can_start = [&](int a) {
    // rate cap: solve m+1 may start only while (m+1) * tau <= (G+1) * T,
    // which pins the long-run solve-rate ratio against the slowest area at
    // T / tau and collapses to lockstep when tau = T
    return static_cast<long long>(done_solves[a] + 1) * sched.tau <=
           static_cast<long long>(min_done() + 1) * sched.T;
  };
  auto start_area = [&](int a, double t) {
    SubproblemResult r;
    try {
      r = detail::solve_area(sys, a, st, lg, false, solver, lp_dir, st.k);
    } catch (const solve_error& e) {
      throw detail::with_ledger(e, lg);
    }
    rep.real_solve_seconds += r.solve_seconds;
    const double dur =
        sched.latency.empty() ? std::max(r.solve_seconds, 1e-9) : sched.latency[a];
    rep.solves.push_back({a, t, t + dur});
    push_event({t + dur, rng(), ++seq, a, std::move(r)});
  };

  for (int a = 0; a < na; ++a) start_area(a, 0.0);

  bool done = false;
  while (!done) {
    if (heap.empty())
      throw config_error("asynchronous schedule deadlocked; loosen S or tau/T");
    Completion ev = pop_event();
    clock = ev.time;
    latest[ev.area] = std::move(ev.result);
    ++done_solves[ev.area];
    ++solves_in_iter[ev.area];

    for (int g : incident[ev.area]) {
      if (!fresh[g][ev.area]) {
        fresh[g][ev.area] = 1;
        ++fresh_cnt[g];
      }
      if (fresh_cnt[g] >= sched.S) {
        std::vector<int> one{g};
        update_consensus(st, latest, sys, &one);
        update_duals(st, latest, sys, &one);
        rep.firings.push_back({clock, g, fresh_cnt[g]});
        std::fill(fresh[g].begin(), fresh[g].end(), 0);
        fresh_cnt[g] = 0;
      }
    }

    while (min_done() >= st.k) {  // global iteration st.k is complete
      for (int a = 0; a < na; ++a) {
        double d2 = 0.0;
        for (size_t s = 0; s < st.lambda[a].size(); ++s)
          for (int t = 0; t < sys.nt; ++t) d2 += sqr(st.lambda[a][s][t] - lam_snap[a][s][t]);
        st.dlambda2[a] = d2;
      }
      double wdz = 0.0, mis = 0.0;
      for (int g = 0; g < ng; ++g)
        for (int t = 0; t < sys.nt; ++t) wdz += st.rho[g][t] * sqr(st.Z[g][t] - z_snap[g][t]);
      for (int a = 0; a < na; ++a)
        for (size_t s = 0; s < sys.gmap.by_area[a].size(); ++s) {
          const auto& sl = sys.gmap.by_area[a][s];
          for (int t = 0; t < sys.nt; ++t)
            mis += sqr(sl.sign * latest[a].slot[s][t] - st.Z[sl.global][t]);
        }
      st.weighted_dz2 = wdz;
      st.mismatch2 = mis;
      lam_snap = st.lambda;
      z_snap = st.Z;

      hist.record_iteration(sys, latest);
      rep.boundaries.push_back(clock);
      detail::append_trace(rep, sys, st, latest, &solves_in_iter);
      solves_in_iter.assign(na, 0);
      update_rho(st, acfg);
      if (check_stopping(st, acfg)) {
        rep.converged = true;
        rep.iterations = st.k;
        done = true;
        break;
      }
      if (st.k >= acfg.max_iters) {
        rep.converged = false;
        rep.iterations = st.k;
        done = true;
        break;
      }
      auto osc = detect_oscillation(hist, sys, st.k, lg, ocfg);
      for (const FixEntry& e : select_fixes(osc, sys, ocfg, st.k)) lg.fix_binary(e);
      maybe_fix_globals(st, acfg, lg);
      ++st.k;
      for (int a = 0; a < na; ++a)
        if (blocked[a] && can_start(a)) {
          blocked[a] = 0;
          start_area(a, clock);
        }
    }
    if (done) break;
    if (can_start(ev.area))
      start_area(ev.area, clock);
    else
      blocked[ev.area] = 1;
  }
  rep.simulated_seconds = clock;
  detail::finalize_report(rep, sys, std::move(latest), std::move(st), acfg);
  return rep;
}

// Post-hoc schedule compliance check over an asynchronous run's event logs:
// no consensus update may fire below the partial-barrier quorum, and every
// area must complete at least tau solves inside every window of T
// consecutive global iterations.
struct TraceAuditReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
  void write(std::ostream& os) const {
    for (const auto& v : violations) os << v << "\n";
  }
};

inline TraceAuditReport audit_async_trace(const RunReport& rep, const MultiAreaSystem& sys,
                                          const ScheduleConfig& sched) {
  TraceAuditReport out;
  for (const FiringLog& f : rep.firings)
    if (f.fresh < sched.S)
      out.violations.push_back(strfmt("t=%.6f global %d fired with %d fresh areas (S=%d)",
                                      f.time, f.global, f.fresh, sched.S));
  const int m = static_cast<int>(rep.boundaries.size());
  const int na = static_cast<int>(sys.areas.size());
  for (int j = sched.T - 1; j < m; ++j) {
    const double t0 = j >= sched.T ? rep.boundaries[j - sched.T] : 0.0;
    const double t1 = rep.boundaries[j];
    std::vector<int> cnt(na, 0);
    for (const SolveLog& s : rep.solves)
      if (s.finish > t0 && s.finish <= t1) ++cnt[s.area];
    for (int a = 0; a < na; ++a)
      if (cnt[a] < sched.tau)
        out.violations.push_back(
            strfmt("area %d completed %d solves in iterations %d..%d (tau=%d)",
                   sys.areas[a].id, cnt[a], j - sched.T + 2, j + 1, sched.tau));
  }
  return out;
}

}  // namespace dncuc
