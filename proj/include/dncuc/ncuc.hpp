// NCUC model construction and solving: per-area subproblems over duplicated
// tie-line flows, the centralized benchmark, the consensus-penalty
// augmentation used by the distributed algorithm, and schedule extraction.
#pragma once

#include <chrono>
#include <map>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "dncuc/fixes.hpp"
#include "dncuc/milp.hpp"
#include "dncuc/system.hpp"

namespace dncuc {

// Constraint families; every emitted row carries one for audit and export.
enum class RowTag {
  fuel,        // epigraph segments of the production-cost curve
  capacity_hi, // output below committed maximum
  capacity_lo, // output above committed minimum
  min_up,      // minimum up time (initial, rolling, and horizon-tail blocks)
  min_down,    // minimum down time (same three blocks)
  startup,     // startup cost recovery
  shutdown,    // shutdown cost recovery
  ramp_up,     // ramp-up with startup allowance
  ramp_down,   // ramp-down with shutdown allowance
  balance,     // nodal power balance
  dc_flow,     // flow-angle coupling
};

inline const char* to_string(RowTag t) {
  switch (t) {
    case RowTag::fuel: return "fuel";
    case RowTag::capacity_hi: return "capacity_hi";
    case RowTag::capacity_lo: return "capacity_lo";
    case RowTag::min_up: return "min_up";
    case RowTag::min_down: return "min_down";
    case RowTag::startup: return "startup";
    case RowTag::shutdown: return "shutdown";
    case RowTag::ramp_up: return "ramp_up";
    case RowTag::ramp_down: return "ramp_down";
    case RowTag::balance: return "balance";
    default: return "dc_flow";
  }
}

struct TaggedRow {
  int row = -1;
  RowTag tag = RowTag::fuel;
  int subject = -1;  // unit / bus / line position, family-dependent
  int t = 0;
};

// Hours at the start of the horizon during which the commitment is pinned by
// the pre-horizon run length.
inline int initial_on_hours(const Unit& u, int nt) {
  if (!u.initially_on) return 0;
  return std::max(0, std::min(nt, u.min_on - u.initial_hours));
}

inline int initial_off_hours(const Unit& u, int nt) {
  if (u.initially_on) return 0;
  return std::max(0, std::min(nt, u.min_off - u.initial_hours));
}

// A built optimization model plus the bookkeeping needed to interpret it.
// Position indices (unit, bus, line) are area-local for area models and
// system-wide for the centralized model. A commitment fixed by the ledger
// has no column: icol is -1 and ifix holds the constant.
struct NcucModel {
  LpProblem lp;
  std::vector<int> binaries;  // unfixed commitment columns; empty when relaxed
  bool relaxed = false;
  int area = -1;  // area index, -1 for centralized
  int nt = 0;

  std::vector<std::vector<int>> icol, pcol, fcol, sucol, sdcol;  // [unit][t]
  std::vector<std::vector<double>> ifix;                         // [unit][t]
  std::vector<std::vector<int>> acol;     // [bus][t] real-bus angles
  std::vector<std::vector<int>> pscol;    // [pseudo][t] pseudo-bus angles
  std::vector<std::vector<int>> flowcol;  // [line][t] internal (or all) lines
  std::vector<std::vector<int>> tiecol;   // [copy][t] duplicated tie flows
  std::vector<std::vector<int>> slotcol;  // [w][t] consensus slot columns
  std::vector<TaggedRow> tagged;
  std::vector<QuadTerm> quads;  // consensus penalties added by augmentation

  double commitment(const std::vector<double>& x, int k, int t) const {
    return icol[k][t] >= 0 ? x[icol[k][t]] : ifix[k][t];
  }
};

namespace detail {

// Row assembly that folds fixed commitments into the right-hand side and
// merges duplicate columns.
class RowBuilder {
 public:
  explicit RowBuilder(double rhs) : rhs_(rhs) {}

  void var(int col, double a) {
    if (a != 0.0) coef_[col] += a;
  }
  // a * I-term where the commitment may be a constant.
  void commit(std::pair<int, double> ic, double a) {
    if (ic.first >= 0)
      var(ic.first, a);
    else
      rhs_ -= a * ic.second;
  }

  int emit(LpProblem& lp, RowSense sense) {
    std::vector<std::pair<int, double>> coef;
    for (auto& [col, a] : coef_)
      if (a != 0.0) coef.push_back({col, a});
    return lp.add_row(sense, rhs_, std::move(coef));
  }

 private:
  std::map<int, double> coef_;
  double rhs_;
};

inline NcucModel build_model(const MultiAreaSystem& sys, int area_idx,
                             const FixLedger* fixes, bool relax) {
  const Area* area = area_idx >= 0 ? &sys.areas[area_idx] : nullptr;
  const int nt = sys.nt;

  std::vector<int> unit_ids, bus_ids, line_ids;
  std::vector<int> ref_buses;
  if (area) {
    unit_ids = area->units;
    bus_ids = area->buses;
    line_ids = area->internal_lines;
    ref_buses = {area->reference_bus};
  } else {
    for (size_t i = 0; i < sys.units.size(); ++i) unit_ids.push_back(static_cast<int>(i));
    for (size_t b = 0; b < sys.buses.size(); ++b) bus_ids.push_back(static_cast<int>(b));
    for (size_t l = 0; l < sys.lines.size(); ++l) line_ids.push_back(static_cast<int>(l));
    ref_buses = {sys.areas.front().reference_bus};
  }
  const int nu = static_cast<int>(unit_ids.size());
  const int nb = static_cast<int>(bus_ids.size());
  const int nl = static_cast<int>(line_ids.size());
  const int nc = area ? static_cast<int>(area->tie_copies.size()) : 0;
  const int np = area ? static_cast<int>(area->pseudo_buses.size()) : 0;

  NcucModel m;
  m.relaxed = relax;
  m.area = area_idx;
  m.nt = nt;
  LpProblem& lp = m.lp;

  auto table = [&](int n) { return std::vector<std::vector<int>>(n, std::vector<int>(nt, -1)); };
  m.icol = table(nu);
  m.pcol = table(nu);
  m.fcol = table(nu);
  m.sucol = table(nu);
  m.sdcol = table(nu);
  m.ifix.assign(nu, std::vector<double>(nt, 0.0));
  m.acol = table(nb);
  m.pscol = table(np);
  m.flowcol = table(nl);
  m.tiecol = table(nc);

  for (int k = 0; k < nu; ++k) {
    const Unit& u = sys.units[unit_ids[k]];
    for (int t = 0; t < nt; ++t) {
      if (fixes && fixes->binary_fixed(unit_ids[k], t)) {
        m.ifix[k][t] = fixes->binary_value(unit_ids[k], t);
        lp.c0 += u.no_load_cost * m.ifix[k][t];
      } else {
        m.icol[k][t] = lp.add_var(0.0, 1.0, u.no_load_cost);
        if (!relax) m.binaries.push_back(m.icol[k][t]);
      }
      m.pcol[k][t] = lp.add_var(0.0, u.pmax, 0.0);
      m.fcol[k][t] = lp.add_var(0.0, kInf, 1.0);
      m.sucol[k][t] = lp.add_var(0.0, kInf, 1.0);
      m.sdcol[k][t] = lp.add_var(0.0, kInf, 1.0);
    }
  }
  for (int b = 0; b < nb; ++b)
    for (int t = 0; t < nt; ++t) m.acol[b][t] = lp.add_var(-kInf, kInf, 0.0);
  for (int p = 0; p < np; ++p)
    for (int t = 0; t < nt; ++t) m.pscol[p][t] = lp.add_var(-kInf, kInf, 0.0);
  for (int l = 0; l < nl; ++l) {
    const Line& ln = sys.lines[line_ids[l]];
    for (int t = 0; t < nt; ++t) m.flowcol[l][t] = lp.add_var(-ln.limit, ln.limit, 0.0);
  }
  for (int c = 0; c < nc; ++c) {
    const TieCopy& tc = area->tie_copies[c];
    for (int t = 0; t < nt; ++t) m.tiecol[c][t] = lp.add_var(-tc.limit, tc.limit, 0.0);
  }

  std::map<int, int> bus_pos;
  for (int b = 0; b < nb; ++b) bus_pos[bus_ids[b]] = b;
  for (int rb : ref_buses) {
    int b = bus_pos.at(rb);
    for (int t = 0; t < nt; ++t) lp.lb[m.acol[b][t]] = lp.ub[m.acol[b][t]] = 0.0;
  }

  auto tag = [&](int row, RowTag rt, int subject, int t) {
    m.tagged.push_back({row, rt, subject, t});
  };
  // Commitment term accessor; t = -1 is the pre-horizon state.
  auto ic = [&](int k, int t) -> std::pair<int, double> {
    if (t < 0) return {-1, sys.units[unit_ids[k]].initially_on ? 1.0 : 0.0};
    return {m.icol[k][t], m.ifix[k][t]};
  };

  for (int k = 0; k < nu; ++k) {
    const Unit& u = sys.units[unit_ids[k]];
    const int ton = u.min_on, toff = u.min_off;

    for (int t = 0; t < nt; ++t) {
      for (size_t s = 0; s < u.fuel.segments(); ++s) {
        RowBuilder r(u.fuel.intercept(s));
        r.var(m.fcol[k][t], 1.0);
        r.var(m.pcol[k][t], -u.fuel.slope(s));
        tag(r.emit(lp, RowSense::ge), RowTag::fuel, k, t);
      }
      {
        RowBuilder r(0.0);
        r.var(m.pcol[k][t], 1.0);
        r.commit(ic(k, t), -u.pmax);
        tag(r.emit(lp, RowSense::le), RowTag::capacity_hi, k, t);
      }
      {
        RowBuilder r(0.0);
        r.var(m.pcol[k][t], 1.0);
        r.commit(ic(k, t), -u.pmin);
        tag(r.emit(lp, RowSense::ge), RowTag::capacity_lo, k, t);
      }
      {
        RowBuilder r(0.0);
        r.var(m.sucol[k][t], 1.0);
        r.commit(ic(k, t), -u.startup_cost);
        r.commit(ic(k, t - 1), u.startup_cost);
        tag(r.emit(lp, RowSense::ge), RowTag::startup, k, t);
      }
      {
        RowBuilder r(0.0);
        r.var(m.sdcol[k][t], 1.0);
        r.commit(ic(k, t - 1), -u.shutdown_cost);
        r.commit(ic(k, t), u.shutdown_cost);
        tag(r.emit(lp, RowSense::ge), RowTag::shutdown, k, t);
      }
      // Ramping needs the previous output; hour 1 rows exist only when the
      // unit enters the horizon off (previous output then known to be zero).
      if (t >= 1 || !u.initially_on) {
        {
          RowBuilder r(u.pmax);
          r.var(m.pcol[k][t], 1.0);
          if (t >= 1) r.var(m.pcol[k][t - 1], -1.0);
          r.commit(ic(k, t), u.pmax - u.pmin);
          r.commit(ic(k, t - 1), u.pmin - u.ramp_up);
          tag(r.emit(lp, RowSense::le), RowTag::ramp_up, k, t);
        }
        {
          RowBuilder r(u.pmax);
          r.var(m.pcol[k][t], -1.0);
          if (t >= 1) r.var(m.pcol[k][t - 1], 1.0);
          r.commit(ic(k, t - 1), u.pmax - u.pmin);
          r.commit(ic(k, t), u.pmin - u.ramp_down);
          tag(r.emit(lp, RowSense::le), RowTag::ramp_down, k, t);
        }
      }
    }

    const int ut = initial_on_hours(u, nt);
    if (ut > 0) {
      RowBuilder r(ut);
      for (int t = 0; t < ut; ++t) r.commit(ic(k, t), 1.0);
      tag(r.emit(lp, RowSense::eq), RowTag::min_up, k, 0);
    }
    for (int t = ut; t + ton <= nt; ++t) {
      RowBuilder r(0.0);
      for (int tau = t; tau < t + ton; ++tau) r.commit(ic(k, tau), 1.0);
      r.commit(ic(k, t), -ton);
      r.commit(ic(k, t - 1), ton);
      tag(r.emit(lp, RowSense::ge), RowTag::min_up, k, t);
    }
    for (int t = std::max(0, nt - ton + 1); t < nt; ++t) {
      const int cnt = nt - t;
      RowBuilder r(0.0);
      for (int tau = t; tau < nt; ++tau) r.commit(ic(k, tau), 1.0);
      r.commit(ic(k, t), -cnt);
      r.commit(ic(k, t - 1), cnt);
      tag(r.emit(lp, RowSense::ge), RowTag::min_up, k, t);
    }

    const int dt = initial_off_hours(u, nt);
    if (dt > 0) {
      RowBuilder r(0.0);
      for (int t = 0; t < dt; ++t) r.commit(ic(k, t), 1.0);
      tag(r.emit(lp, RowSense::eq), RowTag::min_down, k, 0);
    }
    for (int t = dt; t + toff <= nt; ++t) {
      RowBuilder r(-toff);
      for (int tau = t; tau < t + toff; ++tau) r.commit(ic(k, tau), -1.0);
      r.commit(ic(k, t), toff);
      r.commit(ic(k, t - 1), -toff);
      tag(r.emit(lp, RowSense::ge), RowTag::min_down, k, t);
    }
    for (int t = std::max(0, nt - toff + 1); t < nt; ++t) {
      const int cnt = nt - t;
      RowBuilder r(-cnt);
      for (int tau = t; tau < nt; ++tau) r.commit(ic(k, tau), -1.0);
      r.commit(ic(k, t), cnt);
      r.commit(ic(k, t - 1), -cnt);
      tag(r.emit(lp, RowSense::ge), RowTag::min_down, k, t);
    }
  }

  for (int b = 0; b < nb; ++b) {
    const int bus = bus_ids[b];
    for (int t = 0; t < nt; ++t) {
      double load = 0.0;
      for (size_t d = 0; d < sys.loads.size(); ++d)
        if (sys.loads[d].bus == bus) load += sys.demand(static_cast<int>(d), t);
      RowBuilder r(load);
      for (int k = 0; k < nu; ++k)
        if (sys.units[unit_ids[k]].bus == bus) r.var(m.pcol[k][t], 1.0);
      for (int l = 0; l < nl; ++l) {
        if (sys.lines[line_ids[l]].from == bus) r.var(m.flowcol[l][t], -1.0);
        if (sys.lines[line_ids[l]].to == bus) r.var(m.flowcol[l][t], 1.0);
      }
      for (int c = 0; c < nc; ++c)
        if (area->tie_copies[c].local_bus == bus) r.var(m.tiecol[c][t], -1.0);
      tag(r.emit(lp, RowSense::eq), RowTag::balance, b, t);
    }
  }

  for (int l = 0; l < nl; ++l) {
    const Line& ln = sys.lines[line_ids[l]];
    const int bf = bus_pos.at(ln.from), bt = bus_pos.at(ln.to);
    for (int t = 0; t < nt; ++t) {
      RowBuilder r(0.0);
      r.var(m.flowcol[l][t], 1.0);
      r.var(m.acol[bf][t], -1.0 / ln.reactance);
      r.var(m.acol[bt][t], 1.0 / ln.reactance);
      tag(r.emit(lp, RowSense::eq), RowTag::dc_flow, l, t);
    }
  }
  for (int c = 0; c < nc; ++c) {
    const TieCopy& tc = area->tie_copies[c];
    const int bl = bus_pos.at(tc.local_bus);
    for (int t = 0; t < nt; ++t) {
      RowBuilder r(0.0);
      r.var(m.tiecol[c][t], 1.0);
      r.var(m.acol[bl][t], -1.0 / tc.reactance);
      r.var(m.pscol[tc.pseudo][t], 1.0 / tc.reactance);
      tag(r.emit(lp, RowSense::eq), RowTag::dc_flow, nl + c, t);
    }
  }

  // Consensus slot columns, in map order; pinned where the ledger fixed the
  // corresponding global.
  if (area) {
    const auto& slots = sys.gmap.by_area[area_idx];
    m.slotcol.assign(slots.size(), std::vector<int>(nt, -1));
    for (size_t s = 0; s < slots.size(); ++s) {
      const ConsensusSlot& slot = slots[s];
      for (int t = 0; t < nt; ++t) {
        int col;
        if (slot.kind == SlotKind::tie_flow)
          col = m.tiecol[slot.tie_copy][t];
        else if (slot.angle_bus >= 0)
          col = m.acol[bus_pos.at(slot.angle_bus)][t];
        else
          col = m.pscol[~slot.angle_bus][t];
        m.slotcol[s][t] = col;
        // A fixed global pins the signed slot value by an equality row so
        // that the variable's own limits stay in force.
        if (fixes && fixes->global_fixed(slot.global, t))
          lp.add_row(RowSense::eq, fixes->global_value(slot.global, t), {{col, slot.sign}});
      }
    }
  }
  return m;
}

}  // namespace detail

// Area subproblem over the decoupled system: local units, internal network,
// duplicated tie-line flows against pseudo-bus angles, local reference.
inline NcucModel build_area_model(const MultiAreaSystem& sys, int area_idx,
                                  const FixLedger& fixes, bool relax) {
  if (!sys.decoupled()) throw config_error("area model requires a decoupled system");
  return detail::build_model(sys, area_idx, &fixes, relax);
}

inline NcucModel build_area_model(const MultiAreaSystem& sys, int area_idx) {
  FixLedger none;
  return build_area_model(sys, area_idx, none, false);
}

// Monolithic benchmark over the original system: every tie-line modeled once,
// one reference bus (the first area's).
inline NcucModel build_centralized_model(const MultiAreaSystem& sys, bool relax = false) {
  if (sys.decoupled()) throw config_error("centralized model requires the original system");
  return detail::build_model(sys, -1, nullptr, relax);
}

// Adds the consensus terms for every registered slot (w, t):
//   lambda[w][t] * sigma * v  +  rho[g][t]/2 * (sigma * v - Z[g][t])^2
// where v is the slot's raw variable and sigma its orientation sign. Base
// constraints are untouched.
inline void augment_admm(NcucModel& m, const MultiAreaSystem& sys,
                         const std::vector<std::vector<double>>& lambda,
                         const std::vector<std::vector<double>>& Z,
                         const std::vector<std::vector<double>>& rho) {
  if (m.area < 0) throw config_error("augmentation applies to area models");
  const auto& slots = sys.gmap.by_area[m.area];
  if (lambda.size() != slots.size())
    throw config_error(strfmt("lambda: %zu entries for %zu slots", lambda.size(), slots.size()));
  for (size_t s = 0; s < slots.size(); ++s) {
    const ConsensusSlot& slot = slots[s];
    const int g = slot.global;
    if (g >= static_cast<int>(Z.size()) || g >= static_cast<int>(rho.size()))
      throw config_error(strfmt("global %d missing consensus values", g));
    if (static_cast<int>(lambda[s].size()) != m.nt ||
        static_cast<int>(Z[g].size()) != m.nt || static_cast<int>(rho[g].size()) != m.nt)
      throw config_error("consensus value horizon mismatch");
    for (int t = 0; t < m.nt; ++t) {
      const int col = m.slotcol[s][t];
      m.lp.c[col] += lambda[s][t] * slot.sign;
      if (rho[g][t] != 0.0)
        m.quads.push_back({col, rho[g][t], slot.sign * Z[g][t]});
    }
  }
}

enum class SolveStatus { optimal, gap_feasible, infeasible, time_limit };

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::gap_feasible: return "gap_feasible";
    case SolveStatus::infeasible: return "infeasible";
    default: return "time_limit";
  }
}

// Backend configuration. The in-tree branch-and-bound backend ("bnb") is the
// only registered backend; capability flags gate which model classes it may
// be asked to solve. Node budget stands in for a wall-clock limit so runs
// stay reproducible.
struct SolverInterface {
  std::string backend = "bnb";
  bool milp_capable = true;
  bool lp_capable = true;
  double mip_gap = 1e-3;  // relative
  double feasibility_tol = 1e-7;
  std::int64_t max_nodes = 200000;
  int max_oa_rounds = 200;
  double oa_tol = 1e-6;
  double quad_point_tol = 1e-5;  // position accuracy demanded of penalized variables
};

struct SubproblemResult {
  SolveStatus status = SolveStatus::infeasible;
  double objective = kInf;  // model objective including any consensus terms
  double bound = -kInf;
  double gap = kInf;
  std::vector<std::vector<int>> I;        // [unit][t] rounded commitments
  std::vector<std::vector<double>> ifrac; // [unit][t] raw commitment values
  std::vector<std::vector<double>> P, F, SU, SD;
  std::vector<std::vector<double>> theta;  // [bus][t]
  std::vector<std::vector<double>> pseudo; // [pseudo][t]
  std::vector<std::vector<double>> flow;   // [line][t]
  std::vector<std::vector<double>> tie;   // [copy][t] raw duplicated flows
  std::vector<std::vector<double>> slot;  // [w][t] raw slot values
  std::vector<double> x;
  double solve_seconds = 0.0;
  std::int64_t nodes = 0;
};

inline SubproblemResult solve(const NcucModel& m, const SolverInterface& cfg) {
  if (cfg.backend != "bnb")
    throw config_error(strfmt("unknown solver backend '%s'", cfg.backend.c_str()));
  if (!m.binaries.empty() && !cfg.milp_capable)
    throw config_error("model has open binaries but backend lacks mixed-integer support");
  if (!cfg.lp_capable) throw config_error("backend lacks continuous support");

  MilpConfig mc;
  mc.mip_gap = cfg.mip_gap;
  mc.max_nodes = cfg.max_nodes;
  mc.max_oa_rounds = cfg.max_oa_rounds;
  mc.oa_tol = cfg.oa_tol;
  mc.quad_point_tol = cfg.quad_point_tol;
  MilpSolver solver(m.lp, m.binaries, mc);
  for (const QuadTerm& q : m.quads) solver.add_quadratic(q.var, q.q, q.center);

  auto t0 = std::chrono::steady_clock::now();
  MilpResult res = solver.solve();
  auto t1 = std::chrono::steady_clock::now();

  SubproblemResult out;
  out.solve_seconds = std::chrono::duration<double>(t1 - t0).count();
  out.nodes = res.nodes;
  out.bound = res.bound;
  out.gap = res.gap;
  switch (res.status) {
    case LpStatus::optimal:
      out.status = res.gap <= 1e-9 ? SolveStatus::optimal : SolveStatus::gap_feasible;
      break;
    case LpStatus::infeasible:
      out.status = SolveStatus::infeasible;
      return out;
    case LpStatus::iter_limit:
      out.status = SolveStatus::time_limit;
      if (res.x.empty()) return out;
      break;
    case LpStatus::unbounded:
      throw solve_error("subproblem reported unbounded");
  }
  out.objective = res.objective;
  out.x = res.x;

  const int nt = m.nt;
  auto extract = [&](const std::vector<std::vector<int>>& cols) {
    std::vector<std::vector<double>> v(cols.size(), std::vector<double>(nt, 0.0));
    for (size_t i = 0; i < cols.size(); ++i)
      for (int t = 0; t < nt; ++t)
        if (cols[i][t] >= 0) v[i][t] = out.x[cols[i][t]];
    return v;
  };
  out.ifrac = extract(m.icol);
  for (size_t k = 0; k < m.icol.size(); ++k)
    for (int t = 0; t < nt; ++t)
      if (m.icol[k][t] < 0) out.ifrac[k][t] = m.ifix[k][t];
  out.I.assign(m.icol.size(), std::vector<int>(nt, 0));
  for (size_t k = 0; k < m.icol.size(); ++k)
    for (int t = 0; t < nt; ++t) out.I[k][t] = out.ifrac[k][t] > 0.5 ? 1 : 0;
  out.P = extract(m.pcol);
  out.F = extract(m.fcol);
  out.SU = extract(m.sucol);
  out.SD = extract(m.sdcol);
  out.theta = extract(m.acol);
  out.pseudo = extract(m.pscol);
  out.flow = extract(m.flowcol);
  out.tie = extract(m.tiecol);
  out.slot = extract(m.slotcol);
  return out;
}

// Writes the model as LP-format text (one file per subproblem when tracing).
inline void write_lp(const NcucModel& m, std::ostream& os, const std::string& name = "ncuc") {
  auto var_name = [&](int col) { return strfmt("x%d", col); };
  os << "\\ " << name << ": " << m.lp.num_vars() << " vars, " << m.lp.num_rows()
     << " rows, constant offset " << m.lp.c0 << "\n";
  os << "Minimize\n obj:";
  std::vector<double> lin = m.lp.c;
  double shift = 0.0;
  for (const QuadTerm& q : m.quads) {
    lin[q.var] -= q.q * q.center;  // (q/2)(x-c)^2 = (q/2)x^2 - qc x + const
    shift += 0.5 * q.q * q.center * q.center;
  }
  int written = 0;
  for (int j = 0; j < m.lp.num_vars(); ++j) {
    if (lin[j] == 0.0) continue;
    os << (lin[j] >= 0 ? " + " : " - ") << std::abs(lin[j]) << " " << var_name(j);
    if (++written % 8 == 0) os << "\n   ";
  }
  if (!m.quads.empty()) {
    os << " + [";
    for (const QuadTerm& q : m.quads) os << " + " << q.q << " " << var_name(q.var) << " ^ 2";
    os << " ] / 2";
  }
  if (shift != 0.0) os << "\n\\ plus constant " << shift + m.lp.c0;
  os << "\nSubject To\n";
  for (size_t r = 0; r < m.lp.rows.size(); ++r) {
    const LpRow& row = m.lp.rows[r];
    std::string tag = "row";
    for (const TaggedRow& tr : m.tagged)
      if (tr.row == static_cast<int>(r)) {
        tag = to_string(tr.tag);
        break;
      }
    os << " " << tag << r << ":";
    for (auto& [col, a] : row.coef)
      os << (a >= 0 ? " + " : " - ") << std::abs(a) << " " << var_name(col);
    os << (row.sense == RowSense::le ? " <= " : row.sense == RowSense::ge ? " >= " : " = ")
       << row.rhs << "\n";
  }
  os << "Bounds\n";
  for (int j = 0; j < m.lp.num_vars(); ++j) {
    const double l = m.lp.lb[j], u = m.lp.ub[j];
    if (l == -kInf && u == kInf)
      os << " " << var_name(j) << " free\n";
    else if (l == u)
      os << " " << var_name(j) << " = " << l << "\n";
    else {
      os << " ";
      if (l != 0.0 || l == -kInf) os << (l == -kInf ? "-inf" : strfmt("%g", l)) << " <= ";
      os << var_name(j);
      if (u != kInf) os << " <= " << u;
      os << "\n";
    }
  }
  if (!m.binaries.empty()) {
    os << "Binary\n";
    for (int j : m.binaries) os << " " << var_name(j) << "\n";
  }
  os << "End\n";
}

}  // namespace dncuc
