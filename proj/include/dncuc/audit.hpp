// Independent feasibility checker: re-verifies every returned solution
// against the physical rules directly (duration counters, transition limits,
// nodal sums) rather than through the model's rows, so builder and checker
// cannot share a bug.
#pragma once

#include <cmath>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "dncuc/ncuc.hpp"
#include "dncuc/system.hpp"

namespace dncuc {

struct AuditViolation {
  std::string what;
  double amount = 0.0;  // violation magnitude
};

struct AuditReport {
  std::vector<AuditViolation> violations;
  bool ok() const { return violations.empty(); }
  void write(std::ostream& os) const {
    for (const auto& v : violations) os << v.what << " (by " << v.amount << ")\n";
  }
};

// MW for power checks, MW after angle/reactance conversion for flows.
inline constexpr double kAuditTol = 1e-6;

// Checks one solved model's solution. area_idx >= 0 audits that area of a
// decoupled system, tie-line copies included; area_idx = -1 audits a
// centralized solution over the original system.
inline AuditReport audit_solution(const MultiAreaSystem& sys, int area_idx,
                                  const SubproblemResult& res, double tol = kAuditTol) {
  AuditReport rep;
  auto flag = [&](double amount, std::string what) {
    if (amount > tol) rep.violations.push_back({std::move(what), amount});
  };

  const Area* area = area_idx >= 0 ? &sys.areas[area_idx] : nullptr;
  std::vector<int> unit_ids, bus_ids, line_ids;
  if (area) {
    unit_ids = area->units;
    bus_ids = area->buses;
    line_ids = area->internal_lines;
  } else {
    for (size_t i = 0; i < sys.units.size(); ++i) unit_ids.push_back(static_cast<int>(i));
    for (size_t b = 0; b < sys.buses.size(); ++b) bus_ids.push_back(static_cast<int>(b));
    for (size_t l = 0; l < sys.lines.size(); ++l) line_ids.push_back(static_cast<int>(l));
  }
  const int nt = sys.nt;
  const int nu = static_cast<int>(unit_ids.size());
  const int nb = static_cast<int>(bus_ids.size());
  const int nl = static_cast<int>(line_ids.size());
  const int nc = area ? static_cast<int>(area->tie_copies.size()) : 0;

  if (static_cast<int>(res.I.size()) != nu || static_cast<int>(res.P.size()) != nu ||
      static_cast<int>(res.theta.size()) != nb || static_cast<int>(res.flow.size()) != nl ||
      static_cast<int>(res.tie.size()) != nc) {
    rep.violations.push_back({"result shape does not match the audited scope", 0.0});
    return rep;
  }

  for (int k = 0; k < nu; ++k) {
    const Unit& u = sys.units[unit_ids[k]];
    const int uid = u.id;
    const auto& I = res.I[k];
    const auto& P = res.P[k];

    for (int t = 0; t < nt; ++t) {
      flag(u.fuel.value(P[t]) - res.F[k][t],
           strfmt("unit %d h%d: production cost under-recovered", uid, t));
      flag(P[t] - u.pmax * I[t], strfmt("unit %d h%d: output above committed maximum", uid, t));
      flag(u.pmin * I[t] - P[t], strfmt("unit %d h%d: output below committed minimum", uid, t));
    }

    // Minimum dwell times via a direct on/off counter walk.
    int state = u.initially_on ? 1 : 0;
    int run = u.initial_hours;
    for (int t = 0; t < nt; ++t) {
      if (I[t] != state) {
        const int need = state ? u.min_on : u.min_off;
        if (run < need)
          rep.violations.push_back(
              {strfmt("unit %d h%d: switched %s after %d of %d hours", uid, t,
                      state ? "off" : "on", run, need),
               static_cast<double>(need - run)});
        state = I[t];
        run = 1;
      } else {
        ++run;
      }
    }

    for (int t = 0; t < nt; ++t) {
      const int prev = t == 0 ? (u.initially_on ? 1 : 0) : I[t - 1];
      flag(u.startup_cost * (I[t] - prev) - res.SU[k][t],
           strfmt("unit %d h%d: startup cost under-recovered", uid, t));
      flag(u.shutdown_cost * (prev - I[t]) - res.SD[k][t],
           strfmt("unit %d h%d: shutdown cost under-recovered", uid, t));
      flag(-res.SU[k][t], strfmt("unit %d h%d: negative startup cost", uid, t));
      flag(-res.SD[k][t], strfmt("unit %d h%d: negative shutdown cost", uid, t));
    }

    // Ramping as transition rules; hour 0 is checkable only when the unit
    // enters the horizon off (previous output then known to be zero).
    for (int t = 0; t < nt; ++t) {
      if (t == 0 && u.initially_on) continue;
      const int prev_on = t == 0 ? 0 : I[t - 1];
      const double prev_p = t == 0 ? 0.0 : P[t - 1];
      if (prev_on && I[t]) {
        flag(P[t] - prev_p - u.ramp_up, strfmt("unit %d h%d: ramp-up exceeded", uid, t));
        flag(prev_p - P[t] - u.ramp_down, strfmt("unit %d h%d: ramp-down exceeded", uid, t));
      } else if (!prev_on && I[t]) {
        flag(P[t] - u.pmin, strfmt("unit %d h%d: startup hour above minimum output", uid, t));
      } else if (prev_on && !I[t]) {
        flag(prev_p - u.pmin, strfmt("unit %d h%d: pre-shutdown hour above minimum output", uid, t));
      }
    }
  }

  std::map<int, int> bus_pos;
  for (int b = 0; b < nb; ++b) bus_pos[bus_ids[b]] = b;

  for (int b = 0; b < nb; ++b) {
    const int bus = bus_ids[b];
    for (int t = 0; t < nt; ++t) {
      double net = 0.0;
      for (int k = 0; k < nu; ++k)
        if (sys.units[unit_ids[k]].bus == bus) net += res.P[k][t];
      for (int l = 0; l < nl; ++l) {
        if (sys.lines[line_ids[l]].from == bus) net -= res.flow[l][t];
        if (sys.lines[line_ids[l]].to == bus) net += res.flow[l][t];
      }
      for (int c = 0; c < nc; ++c)
        if (area->tie_copies[c].local_bus == bus) net -= res.tie[c][t];
      for (size_t d = 0; d < sys.loads.size(); ++d)
        if (sys.loads[d].bus == bus) net -= sys.demand(static_cast<int>(d), t);
      flag(std::abs(net), strfmt("bus %d h%d: power balance off", sys.buses[bus].id, t));
    }
  }

  for (int l = 0; l < nl; ++l) {
    const Line& ln = sys.lines[line_ids[l]];
    for (int t = 0; t < nt; ++t) {
      const double implied =
          (res.theta[bus_pos.at(ln.from)][t] - res.theta[bus_pos.at(ln.to)][t]) / ln.reactance;
      flag(std::abs(res.flow[l][t] - implied),
           strfmt("line %d h%d: flow inconsistent with angles", ln.id, t));
      flag(std::abs(res.flow[l][t]) - ln.limit, strfmt("line %d h%d: limit exceeded", ln.id, t));
    }
  }
  for (int c = 0; c < nc; ++c) {
    const TieCopy& tc = area->tie_copies[c];
    const int lid = sys.tie(tc.tie).id;
    for (int t = 0; t < nt; ++t) {
      const double implied =
          (res.theta[bus_pos.at(tc.local_bus)][t] - res.pseudo[tc.pseudo][t]) / tc.reactance;
      flag(std::abs(res.tie[c][t] - implied),
           strfmt("tie %d copy h%d: flow inconsistent with angles", lid, t));
      flag(std::abs(res.tie[c][t]) - tc.limit, strfmt("tie %d copy h%d: limit exceeded", lid, t));
    }
  }

  const int ref = area ? area->reference_bus : sys.areas.front().reference_bus;
  for (int t = 0; t < nt; ++t)
    flag(std::abs(res.theta[bus_pos.at(ref)][t]),
         strfmt("bus %d h%d: reference angle nonzero", sys.buses[ref].id, t));

  return rep;
}

// Cross-area agreement of duplicated values at the end of a distributed run:
// for every global variable, the signed slot values of all owning areas must
// coincide within the consensus tolerance. slot_values is indexed like
// GlobalVariableMap::by_area: [area][slot position][t].
inline AuditReport audit_consensus(const MultiAreaSystem& sys,
                                   const std::vector<std::vector<std::vector<double>>>& slot_values,
                                   double tol) {
  AuditReport rep;
  const int nt = sys.nt;
  const int ng = sys.gmap.n_globals;
  std::vector<std::vector<double>> lo(ng, std::vector<double>(nt, kInf));
  std::vector<std::vector<double>> hi(ng, std::vector<double>(nt, -kInf));
  for (size_t a = 0; a < sys.gmap.by_area.size(); ++a) {
    const auto& slots = sys.gmap.by_area[a];
    for (size_t s = 0; s < slots.size(); ++s) {
      for (int t = 0; t < nt; ++t) {
        const double v = slots[s].sign * slot_values[a][s][t];
        lo[slots[s].global][t] = std::min(lo[slots[s].global][t], v);
        hi[slots[s].global][t] = std::max(hi[slots[s].global][t], v);
      }
    }
  }
  for (int g = 0; g < ng; ++g)
    for (int t = 0; t < nt; ++t)
      if (hi[g][t] - lo[g][t] > tol)
        rep.violations.push_back({strfmt("global %d h%d: duplicates disagree", g, t),
                                  hi[g][t] - lo[g][t]});
  return rep;
}

// True operating cost of a committed, dispatched schedule: production cost
// from the curve, no-load while on, transition costs against the initial
// state. This is the cost that enters the centralized/distributed comparison,
// free of any consensus terms.
inline double schedule_cost(const MultiAreaSystem& sys, const std::vector<int>& unit_ids,
                            const std::vector<std::vector<int>>& I,
                            const std::vector<std::vector<double>>& P) {
  double c = 0.0;
  for (size_t k = 0; k < unit_ids.size(); ++k) {
    const Unit& u = sys.units[unit_ids[k]];
    int prev = u.initially_on ? 1 : 0;
    for (int t = 0; t < sys.nt; ++t) {
      if (I[k][t]) c += u.fuel.value(P[k][t]) + u.no_load_cost;
      if (I[k][t] > prev) c += u.startup_cost;
      if (I[k][t] < prev) c += u.shutdown_cost;
      prev = I[k][t];
    }
  }
  return c;
}

}  // namespace dncuc
