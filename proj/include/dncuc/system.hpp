// Multi-area power-system data model: buses, lines, units, loads, the area
// partition, pseudo-bus duplication, and the global consensus-variable map.
#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dncuc/common.hpp"
#include "dncuc/pwl.hpp"

namespace dncuc {

struct Unit {
  int id = -1;
  int bus = -1;          // index into MultiAreaSystem::buses
  double pmin = 0.0;     // MW
  double pmax = 0.0;     // MW
  int min_on = 1;        // hours
  int min_off = 1;       // hours
  double ramp_up = 0.0;  // MW/h
  double ramp_down = 0.0;
  double startup_cost = 0.0;
  double shutdown_cost = 0.0;
  double no_load_cost = 0.0;  // $/h while committed
  PiecewiseLinear fuel;       // $ as a function of MW
  bool initially_on = false;
  int initial_hours = 0;  // hours the unit has already been in its initial state
};

enum class LineKind { internal, tie };

struct Line {
  int id = -1;
  int from = -1;  // bus index
  int to = -1;    // bus index
  double reactance = 0.0;  // per-unit, > 0
  double limit = 0.0;      // MW, symmetric
  LineKind kind = LineKind::internal;
};

struct Load {
  int id = -1;
  int bus = -1;
  std::vector<double> profile;  // MW per hour, length nt
};

struct Bus {
  int id = -1;
  int area = -1;    // area index
  bool reference = false;
};

// A boundary bus of an adjacent area duplicated into this one.
struct PseudoBus {
  int origin_bus = -1;   // bus index in the owning area
  int origin_area = -1;  // area index the real bus belongs to
};

// One local copy of a tie-line inside an area, oriented from the area's own
// boundary bus towards the pseudo copy of the far bus.
struct TieCopy {
  int tie = -1;         // index into MultiAreaSystem::tie_lines
  int local_bus = -1;   // real boundary bus (bus index)
  int pseudo = -1;      // index into Area::pseudo_buses
  double reactance = 0.0;
  double limit = 0.0;
  bool owns_from_side = false;  // true in the area containing the line's from-bus
};

struct Area {
  int id = -1;
  std::vector<int> buses;          // bus indices
  std::vector<int> units;          // unit indices
  std::vector<int> internal_lines; // line indices
  std::vector<int> loads;          // load indices
  int reference_bus = -1;          // bus index
  std::vector<PseudoBus> pseudo_buses;  // populated by decouple()
  std::vector<TieCopy> tie_copies;      // populated by decouple()

  // Number of tie-lines incident to this area (set by decouple; drives the
  // spatial fixing priority rule).
  int tie_count = 0;
};

enum class DecoupleStrategy { none, tie_flow, bus_angle };

inline const char* to_string(DecoupleStrategy s) {
  switch (s) {
    case DecoupleStrategy::tie_flow: return "tieline";
    case DecoupleStrategy::bus_angle: return "angle";
    default: return "none";
  }
}

// What a consensus slot reads from a subproblem solution.
enum class SlotKind { tie_flow, angle };

// One (area, w) entry of the mapping G_t(n, w) = g. The mapping is the same
// for every hour; values Z_{g,t} and multipliers lambda_{n,t}(w) are per-hour.
struct ConsensusSlot {
  int area = -1;
  int w = -1;        // 1-based slot id within the area (see GlobalVariableMap docs)
  int global = -1;   // g
  double sign = 1.0; // sigma: slot value enters consensus as sign * raw value
  SlotKind kind = SlotKind::tie_flow;
  int tie_copy = -1;   // index into Area::tie_copies (tie_flow slots)
  int angle_bus = -1;  // bus index (>= 0) or ~pseudo index (< 0) for angle slots
};

// Maps duplicated per-area variables onto global consensus variables.
//
// Tie-line-flow strategy: one global per tie-line; each global has exactly two
// slots with opposite signs. Slot w numbers an area's power-flow variables
// 1-based, internal lines first, then tie copies, so in a 2-area system with
// one internal line per area the tie slot is w = 2 on both sides.
//
// Bus-angle strategy: one global per duplicated boundary-bus angle; each
// global's slots are the real angle plus every pseudo copy, all with sign +1.
struct GlobalVariableMap {
  DecoupleStrategy strategy = DecoupleStrategy::none;
  int n_globals = 0;  // per-hour count; total global variables = n_globals * nt
  std::vector<std::vector<ConsensusSlot>> by_area;   // [area] -> slots
  std::vector<std::vector<ConsensusSlot>> by_global; // [g] -> slots (copies)

  int total_globals(int nt) const { return n_globals * nt; }
};

struct MultiAreaSystem {
  std::string name;
  int nt = 0;  // scheduling horizon, hours
  unsigned long seed = 0;  // provenance for generated cases
  std::vector<Bus> buses;
  std::vector<Unit> units;
  std::vector<Load> loads;
  std::vector<Line> lines;
  std::vector<Area> areas;
  std::vector<int> tie_lines;  // line indices with endpoints in different areas
  DecoupleStrategy strategy = DecoupleStrategy::none;
  GlobalVariableMap gmap;

  bool decoupled() const { return strategy != DecoupleStrategy::none; }

  const Line& tie(int t) const { return lines[tie_lines[t]]; }

  double total_capacity() const {
    double c = 0.0;
    for (const auto& u : units) c += u.pmax;
    return c;
  }

  // Demand of load d at hour t (0-based).
  double demand(int d, int t) const { return loads[d].profile[t]; }

  double area_demand(int a, int t) const {
    double s = 0.0;
    for (int d : areas[a].loads) s += loads[d].profile[t];
    return s;
  }

  double system_demand(int t) const {
    double s = 0.0;
    for (const auto& l : loads) s += l.profile[t];
    return s;
  }
};

// Derives per-area membership lists, reference-bus indices, line kinds, and
// the tie-line list from the primitive bus/unit/load/line fields. Call once
// after filling those (the case loader and generator both do).
inline void assemble(MultiAreaSystem& sys) {
  for (auto& a : sys.areas) {
    a.buses.clear();
    a.units.clear();
    a.internal_lines.clear();
    a.loads.clear();
    a.reference_bus = -1;
  }
  sys.tie_lines.clear();
  for (size_t b = 0; b < sys.buses.size(); ++b) {
    const Bus& bus = sys.buses[b];
    if (bus.area < 0 || bus.area >= static_cast<int>(sys.areas.size()))
      throw validation_error(strfmt("bus %d has an invalid area index", bus.id));
    sys.areas[bus.area].buses.push_back(static_cast<int>(b));
    if (bus.reference) sys.areas[bus.area].reference_bus = static_cast<int>(b);
  }
  auto area_of_bus = [&](int b, int entity_id, const char* what) {
    if (b < 0 || b >= static_cast<int>(sys.buses.size()))
      throw validation_error(strfmt("%s %d references unknown bus", what, entity_id));
    return sys.buses[b].area;
  };
  for (size_t u = 0; u < sys.units.size(); ++u)
    sys.areas[area_of_bus(sys.units[u].bus, sys.units[u].id, "unit")]
        .units.push_back(static_cast<int>(u));
  for (size_t d = 0; d < sys.loads.size(); ++d)
    sys.areas[area_of_bus(sys.loads[d].bus, sys.loads[d].id, "load")]
        .loads.push_back(static_cast<int>(d));
  for (size_t li = 0; li < sys.lines.size(); ++li) {
    Line& l = sys.lines[li];
    int af = area_of_bus(l.from, l.id, "line");
    int at = area_of_bus(l.to, l.id, "line");
    l.kind = af == at ? LineKind::internal : LineKind::tie;
    if (l.kind == LineKind::internal)
      sys.areas[af].internal_lines.push_back(static_cast<int>(li));
    else
      sys.tie_lines.push_back(static_cast<int>(li));
  }
}

namespace detail {

// Union-find over bus indices, for connectivity checks.
class DisjointSet {
public:
  explicit DisjointSet(size_t n) : parent_(n) {
    for (size_t i = 0; i < n; ++i) parent_[i] = static_cast<int>(i);
  }
  int find(int x) {
    while (parent_[x] != x) { parent_[x] = parent_[parent_[x]]; x = parent_[x]; }
    return x;
  }
  void unite(int a, int b) { parent_[find(a)] = find(b); }

private:
  std::vector<int> parent_;
};

}  // namespace detail

// Checks every structural invariant of a freshly built system. Called by the
// case loader and the generator; throws validation_error naming the violation.
inline void validate(const MultiAreaSystem& sys) {
  if (sys.nt < 1) throw validation_error("horizon nt must be >= 1");
  if (sys.areas.empty()) throw validation_error("system has no areas");
  if (sys.buses.empty()) throw validation_error("system has no buses");

  std::vector<int> bus_area(sys.buses.size(), -1);
  for (size_t a = 0; a < sys.areas.size(); ++a) {
    if (sys.areas[a].buses.empty())
      throw validation_error(strfmt("area %d has no buses", sys.areas[a].id));
    for (int b : sys.areas[a].buses) {
      if (bus_area[b] != -1)
        throw validation_error(strfmt("bus %d assigned to two areas", sys.buses[b].id));
      bus_area[b] = static_cast<int>(a);
    }
  }
  for (size_t b = 0; b < sys.buses.size(); ++b)
    if (bus_area[b] < 0)
      throw validation_error(strfmt("bus %d belongs to no area", sys.buses[b].id));

  for (size_t a = 0; a < sys.areas.size(); ++a) {
    int refs = 0;
    for (int b : sys.areas[a].buses) refs += sys.buses[b].reference ? 1 : 0;
    if (refs != 1)
      throw validation_error(
          strfmt("area %d must designate exactly one reference bus (has %d)",
                 sys.areas[a].id, refs));
  }

  for (const auto& u : sys.units) {
    if (u.bus < 0 || u.bus >= static_cast<int>(sys.buses.size()))
      throw validation_error(strfmt("unit %d references unknown bus", u.id));
    if (u.pmin < 0 || u.pmin > u.pmax)
      throw validation_error(strfmt("unit %d needs 0 <= pmin <= pmax", u.id));
    if (u.min_on < 1 || u.min_off < 1)
      throw validation_error(strfmt("unit %d needs min_on, min_off >= 1", u.id));
    if (u.ramp_up <= 0 || u.ramp_down <= 0)
      throw validation_error(strfmt("unit %d needs positive ramp rates", u.id));
    if (u.fuel.xmax() < u.pmax - 1e-9)
      throw validation_error(strfmt("unit %d fuel curve must cover [0, pmax]", u.id));
    for (size_t s = 0; s + 1 <= u.fuel.segments(); ++s)
      if (u.fuel.x(s + 1) > u.pmax + 1e-9)
        throw validation_error(strfmt("unit %d fuel breakpoint above pmax", u.id));
    if (u.initial_hours < 1)
      throw validation_error(strfmt("unit %d initial on/off counter must be >= 1", u.id));
  }

  for (const auto& l : sys.loads) {
    if (l.bus < 0 || l.bus >= static_cast<int>(sys.buses.size()))
      throw validation_error(strfmt("load %d references unknown bus", l.id));
    if (static_cast<int>(l.profile.size()) != sys.nt)
      throw validation_error(
          strfmt("load %d profile length %zu != nt %d", l.id, l.profile.size(), sys.nt));
    for (double p : l.profile)
      if (p < 0) throw validation_error(strfmt("load %d has negative demand", l.id));
  }

  for (const auto& l : sys.lines) {
    if (l.from < 0 || l.from >= static_cast<int>(sys.buses.size()) ||
        l.to < 0 || l.to >= static_cast<int>(sys.buses.size()))
      throw validation_error(strfmt("line %d references unknown bus", l.id));
    if (l.from == l.to)
      throw validation_error(strfmt("line %d connects a bus to itself", l.id));
    if (l.reactance <= 0)
      throw validation_error(strfmt("line %d needs positive reactance", l.id));
    if (l.limit <= 0)
      throw validation_error(strfmt("line %d needs a positive flow limit", l.id));
    bool crosses = bus_area[l.from] != bus_area[l.to];
    if ((l.kind == LineKind::tie) != crosses)
      throw validation_error(strfmt(
          "line %d: tie-lines are exactly the lines whose endpoints lie in "
          "different areas", l.id));
  }

  // Each area's internal network must be connected; tie-lines connect the
  // area graph.
  for (const auto& area : sys.areas) {
    if (area.buses.size() < 2) continue;
    detail::DisjointSet ds(sys.buses.size());
    for (int li : area.internal_lines) ds.unite(sys.lines[li].from, sys.lines[li].to);
    // Pseudo-bus attachments (only present post-decoupling) hang off real
    // buses and cannot disconnect anything.
    int root = ds.find(area.buses.front());
    for (int b : area.buses)
      if (ds.find(b) != root)
        throw validation_error(strfmt("area %d network is not connected", area.id));
  }
}

// Populates Area::pseudo_buses / tie_copies and builds the consensus-variable
// map for the chosen strategy. Rejects an already-decoupled system.
inline void decouple(MultiAreaSystem& sys, DecoupleStrategy strategy) {
  if (strategy == DecoupleStrategy::none)
    throw config_error("decouple requires an explicit strategy");
  if (sys.decoupled())
    throw config_error("system already decoupled");

  std::vector<int> bus_area(sys.buses.size());
  for (size_t a = 0; a < sys.areas.size(); ++a)
    for (int b : sys.areas[a].buses) bus_area[b] = static_cast<int>(a);

  // Duplicate each tie-line's far bus into the near area (dedup by origin).
  auto pseudo_of = [&](int area, int origin_bus) -> int {
    auto& ps = sys.areas[area].pseudo_buses;
    for (size_t i = 0; i < ps.size(); ++i)
      if (ps[i].origin_bus == origin_bus) return static_cast<int>(i);
    ps.push_back({origin_bus, bus_area[origin_bus]});
    return static_cast<int>(ps.size()) - 1;
  };

  for (size_t ti = 0; ti < sys.tie_lines.size(); ++ti) {
    const Line& line = sys.lines[sys.tie_lines[ti]];
    int a_from = bus_area[line.from];
    int a_to = bus_area[line.to];
    sys.areas[a_from].tie_copies.push_back(
        {static_cast<int>(ti), line.from, pseudo_of(a_from, line.to),
         line.reactance, line.limit, true});
    sys.areas[a_to].tie_copies.push_back(
        {static_cast<int>(ti), line.to, pseudo_of(a_to, line.from),
         line.reactance, line.limit, false});
    sys.areas[a_from].tie_count++;
    sys.areas[a_to].tie_count++;
  }

  GlobalVariableMap map;
  map.strategy = strategy;
  map.by_area.resize(sys.areas.size());

  if (strategy == DecoupleStrategy::tie_flow) {
    // One global per tie-line; slots carry opposite signs. Slot ids continue
    // the area's power-flow variable numbering (internal lines first).
    map.n_globals = static_cast<int>(sys.tie_lines.size());
    map.by_global.resize(map.n_globals);
    for (size_t a = 0; a < sys.areas.size(); ++a) {
      const Area& area = sys.areas[a];
      for (size_t c = 0; c < area.tie_copies.size(); ++c) {
        ConsensusSlot slot;
        slot.area = static_cast<int>(a);
        slot.w = static_cast<int>(area.internal_lines.size() + c) + 1;
        slot.global = area.tie_copies[c].tie;
        slot.sign = area.tie_copies[c].owns_from_side ? 1.0 : -1.0;
        slot.kind = SlotKind::tie_flow;
        slot.tie_copy = static_cast<int>(c);
        map.by_area[a].push_back(slot);
        map.by_global[slot.global].push_back(slot);
      }
    }
  } else {
    // One global per duplicated boundary-bus angle: the real angle plus all
    // pseudo copies agree on it directly.
    std::map<int, int> global_of_bus;  // bus index -> g
    auto g_of = [&](int bus) {
      auto it = global_of_bus.find(bus);
      if (it != global_of_bus.end()) return it->second;
      int g = static_cast<int>(global_of_bus.size());
      global_of_bus.emplace(bus, g);
      return g;
    };
    // Register in tie order so global ids are deterministic.
    for (int li : sys.tie_lines) {
      g_of(sys.lines[li].from);
      g_of(sys.lines[li].to);
    }
    map.n_globals = static_cast<int>(global_of_bus.size());
    map.by_global.resize(map.n_globals);
    for (size_t a = 0; a < sys.areas.size(); ++a) {
      const Area& area = sys.areas[a];
      // Real boundary angles first, then pseudo copies, both in first-use order.
      std::vector<std::pair<int, int>> entries;  // (g, angle ref: bus or ~pseudo)
      std::set<int> seen_real;
      for (const TieCopy& tc : area.tie_copies)
        if (seen_real.insert(tc.local_bus).second)
          entries.push_back({g_of(tc.local_bus), tc.local_bus});
      for (size_t p = 0; p < area.pseudo_buses.size(); ++p)
        entries.push_back({g_of(area.pseudo_buses[p].origin_bus),
                           ~static_cast<int>(p)});
      for (size_t i = 0; i < entries.size(); ++i) {
        ConsensusSlot slot;
        slot.area = static_cast<int>(a);
        slot.w = static_cast<int>(i) + 1;
        slot.global = entries[i].first;
        slot.sign = 1.0;
        slot.kind = SlotKind::angle;
        slot.angle_bus = entries[i].second;
        map.by_area[a].push_back(slot);
        map.by_global[slot.global].push_back(slot);
      }
    }
  }

  sys.gmap = std::move(map);
  sys.strategy = strategy;
}

}  // namespace dncuc
