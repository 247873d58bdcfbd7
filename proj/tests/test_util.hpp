// Shared helpers for building small systems in tests.
#pragma once

#include <string>
#include <vector>

#include "dncuc/case_io.hpp"
#include "dncuc/system.hpp"

namespace dncuc::testing {

inline std::string src_path(const std::string& rel) {
  return std::string(DNCUC_SOURCE_DIR) + "/" + rel;
}

inline Unit make_unit(int id, int bus, double pmin, double pmax) {
  Unit u;
  u.id = id;
  u.bus = bus;
  u.pmin = pmin;
  u.pmax = pmax;
  u.min_on = 1;
  u.min_off = 1;
  u.ramp_up = pmax;
  u.ramp_down = pmax;
  u.startup_cost = 100.0;
  u.shutdown_cost = 10.0;
  u.no_load_cost = 50.0;
  u.fuel = PiecewiseLinear({0.0, pmax}, {0.0, 20.0 * pmax});
  u.initially_on = false;
  u.initial_hours = 1;
  return u;
}

inline Load make_load(int id, int bus, std::vector<double> profile) {
  Load d;
  d.id = id;
  d.bus = bus;
  d.profile = std::move(profile);
  return d;
}

inline Line make_line(int id, int from, int to, double x = 0.1, double limit = 100.0) {
  Line l;
  l.id = id;
  l.from = from;
  l.to = to;
  l.reactance = x;
  l.limit = limit;
  return l;
}

// Two areas, two buses each, one internal line per area, one tie 2-3.
// Mirrors cases/appendix_2area.case but with a configurable horizon. Units
// start the horizon on so that hour 1 is not a pinned startup hour.
inline MultiAreaSystem two_area_system(int nt = 4) {
  MultiAreaSystem sys;
  sys.name = "two_area";
  sys.nt = nt;
  sys.areas.resize(2);
  sys.areas[0].id = 1;
  sys.areas[1].id = 2;
  sys.buses = {{1, 0, true}, {2, 0, false}, {3, 1, false}, {4, 1, true}};
  sys.units.push_back(make_unit(1, 0, 20, 120));
  sys.units.push_back(make_unit(2, 3, 30, 180));
  for (Unit& u : sys.units) u.initially_on = true;
  sys.lines.push_back(make_line(1, 0, 1, 0.05, 150));
  sys.lines.push_back(make_line(2, 2, 3, 0.05, 200));
  sys.lines.push_back(make_line(3, 1, 2, 0.1, 80));
  sys.loads.push_back(make_load(1, 1, std::vector<double>(nt, 50.0)));
  sys.loads.push_back(make_load(2, 2, std::vector<double>(nt, 80.0)));
  assemble(sys);
  validate(sys);
  return sys;
}

// Single area, single bus carrying every unit and one load.
inline MultiAreaSystem one_bus_system(std::vector<Unit> units, std::vector<double> profile) {
  MultiAreaSystem sys;
  sys.name = "one_bus";
  sys.nt = static_cast<int>(profile.size());
  sys.areas.resize(1);
  sys.areas[0].id = 1;
  sys.buses = {{1, 0, true}};
  for (Unit& u : units) {
    u.bus = 0;
    sys.units.push_back(u);
  }
  sys.loads.push_back(make_load(1, 0, std::move(profile)));
  assemble(sys);
  validate(sys);
  return sys;
}

// Single area, generator bus 1 feeding load bus 2 over one line.
inline MultiAreaSystem two_bus_system(std::vector<Unit> units, std::vector<double> profile,
                                      double x = 0.1, double limit = 100.0) {
  MultiAreaSystem sys;
  sys.name = "two_bus";
  sys.nt = static_cast<int>(profile.size());
  sys.areas.resize(1);
  sys.areas[0].id = 1;
  sys.buses = {{1, 0, true}, {2, 0, false}};
  for (Unit& u : units) {
    u.bus = 0;
    sys.units.push_back(u);
  }
  sys.lines.push_back(make_line(1, 0, 1, x, limit));
  sys.loads.push_back(make_load(1, 1, std::move(profile)));
  assemble(sys);
  validate(sys);
  return sys;
}

// Ring of k areas; area a holds buses 2a and 2a+1 joined by an internal line,
// tie-lines 2a+1 -> 2(a+1) close the ring. One unit and one flat load per area.
inline MultiAreaSystem ring_system(int k, int nt = 4) {
  MultiAreaSystem sys;
  sys.name = "ring" + std::to_string(k);
  sys.nt = nt;
  sys.areas.resize(k);
  int next_line = 1;
  for (int a = 0; a < k; ++a) {
    sys.areas[a].id = a + 1;
    sys.buses.push_back({2 * a + 1, a, true});
    sys.buses.push_back({2 * a + 2, a, false});
    sys.units.push_back(make_unit(a + 1, 2 * a, 10, 200));
    sys.loads.push_back(make_load(a + 1, 2 * a + 1, std::vector<double>(nt, 60.0)));
    sys.lines.push_back(make_line(next_line++, 2 * a, 2 * a + 1));
  }
  for (int a = 0; a < k; ++a)
    sys.lines.push_back(make_line(next_line++, 2 * a + 1, (2 * (a + 1)) % (2 * k)));
  assemble(sys);
  validate(sys);
  return sys;
}

}  // namespace dncuc::testing
