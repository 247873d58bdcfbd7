// Case file reader/writer.
//
// Format: UTF-8 text, '#' comments, sections introduced by a bracketed
// header. Key=value pairs may follow the header on the same line or on
// subsequent lines. Unknown keys and missing required keys are errors.
//
//   [system] nt=24 name=demo
//   [area 1]
//   [bus 1] area=1 ref=1
//   [unit 1] bus=1 pmin=20 pmax=120 minon=2 minoff=2 rup=60 rdn=60
//            csu=150 csd=30 cnl=80 fuel=0:0,60:1200,120:2760 i0=1 cnt0=2
//   [line 1] from=1 to=2 x=0.1 limit=150
//   [load 1] bus=2 profile=30,35,...
#pragma once

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "dncuc/system.hpp"

namespace dncuc {

namespace caseio {

struct KeyValue {
  std::string key, value;
  int line = 0;
};

struct Section {
  std::string kind;   // "system", "area", "bus", "unit", "line", "load"
  int id = 0;         // entity id (unused for [system])
  int line = 0;
  std::vector<KeyValue> kvs;
};

inline std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) { out.push_back(cur); cur.clear(); }
    else cur += c;
  }
  out.push_back(cur);
  return out;
}

inline std::vector<Section> tokenize(std::istream& in, const std::string& file) {
  std::vector<Section> sections;
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw;
    if (auto pos = line.find('#'); pos != std::string::npos) line = line.substr(0, pos);
    line = trim(line);
    if (line.empty()) continue;

    std::string rest = line;
    if (line[0] == '[') {
      auto close = line.find(']');
      if (close == std::string::npos)
        throw parse_error(file, lineno, "unterminated section header");
      std::string header = trim(line.substr(1, close - 1));
      std::istringstream hs(header);
      Section sec;
      sec.line = lineno;
      hs >> sec.kind;
      if (sec.kind.empty()) throw parse_error(file, lineno, "empty section header");
      if (sec.kind != "system") {
        if (!(hs >> sec.id))
          throw parse_error(file, lineno, "section [" + sec.kind + "] needs an integer id");
      }
      std::string extra;
      if (hs >> extra)
        throw parse_error(file, lineno, "trailing text in section header: " + extra);
      sections.push_back(sec);
      rest = trim(line.substr(close + 1));
      if (rest.empty()) continue;
    }
    if (sections.empty())
      throw parse_error(file, lineno, "key-value pair before any section");

    std::istringstream ts(rest);
    std::string tok;
    while (ts >> tok) {
      auto eq = tok.find('=');
      if (eq == std::string::npos || eq == 0)
        throw parse_error(file, lineno, "expected key=value, got: " + tok);
      sections.back().kvs.push_back({tok.substr(0, eq), tok.substr(eq + 1), lineno});
    }
  }
  return sections;
}

// Accessor over one section's pairs with strict unknown-key checking.
class Fields {
public:
  Fields(const Section& sec, const std::string& file) : sec_(sec), file_(file) {}

  std::string str(const std::string& key) {
    const KeyValue* kv = find(key);
    if (!kv)
      throw parse_error(file_, sec_.line,
                        "[" + sec_.kind + "] is missing required key '" + key + "'");
    return kv->value;
  }

  double num(const std::string& key) { return to_num(str(key), key); }

  int integer(const std::string& key) {
    double v = num(key);
    if (v != static_cast<int>(v))
      throw parse_error(file_, sec_.line, "key '" + key + "' must be an integer");
    return static_cast<int>(v);
  }

  std::vector<double> num_list(const std::string& key) {
    std::vector<double> out;
    for (const std::string& part : split(str(key), ','))
      out.push_back(to_num(trim(part), key));
    return out;
  }

  // fuel=b0:c0,b1:c1,...
  PiecewiseLinear fuel(const std::string& key) {
    std::vector<double> xs, ys;
    for (const std::string& part : split(str(key), ',')) {
      auto halves = split(trim(part), ':');
      if (halves.size() != 2)
        throw parse_error(file_, sec_.line, "fuel breakpoints must be b:c pairs");
      xs.push_back(to_num(halves[0], key));
      ys.push_back(to_num(halves[1], key));
    }
    try {
      return PiecewiseLinear(xs, ys);
    } catch (const validation_error& e) {
      throw parse_error(file_, sec_.line, e.what());
    }
  }

  void finish() {
    for (const KeyValue& kv : sec_.kvs)
      if (!used_.count(kv.key))
        throw parse_error(file_, kv.line,
                          "unknown key '" + kv.key + "' in [" + sec_.kind + "]");
  }

private:
  const KeyValue* find(const std::string& key) {
    used_.insert(key);
    const KeyValue* hit = nullptr;
    for (const KeyValue& kv : sec_.kvs) {
      if (kv.key == key) {
        if (hit)
          throw parse_error(file_, kv.line, "duplicate key '" + key + "'");
        hit = &kv;
      }
    }
    return hit;
  }

  double to_num(const std::string& s, const std::string& key) {
    try {
      size_t used = 0;
      double v = std::stod(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw parse_error(file_, sec_.line, "key '" + key + "' has non-numeric value '" + s + "'");
    }
  }

  const Section& sec_;
  const std::string& file_;
  std::set<std::string> used_;
};

}  // namespace caseio

inline MultiAreaSystem parse_case(std::istream& in, const std::string& file) {
  using namespace caseio;
  std::vector<Section> sections = tokenize(in, file);
  if (sections.empty()) throw parse_error(file, 1, "empty case file");

  MultiAreaSystem sys;
  bool have_system = false;
  std::map<int, int> area_index, bus_index;

  auto require_unique = [&](std::map<int, int>& index, int id, size_t pos,
                            const Section& sec) {
    if (!index.emplace(id, static_cast<int>(pos)).second)
      throw parse_error(file, sec.line,
                        "duplicate [" + sec.kind + " " + std::to_string(id) + "]");
  };

  // Two passes: declarations ([system], [area], [bus]) first so later
  // sections can resolve bus/area references regardless of file order.
  for (const Section& sec : sections) {
    Fields f(sec, file);
    if (sec.kind == "system") {
      if (have_system) throw parse_error(file, sec.line, "duplicate [system] section");
      have_system = true;
      sys.nt = f.integer("nt");
      sys.name = f.str("name");
      f.finish();
      if (sys.nt < 1) throw parse_error(file, sec.line, "nt must be >= 1");
    } else if (sec.kind == "area") {
      require_unique(area_index, sec.id, sys.areas.size(), sec);
      Area a;
      a.id = sec.id;
      sys.areas.push_back(a);
      f.finish();
    } else if (sec.kind == "bus") {
      require_unique(bus_index, sec.id, sys.buses.size(), sec);
      Bus b;
      b.id = sec.id;
      int area_id = f.integer("area");
      auto it = area_index.find(area_id);
      if (it == area_index.end())
        throw parse_error(file, sec.line, strfmt("bus %d references unknown area %d",
                                                 sec.id, area_id));
      b.area = it->second;
      b.reference = f.integer("ref") != 0;
      f.finish();
      sys.buses.push_back(b);
    }
  }
  if (!have_system) throw parse_error(file, 1, "missing [system] section");

  std::map<int, int> unit_index, line_index, load_index;
  auto resolve_bus = [&](int id, const Section& sec) {
    auto it = bus_index.find(id);
    if (it == bus_index.end())
      throw parse_error(file, sec.line, strfmt("reference to unknown bus %d", id));
    return it->second;
  };

  for (const Section& sec : sections) {
    Fields f(sec, file);
    if (sec.kind == "unit") {
      require_unique(unit_index, sec.id, sys.units.size(), sec);
      Unit u;
      u.id = sec.id;
      u.bus = resolve_bus(f.integer("bus"), sec);
      u.pmin = f.num("pmin");
      u.pmax = f.num("pmax");
      u.min_on = f.integer("minon");
      u.min_off = f.integer("minoff");
      u.ramp_up = f.num("rup");
      u.ramp_down = f.num("rdn");
      u.startup_cost = f.num("csu");
      u.shutdown_cost = f.num("csd");
      u.no_load_cost = f.num("cnl");
      u.fuel = f.fuel("fuel");
      u.initially_on = f.integer("i0") != 0;
      u.initial_hours = f.integer("cnt0");
      f.finish();
      sys.units.push_back(u);
    } else if (sec.kind == "line") {
      require_unique(line_index, sec.id, sys.lines.size(), sec);
      Line l;
      l.id = sec.id;
      l.from = resolve_bus(f.integer("from"), sec);
      l.to = resolve_bus(f.integer("to"), sec);
      l.reactance = f.num("x");
      l.limit = f.num("limit");
      f.finish();
      sys.lines.push_back(l);
    } else if (sec.kind == "load") {
      require_unique(load_index, sec.id, sys.loads.size(), sec);
      Load d;
      d.id = sec.id;
      d.bus = resolve_bus(f.integer("bus"), sec);
      d.profile = f.num_list("profile");
      f.finish();
      sys.loads.push_back(d);
    } else if (sec.kind != "system" && sec.kind != "area" && sec.kind != "bus") {
      throw parse_error(file, sec.line, "unknown section [" + sec.kind + "]");
    }
  }

  assemble(sys);
  validate(sys);
  return sys;
}

inline MultiAreaSystem load_case(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open case file: " + path);
  return parse_case(in, path);
}

inline void write_case(const MultiAreaSystem& sys, std::ostream& out) {
  auto fmt = [](double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return std::string(buf);
  };
  out << "[system] nt=" << sys.nt << " name=" << sys.name << "\n\n";
  for (const Area& a : sys.areas) out << "[area " << a.id << "]\n";
  out << "\n";
  for (const Bus& b : sys.buses)
    out << "[bus " << b.id << "] area=" << sys.areas[b.area].id
        << " ref=" << (b.reference ? 1 : 0) << "\n";
  out << "\n";
  for (const Unit& u : sys.units) {
    out << "[unit " << u.id << "] bus=" << sys.buses[u.bus].id
        << " pmin=" << fmt(u.pmin) << " pmax=" << fmt(u.pmax)
        << " minon=" << u.min_on << " minoff=" << u.min_off
        << " rup=" << fmt(u.ramp_up) << " rdn=" << fmt(u.ramp_down)
        << " csu=" << fmt(u.startup_cost) << " csd=" << fmt(u.shutdown_cost)
        << " cnl=" << fmt(u.no_load_cost) << " fuel=";
    for (size_t i = 0; i <= u.fuel.segments(); ++i)
      out << (i ? "," : "") << fmt(u.fuel.x(i)) << ":" << fmt(u.fuel.y(i));
    out << " i0=" << (u.initially_on ? 1 : 0) << " cnt0=" << u.initial_hours << "\n";
  }
  out << "\n";
  for (const Line& l : sys.lines)
    out << "[line " << l.id << "] from=" << sys.buses[l.from].id
        << " to=" << sys.buses[l.to].id << " x=" << fmt(l.reactance)
        << " limit=" << fmt(l.limit) << "\n";
  out << "\n";
  for (const Load& d : sys.loads) {
    out << "[load " << d.id << "] bus=" << sys.buses[d.bus].id << " profile=";
    for (size_t t = 0; t < d.profile.size(); ++t)
      out << (t ? "," : "") << fmt(d.profile[t]);
    out << "\n";
  }
}

inline void save_case(const MultiAreaSystem& sys, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw parse_error("cannot write case file: " + path);
  write_case(sys, out);
}

}  // namespace dncuc
