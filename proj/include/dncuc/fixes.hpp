// Permanent fixing decisions accumulated over a distributed run: commitment
// binaries pinned by the oscillation heuristics, and consensus globals pinned
// once converged. Entries are never released.
#pragma once

#include <map>
#include <ostream>
#include <utility>
#include <vector>

#include "dncuc/common.hpp"

namespace dncuc {

struct FixEntry {
  enum class Kind { binary, global };
  Kind kind = Kind::binary;
  int area = -1;  // area index (binary entries; informational)
  int unit = -1;  // system-wide unit index (binary entries)
  int g = -1;     // global variable id (global entries)
  int hour = 0;
  double value = 1.0;
  int iteration = 0;  // iteration at which the fix was applied
  // Selection provenance: the hour picked by the temporal rule, the area
  // picked by the tie-line-count rule, the unit picked by the cost rule.
  int rule_hour = -1;
  int rule_area = -1;
  int rule_unit = -1;
};

class FixLedger {
 public:
  bool binary_fixed(int unit, int hour) const { return bin_.count({unit, hour}) > 0; }
  double binary_value(int unit, int hour) const { return bin_.at({unit, hour}); }
  bool global_fixed(int g, int hour) const { return glob_.count({g, hour}) > 0; }
  double global_value(int g, int hour) const { return glob_.at({g, hour}); }

  void fix_binary(FixEntry e) {
    if (binary_fixed(e.unit, e.hour))
      throw validation_error(strfmt("unit %d hour %d already fixed", e.unit, e.hour));
    e.kind = FixEntry::Kind::binary;
    bin_[{e.unit, e.hour}] = e.value;
    k_fix_ = e.iteration;
    entries_.push_back(e);
  }

  void fix_global(int g, int hour, double value, int iteration) {
    if (global_fixed(g, hour))
      throw validation_error(strfmt("global %d hour %d already fixed", g, hour));
    FixEntry e;
    e.kind = FixEntry::Kind::global;
    e.g = g;
    e.hour = hour;
    e.value = value;
    e.iteration = iteration;
    glob_[{g, hour}] = value;
    entries_.push_back(e);
  }

  int k_fix() const { return k_fix_; }
  const std::vector<FixEntry>& entries() const { return entries_; }

  int binaries_fixed() const { return static_cast<int>(bin_.size()); }
  int globals_fixed() const { return static_cast<int>(glob_.size()); }

  // One line per entry for post-hoc analysis.
  void write(std::ostream& os) const {
    for (const FixEntry& e : entries_) {
      if (e.kind == FixEntry::Kind::binary)
        os << "fix binary iter=" << e.iteration << " area=" << e.area
           << " unit=" << e.unit << " hour=" << e.hour << " value=" << e.value
           << " rule_hour=" << e.rule_hour << " rule_area=" << e.rule_area
           << " rule_unit=" << e.rule_unit << "\n";
      else
        os << "fix global iter=" << e.iteration << " g=" << e.g
           << " hour=" << e.hour << " value=" << e.value << "\n";
    }
  }

 private:
  std::vector<FixEntry> entries_;
  std::map<std::pair<int, int>, double> bin_;   // (unit, hour) -> value
  std::map<std::pair<int, int>, double> glob_;  // (g, hour) -> value
  int k_fix_ = 1;
};

}  // namespace dncuc
