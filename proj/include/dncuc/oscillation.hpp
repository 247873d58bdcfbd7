// Oscillation detection and the prioritized commitment-fixing rules: when a
// run stalls on cycling binaries, fix the cheapest unit in the best-connected
// area at the first hour of each oscillating stretch.
#pragma once

#include <algorithm>
#include <utility>
#include <vector>

#include "dncuc/fixes.hpp"
#include "dncuc/ncuc.hpp"
#include "dncuc/system.hpp"

namespace dncuc {

struct OscillationConfig {
  bool enabled = true;
  int start_iteration = 30;  // no fixing while k is at or below this
  int window = 10;           // iterations inspected for value changes
  int change_threshold = 3;  // oscillating = strictly more changes than this
  int cooldown = 10;         // iterations that must pass since the last fix
  int per_action = 1;        // units fixed per selected (area, hour)
};

// Rolling record of recent commitment values per (unit, hour).
class CommitmentHistory {
 public:
  CommitmentHistory(const MultiAreaSystem& sys, int window)
      : window_(window), buf_(sys.units.size(), std::vector<std::vector<int>>(
                                                    sys.nt, std::vector<int>())) {}

  // Appends this iteration's commitments, given per-area results in area
  // order.
  void record_iteration(const MultiAreaSystem& sys,
                        const std::vector<SubproblemResult>& results) {
    for (size_t a = 0; a < sys.areas.size(); ++a) {
      const auto& unit_ids = sys.areas[a].units;
      for (size_t k = 0; k < unit_ids.size(); ++k) {
        for (int t = 0; t < sys.nt; ++t) {
          auto& b = buf_[unit_ids[k]][t];
          b.push_back(results[a].I[k][t]);
          if (static_cast<int>(b.size()) > window_) b.erase(b.begin());
        }
      }
    }
  }

  // Number of adjacent-iteration value flips within the window.
  int changes(int unit, int t) const {
    const auto& b = buf_[unit][t];
    int c = 0;
    for (size_t i = 1; i < b.size(); ++i) c += b[i] != b[i - 1] ? 1 : 0;
    return c;
  }

  int window() const { return window_; }

 private:
  int window_;
  std::vector<std::vector<std::vector<int>>> buf_;  // [unit][t] -> recent values
};

// All (unit, hour) pairs oscillating right now, guards included: nothing is
// reported early in the run or inside the cooldown after a fixing action,
// and already-fixed entries never reappear.
inline std::vector<std::pair<int, int>> detect_oscillation(const CommitmentHistory& hist,
                                                           const MultiAreaSystem& sys, int k,
                                                           const FixLedger& ledger,
                                                           const OscillationConfig& cfg) {
  std::vector<std::pair<int, int>> out;
  if (!cfg.enabled || k <= cfg.start_iteration || k - ledger.k_fix() <= cfg.cooldown)
    return out;
  for (size_t u = 0; u < sys.units.size(); ++u)
    for (int t = 0; t < sys.nt; ++t)
      if (!ledger.binary_fixed(static_cast<int>(u), t) &&
          hist.changes(static_cast<int>(u), t) > cfg.change_threshold)
        out.push_back({static_cast<int>(u), t});
  return out;
}

// Full-load average production cost; the economic priority index.
inline double compute_pg(const Unit& u) {
  if (u.pmax <= 0) throw validation_error(strfmt("unit %d needs pmax > 0", u.id));
  return u.fuel.value(u.pmax) / u.pmax;
}

// Applies the three priority rules to an oscillating set and returns the fix
// entries (commitments forced to 1):
//   1. temporal  - first hour of each maximal consecutive oscillating stretch;
//   2. spatial   - within that hour, the area with the most tie-lines;
//   3. economic  - within that area, the units with the smallest pg.
// Ties break by ascending area id, then unit id. Deterministic.
inline std::vector<FixEntry> select_fixes(const std::vector<std::pair<int, int>>& oscillating,
                                          const MultiAreaSystem& sys,
                                          const OscillationConfig& cfg, int k) {
  std::vector<FixEntry> picked;
  if (oscillating.empty()) return picked;

  std::vector<int> area_of(sys.units.size(), -1);
  for (size_t a = 0; a < sys.areas.size(); ++a)
    for (int u : sys.areas[a].units) area_of[u] = static_cast<int>(a);

  std::vector<int> hours;
  for (const auto& [u, t] : oscillating) hours.push_back(t);
  std::sort(hours.begin(), hours.end());
  hours.erase(std::unique(hours.begin(), hours.end()), hours.end());

  std::vector<int> first_hours;
  for (size_t i = 0; i < hours.size(); ++i)
    if (i == 0 || hours[i] != hours[i - 1] + 1) first_hours.push_back(hours[i]);

  for (int t : first_hours) {
    int best_area = -1;
    for (const auto& [u, ot] : oscillating) {
      if (ot != t) continue;
      const int a = area_of[u];
      if (best_area < 0 || sys.areas[a].tie_count > sys.areas[best_area].tie_count ||
          (sys.areas[a].tie_count == sys.areas[best_area].tie_count &&
           sys.areas[a].id < sys.areas[best_area].id))
        best_area = a;
    }

    std::vector<int> candidates;
    for (const auto& [u, ot] : oscillating)
      if (ot == t && area_of[u] == best_area) candidates.push_back(u);
    std::sort(candidates.begin(), candidates.end(), [&](int x, int y) {
      const double px = compute_pg(sys.units[x]), py = compute_pg(sys.units[y]);
      if (px != py) return px < py;
      return sys.units[x].id < sys.units[y].id;
    });

    const int take = std::min<int>(cfg.per_action, static_cast<int>(candidates.size()));
    for (int i = 0; i < take; ++i) {
      FixEntry e;
      e.kind = FixEntry::Kind::binary;
      e.area = best_area;
      e.unit = candidates[i];
      e.hour = t;
      e.value = 1.0;
      e.iteration = k;
      e.rule_hour = t;
      e.rule_area = sys.areas[best_area].id;
      e.rule_unit = sys.units[candidates[i]].id;
      picked.push_back(e);
    }
  }
  return picked;
}

}  // namespace dncuc
