#include "dncuc/oscillation.hpp"

#include <gtest/gtest.h>

#include "dncuc/fixes.hpp"
#include "test_util.hpp"

namespace dncuc {
namespace {

// Three single-bus areas in a chain, so the middle area touches two
// tie-lines and the ends one each. The middle area hosts two units with
// distinct full-load average costs.
MultiAreaSystem chain_system(int nt) {
  MultiAreaSystem sys;
  sys.name = "chain3";
  sys.nt = nt;
  sys.areas.resize(3);
  for (int a = 0; a < 3; ++a) {
    sys.areas[a].id = a + 1;
    sys.buses.push_back({a + 1, a, true});
    sys.loads.push_back(testing::make_load(a + 1, a, std::vector<double>(nt, 30.0)));
  }
  sys.units.push_back(testing::make_unit(1, 0, 10, 100));  // pg 20
  sys.units.push_back(testing::make_unit(2, 1, 10, 100));
  sys.units.back().fuel = PiecewiseLinear({0.0, 100.0}, {0.0, 1400.0});  // pg 14
  sys.units.push_back(testing::make_unit(3, 1, 10, 100));
  sys.units.back().fuel = PiecewiseLinear({0.0, 100.0}, {0.0, 800.0});  // pg 8
  sys.units.push_back(testing::make_unit(4, 2, 10, 100));  // pg 20
  sys.lines.push_back(testing::make_line(1, 0, 1));
  sys.lines.push_back(testing::make_line(2, 1, 2));
  assemble(sys);
  validate(sys);
  decouple(sys, DecoupleStrategy::tie_flow);
  return sys;
}

// Results whose commitments are v everywhere.
std::vector<SubproblemResult> flat_results(const MultiAreaSystem& sys, int v) {
  std::vector<SubproblemResult> out(sys.areas.size());
  for (size_t a = 0; a < out.size(); ++a)
    out[a].I.assign(sys.areas[a].units.size(), std::vector<int>(sys.nt, v));
  return out;
}

// Replays a 0/1 sequence for one system-wide unit at hour 0 while every
// other commitment stays at 1.
void replay(CommitmentHistory& hist, const MultiAreaSystem& sys, int unit,
            const std::vector<int>& seq) {
  int area = -1, local = -1;
  for (size_t a = 0; a < sys.areas.size() && area < 0; ++a)
    for (size_t k = 0; k < sys.areas[a].units.size(); ++k)
      if (sys.areas[a].units[k] == unit) {
        area = static_cast<int>(a);
        local = static_cast<int>(k);
      }
  for (int v : seq) {
    auto res = flat_results(sys, 1);
    res[area].I[local][0] = v;
    hist.record_iteration(sys, res);
  }
}

TEST(History, CountsAdjacentFlips) {
  auto sys = chain_system(1);
  CommitmentHistory hist(sys, 10);
  replay(hist, sys, 0, {1, 1, 0, 0, 1, 1, 0, 0, 1, 1});
  EXPECT_EQ(hist.changes(0, 0), 4);
  EXPECT_EQ(hist.changes(1, 0), 0) << "a constant series never flips";

  CommitmentHistory alt(sys, 10);
  replay(alt, sys, 0, {0, 1, 0, 1, 0, 1, 0, 1, 0, 1});
  EXPECT_EQ(alt.changes(0, 0), 9);
}

TEST(History, WindowEvictsOldValues) {
  auto sys = chain_system(1);
  CommitmentHistory hist(sys, 10);
  replay(hist, sys, 0, {1, 0, 1, 1, 1, 1, 1, 1, 1, 1, 1});
  EXPECT_EQ(hist.changes(0, 0), 1);  // the leading 1 fell out, the 0->1 flip remains
  replay(hist, sys, 0, {1});
  EXPECT_EQ(hist.changes(0, 0), 0);  // now the 0 is gone too
}

TEST(History, MapsAreaLocalRowsToSystemUnits) {
  auto sys = chain_system(1);
  CommitmentHistory hist(sys, 10);
  for (int i = 0; i < 10; ++i) {
    auto res = flat_results(sys, 1);
    res[1].I[1][0] = i % 2;  // second unit of the middle area = system unit 2
    hist.record_iteration(sys, res);
  }
  EXPECT_EQ(hist.changes(2, 0), 9);
  EXPECT_EQ(hist.changes(1, 0), 0);
}

TEST(Detection, RespectsStartIterationAndCooldown) {
  auto sys = chain_system(1);
  OscillationConfig cfg;  // start 30, window 10, threshold 3, cooldown 10
  CommitmentHistory hist(sys, cfg.window);
  for (int i = 0; i < 10; ++i) hist.record_iteration(sys, flat_results(sys, i % 2));

  FixLedger fresh;  // last action defaults to iteration 1
  EXPECT_TRUE(detect_oscillation(hist, sys, 25, fresh, cfg).empty());
  EXPECT_EQ(detect_oscillation(hist, sys, 45, fresh, cfg).size(), 4u);

  FixLedger acted;
  FixEntry e;
  e.unit = 3;
  e.hour = 0;
  e.iteration = 30;
  acted.fix_binary(e);
  EXPECT_TRUE(detect_oscillation(hist, sys, 35, acted, cfg).empty())
      << "a fix at 30 silences detection until iteration 41";
  auto out = detect_oscillation(hist, sys, 45, acted, cfg);
  ASSERT_EQ(out.size(), 3u) << "the pinned commitment must not reappear";
  for (const auto& [u, t] : out) EXPECT_NE(u, 3);
}

TEST(Detection, StrictChangeThreshold) {
  auto sys = chain_system(1);
  OscillationConfig cfg;
  FixLedger lg;

  CommitmentHistory three(sys, cfg.window);
  replay(three, sys, 0, {1, 0, 1, 0, 0, 0, 0, 0, 0, 0});
  EXPECT_TRUE(detect_oscillation(three, sys, 45, lg, cfg).empty())
      << "exactly three flips is still settling";

  CommitmentHistory four(sys, cfg.window);
  replay(four, sys, 0, {1, 0, 1, 0, 1, 1, 1, 1, 1, 1});
  auto out = detect_oscillation(four, sys, 45, lg, cfg);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0], (std::pair<int, int>{0, 0}));
}

TEST(Priority, FullLoadAverageCostHandValues) {
  Unit linear;
  linear.id = 9;
  linear.pmax = 100.0;
  linear.fuel = PiecewiseLinear({0.0, 100.0}, {0.0, 1000.0});
  EXPECT_DOUBLE_EQ(compute_pg(linear), 10.0);

  Unit kinked = linear;
  kinked.fuel = PiecewiseLinear({0.0, 50.0, 100.0}, {0.0, 400.0, 1100.0});
  EXPECT_DOUBLE_EQ(compute_pg(kinked), 11.0);

  Unit bad = linear;
  bad.pmax = 0.0;
  EXPECT_THROW(compute_pg(bad), validation_error);
}

TEST(Priority, FirstHourOfEachOscillatingStretch) {
  auto sys = chain_system(20);
  std::vector<std::pair<int, int>> osc;
  for (int t : {5, 6, 7, 14, 15, 16}) osc.push_back({1, t});
  auto fixes = select_fixes(osc, sys, OscillationConfig{}, 40);
  ASSERT_EQ(fixes.size(), 2u);
  EXPECT_EQ(fixes[0].hour, 5);
  EXPECT_EQ(fixes[1].hour, 14);
  EXPECT_EQ(fixes[0].unit, 1);
  EXPECT_EQ(fixes[1].unit, 1);
}

TEST(Priority, BestConnectedAreaWins) {
  auto sys = chain_system(20);
  ASSERT_EQ(sys.areas[0].tie_count, 1);
  ASSERT_EQ(sys.areas[1].tie_count, 2);
  ASSERT_EQ(sys.areas[2].tie_count, 1);

  // Units from all three areas oscillate at the same hour; the middle area
  // touches the most tie-lines, so its unit is chosen.
  std::vector<std::pair<int, int>> osc{{0, 5}, {1, 5}, {3, 5}};
  auto fixes = select_fixes(osc, sys, OscillationConfig{}, 40);
  ASSERT_EQ(fixes.size(), 1u);
  EXPECT_EQ(fixes[0].unit, 1);
  EXPECT_EQ(fixes[0].area, 1);
  EXPECT_EQ(fixes[0].rule_area, 2);

  // With only the two end areas in play the tie-count ties and the smaller
  // area id is preferred.
  std::vector<std::pair<int, int>> ends{{0, 5}, {3, 5}};
  fixes = select_fixes(ends, sys, OscillationConfig{}, 40);
  ASSERT_EQ(fixes.size(), 1u);
  EXPECT_EQ(fixes[0].unit, 0);
}

TEST(Priority, CheapestUnitWinsWithinArea) {
  auto sys = chain_system(20);
  std::vector<std::pair<int, int>> osc{{1, 5}, {2, 5}};  // pg 14 vs pg 8
  auto fixes = select_fixes(osc, sys, OscillationConfig{}, 40);
  ASSERT_EQ(fixes.size(), 1u);
  EXPECT_EQ(fixes[0].unit, 2);

  OscillationConfig both;
  both.per_action = 2;
  fixes = select_fixes(osc, sys, both, 40);
  ASSERT_EQ(fixes.size(), 2u);
  EXPECT_EQ(fixes[0].unit, 2) << "ascending full-load average cost";
  EXPECT_EQ(fixes[1].unit, 1);

  // Equal costs fall back to the smaller unit id.
  auto flat = chain_system(20);
  flat.units[2].fuel = flat.units[1].fuel;
  fixes = select_fixes(osc, flat, OscillationConfig{}, 40);
  ASSERT_EQ(fixes.size(), 1u);
  EXPECT_EQ(fixes[0].unit, 1);
}

TEST(Priority, RecordsProvenance) {
  auto sys = chain_system(20);
  std::vector<std::pair<int, int>> osc{{2, 7}};
  auto fixes = select_fixes(osc, sys, OscillationConfig{}, 33);
  ASSERT_EQ(fixes.size(), 1u);
  const FixEntry& e = fixes[0];
  EXPECT_EQ(e.kind, FixEntry::Kind::binary);
  EXPECT_DOUBLE_EQ(e.value, 1.0);
  EXPECT_EQ(e.iteration, 33);
  EXPECT_EQ(e.hour, 7);
  EXPECT_EQ(e.rule_hour, 7);
  EXPECT_EQ(e.rule_area, 2);
  EXPECT_EQ(e.rule_unit, 3);
}

TEST(Priority, EmptyInputSelectsNothing) {
  auto sys = chain_system(4);
  EXPECT_TRUE(select_fixes({}, sys, OscillationConfig{}, 40).empty());
}

}  // namespace
}  // namespace dncuc
