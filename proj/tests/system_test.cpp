#include "dncuc/system.hpp"

#include <gtest/gtest.h>

#include <random>

#include "test_util.hpp"

using namespace dncuc;
using dncuc::testing::make_line;
using dncuc::testing::make_load;
using dncuc::testing::make_unit;
using dncuc::testing::ring_system;
using dncuc::testing::two_area_system;

TEST(System, TwoAreaStructure) {
  MultiAreaSystem sys = two_area_system();
  ASSERT_EQ(sys.areas.size(), 2u);
  EXPECT_EQ(sys.areas[0].buses.size(), 2u);
  EXPECT_EQ(sys.areas[0].units.size(), 1u);
  EXPECT_EQ(sys.areas[0].internal_lines.size(), 1u);
  EXPECT_EQ(sys.areas[1].loads.size(), 1u);
  ASSERT_EQ(sys.tie_lines.size(), 1u);
  EXPECT_EQ(sys.tie(0).id, 3);
  EXPECT_EQ(sys.tie(0).kind, LineKind::tie);
  EXPECT_EQ(sys.areas[0].reference_bus, 0);
  EXPECT_EQ(sys.areas[1].reference_bus, 3);
  EXPECT_DOUBLE_EQ(sys.total_capacity(), 300.0);
  EXPECT_DOUBLE_EQ(sys.system_demand(0), 130.0);
  EXPECT_DOUBLE_EQ(sys.area_demand(0, 0), 50.0);
  EXPECT_DOUBLE_EQ(sys.area_demand(1, 0), 80.0);
}

TEST(System, ValidateRejectsTwoReferenceBuses) {
  MultiAreaSystem sys = two_area_system();
  sys.buses[1].reference = true;
  assemble(sys);
  EXPECT_THROW(validate(sys), validation_error);
}

TEST(System, ValidateRejectsMissingReferenceBus) {
  MultiAreaSystem sys = two_area_system();
  sys.buses[0].reference = false;
  assemble(sys);
  EXPECT_THROW(validate(sys), validation_error);
}

TEST(System, ValidateRejectsDisconnectedArea) {
  MultiAreaSystem sys = two_area_system();
  // Drop area 1's internal line: bus 1 and 2 are then joined only via area 2.
  sys.lines.erase(sys.lines.begin());
  assemble(sys);
  EXPECT_THROW(validate(sys), validation_error);
}

TEST(System, ValidateRejectsWrongProfileLength) {
  MultiAreaSystem sys = two_area_system(4);
  sys.loads[0].profile.pop_back();
  EXPECT_THROW(validate(sys), validation_error);
}

TEST(System, ValidateRejectsFuelCurveShorterThanPmax) {
  MultiAreaSystem sys = two_area_system();
  sys.units[0].pmax = sys.units[0].fuel.xmax() + 50.0;
  EXPECT_THROW(validate(sys), validation_error);
}

TEST(System, ValidateRejectsMislabeledTie) {
  MultiAreaSystem sys = two_area_system();
  sys.lines[2].kind = LineKind::internal;  // endpoints lie in different areas
  EXPECT_THROW(validate(sys), validation_error);
}

TEST(Decouple, TieFlowTwoArea) {
  MultiAreaSystem sys = two_area_system(24);
  decouple(sys, DecoupleStrategy::tie_flow);
  EXPECT_TRUE(sys.decoupled());
  EXPECT_EQ(sys.gmap.n_globals, 1);
  EXPECT_EQ(sys.gmap.total_globals(24), 24);

  // Each side gains one pseudo bus and one tie copy.
  for (int a : {0, 1}) {
    ASSERT_EQ(sys.areas[a].pseudo_buses.size(), 1u);
    ASSERT_EQ(sys.areas[a].tie_copies.size(), 1u);
    EXPECT_EQ(sys.areas[a].tie_count, 1);
  }
  EXPECT_EQ(sys.areas[0].pseudo_buses[0].origin_bus, 2);
  EXPECT_EQ(sys.areas[1].pseudo_buses[0].origin_bus, 1);
  EXPECT_TRUE(sys.areas[0].tie_copies[0].owns_from_side);
  EXPECT_FALSE(sys.areas[1].tie_copies[0].owns_from_side);

  // Slot numbering continues each area's flow list: one internal line, so the
  // tie copy is flow variable w = 2 on both sides; signs oppose.
  ASSERT_EQ(sys.gmap.by_global.size(), 1u);
  const auto& slots = sys.gmap.by_global[0];
  ASSERT_EQ(slots.size(), 2u);
  EXPECT_EQ(slots[0].area, 0);
  EXPECT_EQ(slots[0].w, 2);
  EXPECT_DOUBLE_EQ(slots[0].sign, 1.0);
  EXPECT_EQ(slots[1].area, 1);
  EXPECT_EQ(slots[1].w, 2);
  EXPECT_DOUBLE_EQ(slots[1].sign, -1.0);
}

TEST(Decouple, BusAngleTwoArea) {
  MultiAreaSystem sys = two_area_system(24);
  decouple(sys, DecoupleStrategy::bus_angle);
  // Both endpoints of the tie are duplicated: two globals per hour.
  EXPECT_EQ(sys.gmap.n_globals, 2);
  EXPECT_EQ(sys.gmap.total_globals(24), 48);
  for (const auto& slots : sys.gmap.by_global) {
    ASSERT_EQ(slots.size(), 2u);
    for (const auto& s : slots) {
      EXPECT_DOUBLE_EQ(s.sign, 1.0);
      EXPECT_EQ(s.kind, SlotKind::angle);
    }
  }
  // Area 0: w=1 is its real boundary angle (bus index 1), w=2 the pseudo copy.
  const auto& a0 = sys.gmap.by_area[0];
  ASSERT_EQ(a0.size(), 2u);
  EXPECT_EQ(a0[0].w, 1);
  EXPECT_EQ(a0[0].angle_bus, 1);
  EXPECT_EQ(a0[1].w, 2);
  EXPECT_LT(a0[1].angle_bus, 0);
  EXPECT_EQ(~a0[1].angle_bus, 0);  // pseudo index 0
}

// A ring of three single-tie-degree... each area touches two ties; the angle
// strategy doubles the per-hour global count relative to tie-line flows.
TEST(Decouple, RingGlobalCounts) {
  MultiAreaSystem tie = ring_system(3, 24);
  decouple(tie, DecoupleStrategy::tie_flow);
  EXPECT_EQ(tie.gmap.n_globals, 3);
  EXPECT_EQ(tie.gmap.total_globals(24), 72);

  MultiAreaSystem ang = ring_system(3, 24);
  decouple(ang, DecoupleStrategy::bus_angle);
  EXPECT_EQ(ang.gmap.n_globals, 6);
  EXPECT_EQ(ang.gmap.total_globals(24), 144);

  for (int a = 0; a < 3; ++a) EXPECT_EQ(tie.areas[a].tie_count, 2);
}

TEST(Decouple, RejectsSecondDecoupleAndNone) {
  MultiAreaSystem sys = two_area_system();
  EXPECT_THROW(decouple(sys, DecoupleStrategy::none), config_error);
  decouple(sys, DecoupleStrategy::tie_flow);
  EXPECT_THROW(decouple(sys, DecoupleStrategy::tie_flow), config_error);
}

// Structural invariants on randomized ring sizes and tie orientations.
TEST(Decouple, RandomizedInvariants) {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    int k = 2 + static_cast<int>(rng() % 5);
    MultiAreaSystem base = ring_system(k, 6);
    // Randomly flip tie orientations; membership derivation is direction-free.
    for (int li : base.tie_lines)
      if (rng() % 2) std::swap(base.lines[li].from, base.lines[li].to);
    assemble(base);
    validate(base);

    MultiAreaSystem tie = base;
    decouple(tie, DecoupleStrategy::tie_flow);
    EXPECT_EQ(tie.gmap.n_globals, static_cast<int>(tie.tie_lines.size()));
    for (const auto& slots : tie.gmap.by_global) {
      ASSERT_EQ(slots.size(), 2u);
      EXPECT_DOUBLE_EQ(slots[0].sign + slots[1].sign, 0.0);
      EXPECT_NE(slots[0].area, slots[1].area);
    }
    for (size_t a = 0; a < tie.areas.size(); ++a) {
      const auto& area_slots = tie.gmap.by_area[a];
      for (size_t i = 0; i < area_slots.size(); ++i)
        EXPECT_EQ(area_slots[i].w,
                  static_cast<int>(tie.areas[a].internal_lines.size() + i) + 1);
    }

    MultiAreaSystem ang = base;
    decouple(ang, DecoupleStrategy::bus_angle);
    // One global per distinct boundary bus.
    std::set<int> boundary;
    for (int li : ang.tie_lines) {
      boundary.insert(ang.lines[li].from);
      boundary.insert(ang.lines[li].to);
    }
    EXPECT_EQ(ang.gmap.n_globals, static_cast<int>(boundary.size()));
    size_t slot_total = 0;
    for (const auto& slots : ang.gmap.by_global) {
      EXPECT_GE(slots.size(), 2u);
      slot_total += slots.size();
    }
    size_t by_area_total = 0;
    for (size_t a = 0; a < ang.areas.size(); ++a) {
      const auto& area_slots = ang.gmap.by_area[a];
      by_area_total += area_slots.size();
      for (size_t i = 0; i < area_slots.size(); ++i)
        EXPECT_EQ(area_slots[i].w, static_cast<int>(i) + 1);
    }
    EXPECT_EQ(slot_total, by_area_total);
  }
}
