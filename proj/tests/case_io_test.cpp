#include "dncuc/case_io.hpp"

#include <gtest/gtest.h>

#include <sstream>

#include "test_util.hpp"

using namespace dncuc;
using dncuc::testing::src_path;

namespace {

MultiAreaSystem parse(const std::string& text) {
  std::istringstream in(text);
  return parse_case(in, "<test>");
}

}  // namespace

TEST(CaseIo, LoadsAppendixCase) {
  MultiAreaSystem sys = load_case(src_path("cases/appendix_2area.case"));
  EXPECT_EQ(sys.name, "appendix_2area");
  EXPECT_EQ(sys.nt, 24);
  ASSERT_EQ(sys.areas.size(), 2u);
  ASSERT_EQ(sys.buses.size(), 4u);
  ASSERT_EQ(sys.units.size(), 2u);
  ASSERT_EQ(sys.loads.size(), 2u);
  ASSERT_EQ(sys.lines.size(), 3u);
  ASSERT_EQ(sys.tie_lines.size(), 1u);
  EXPECT_EQ(sys.tie(0).id, 3);

  const Unit& g1 = sys.units[0];
  EXPECT_EQ(g1.id, 1);
  EXPECT_EQ(sys.buses[g1.bus].id, 1);
  EXPECT_DOUBLE_EQ(g1.pmin, 20);
  EXPECT_DOUBLE_EQ(g1.pmax, 120);
  EXPECT_EQ(g1.min_on, 2);
  EXPECT_EQ(g1.min_off, 2);
  EXPECT_DOUBLE_EQ(g1.ramp_up, 60);
  EXPECT_DOUBLE_EQ(g1.startup_cost, 150);
  EXPECT_DOUBLE_EQ(g1.shutdown_cost, 30);
  EXPECT_DOUBLE_EQ(g1.no_load_cost, 80);
  EXPECT_TRUE(g1.initially_on);
  EXPECT_EQ(g1.initial_hours, 2);
  ASSERT_EQ(g1.fuel.segments(), 2u);
  EXPECT_DOUBLE_EQ(g1.fuel.value(120), 2760);

  EXPECT_DOUBLE_EQ(sys.loads[0].profile[0], 38.08);
  EXPECT_DOUBLE_EQ(sys.loads[1].profile[16], 98.89);  // peak hour
  EXPECT_DOUBLE_EQ(sys.system_demand(16), 62.93 + 98.89);
}

TEST(CaseIo, RoundTripIsStable) {
  MultiAreaSystem sys = load_case(src_path("cases/appendix_2area.case"));
  std::ostringstream first;
  write_case(sys, first);
  std::istringstream back(first.str());
  MultiAreaSystem sys2 = parse_case(back, "<roundtrip>");
  std::ostringstream second;
  write_case(sys2, second);
  EXPECT_EQ(first.str(), second.str());
  EXPECT_EQ(sys2.nt, sys.nt);
  EXPECT_EQ(sys2.units[1].fuel, sys.units[1].fuel);
  EXPECT_EQ(sys2.loads[1].profile, sys.loads[1].profile);
}

TEST(CaseIo, KeysMaySpanLines) {
  MultiAreaSystem sys = parse(
      "[system]\n"
      "nt=2 name=multiline\n"
      "[area 1]\n"
      "[bus 1]\n area=1\n ref=1\n"
      "[bus 2] area=1 ref=0\n"
      "[unit 1] bus=1 pmin=0 pmax=50 minon=1 minoff=1 rup=50 rdn=50\n"
      "  csu=10 csd=1 cnl=5 fuel=0:0,50:500 i0=0 cnt0=1\n"
      "[line 1] from=1 to=2 x=0.1 limit=60\n"
      "[load 1] bus=2 profile=10,20\n");
  EXPECT_EQ(sys.nt, 2);
  EXPECT_EQ(sys.name, "multiline");
  EXPECT_DOUBLE_EQ(sys.units[0].pmax, 50);
}

TEST(CaseIo, CommentsAndBlanksIgnored) {
  MultiAreaSystem sys = parse(
      "# header comment\n"
      "[system] nt=1 name=c  # trailing comment\n\n"
      "[area 1]\n"
      "[bus 1] area=1 ref=1\n"
      "[unit 1] bus=1 pmin=0 pmax=10 minon=1 minoff=1 rup=10 rdn=10 csu=1 csd=1 cnl=1 fuel=0:0,10:100 i0=0 cnt0=1\n"
      "[load 1] bus=1 profile=5\n");
  EXPECT_EQ(sys.name, "c");
}

TEST(CaseIo, ErrorsCarryFileAndLine) {
  try {
    parse("[system] nt=1 name=x\n[area 1]\n[bus 1] area=1 ref=1 bogus=3\n");
    FAIL() << "expected parse_error";
  } catch (const parse_error& e) {
    EXPECT_NE(std::string(e.what()).find("<test>:3"), std::string::npos) << e.what();
    EXPECT_NE(std::string(e.what()).find("bogus"), std::string::npos) << e.what();
  }
}

TEST(CaseIo, RejectsMalformedInput) {
  EXPECT_THROW(parse(""), parse_error);                                   // empty
  EXPECT_THROW(parse("nt=3\n"), parse_error);                             // pair before section
  EXPECT_THROW(parse("[system nt=1\n"), parse_error);                     // unterminated header
  EXPECT_THROW(parse("[system] name=x\n"), parse_error);                  // missing nt
  EXPECT_THROW(parse("[system] nt=abc name=x\n"), parse_error);           // non-numeric
  EXPECT_THROW(parse("[system] nt=1.5 name=x\n"), parse_error);           // non-integer
  EXPECT_THROW(parse("[system] nt=1 name=x\n[system] nt=2 name=y\n"), parse_error);
  EXPECT_THROW(parse("[system] nt=1 name=x\n[area]\n"), parse_error);     // id required
  EXPECT_THROW(parse("[system] nt=1 name=x\n[widget 1]\n"), parse_error); // unknown section
  EXPECT_THROW(parse("[system] nt=1 name=x\n[area 1]\n[area 1]\n"), parse_error);
  EXPECT_THROW(parse("[system] nt=1 name=x\n[area 1]\n[bus 1] area=9 ref=1\n"),
               parse_error);                                              // unknown area
  EXPECT_THROW(load_case("/nonexistent/path.case"), parse_error);
}

TEST(CaseIo, StructuralProblemsSurfaceAsValidationErrors) {
  // Bus 2 unreachable: no line at all.
  EXPECT_THROW(
      parse("[system] nt=1 name=x\n[area 1]\n"
            "[bus 1] area=1 ref=1\n[bus 2] area=1 ref=0\n"
            "[unit 1] bus=1 pmin=0 pmax=10 minon=1 minoff=1 rup=10 rdn=10 csu=1 csd=1 cnl=1 fuel=0:0,10:100 i0=0 cnt0=1\n"
            "[load 1] bus=2 profile=5\n"),
      validation_error);
  // Profile length disagrees with nt.
  EXPECT_THROW(
      parse("[system] nt=3 name=x\n[area 1]\n[bus 1] area=1 ref=1\n"
            "[unit 1] bus=1 pmin=0 pmax=10 minon=1 minoff=1 rup=10 rdn=10 csu=1 csd=1 cnl=1 fuel=0:0,10:100 i0=0 cnt0=1\n"
            "[load 1] bus=1 profile=5,6\n"),
      validation_error);
  // Two reference buses in one area.
  EXPECT_THROW(
      parse("[system] nt=1 name=x\n[area 1]\n"
            "[bus 1] area=1 ref=1\n[bus 2] area=1 ref=1\n"
            "[line 1] from=1 to=2 x=0.1 limit=10\n"
            "[unit 1] bus=1 pmin=0 pmax=10 minon=1 minoff=1 rup=10 rdn=10 csu=1 csd=1 cnl=1 fuel=0:0,10:100 i0=0 cnt0=1\n"
            "[load 1] bus=2 profile=5\n"),
      validation_error);
}

TEST(CaseIo, WriterEmitsLoadableFile) {
  MultiAreaSystem sys = dncuc::testing::ring_system(3, 4);
  sys.name = "ring3";
  std::ostringstream out;
  write_case(sys, out);
  std::istringstream in(out.str());
  MultiAreaSystem sys2 = parse_case(in, "<writer>");
  EXPECT_EQ(sys2.areas.size(), 3u);
  EXPECT_EQ(sys2.tie_lines.size(), 3u);
  EXPECT_EQ(sys2.name, "ring3");
}
