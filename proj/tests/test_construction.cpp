#include <set>

#include "doctest.h"
#include "fuzz.hpp"
#include "geofind/construction.hpp"
#include "geofind/numeric.hpp"

using namespace geofind;

namespace {

const char* kPappus =
    "point A B D E\n"
    "on_line C A B\n"
    "on_line F D E\n"
    "intersect G A E B D\n"
    "intersect H A F C D\n"
    "intersect I B F C E\n";

std::set<std::string> texts(const FactSet& facts) {
  std::set<std::string> out;
  for (const auto& [f, gen] : facts) out.insert(to_string(f));
  return out;
}

std::string parse_error(std::string_view text) {
  try {
    parse_construction(text);
  } catch (const ParseError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("parse a small script") {
  Construction c = parse_construction("point A B\nmidpoint M A B");
  REQUIRE(c.steps().size() == 3);
  CHECK(c.steps()[0] == ConstructionStep{StepKind::FreePoint, {PointId("A")}});
  CHECK(c.steps()[1] == ConstructionStep{StepKind::FreePoint, {PointId("B")}});
  CHECK(c.steps()[2] == ConstructionStep{StepKind::Midpoint, {PointId("M"), PointId("A"), PointId("B")}});
}

TEST_CASE("comments and blank lines are ignored") {
  Construction c = parse_construction("# triangle\n\npoint A B C   # three free points\n  \n");
  CHECK(c.steps().size() == 3);
  CHECK(c.free_point_count() == 3);
}

TEST_CASE("parse errors carry line, column and the offending token") {
  CHECK(parse_error("midpoint M A B") == "line 1, column 12: A undefined");
  CHECK(parse_error("point A B\npoint A") == "line 2, column 7: point A is already defined");
  CHECK(parse_error("point A B\nmidpoint M A").find("line 2") == 0);
  CHECK(parse_error("point A B\ncircle O A B").find("unknown statement") != std::string::npos);
  CHECK(parse_error("point A 2B").find("invalid identifier") != std::string::npos);
  CHECK(parse_error("point A B\nmidpoint M A A").find("repeated point") != std::string::npos);
  CHECK_FALSE(parse_error("point A").empty());
}

TEST_CASE("Pappus script") {
  Construction c = parse_construction(kPappus);
  CHECK(c.points().size() == 9);
  std::size_t intersections = 0;
  for (const auto& s : c.steps()) intersections += s.kind == StepKind::Intersect;
  CHECK(intersections == 3);
  CHECK(c.steps().size() - intersections == 6);
}

TEST_CASE("initial facts") {
  CHECK(texts(initial_facts(parse_construction("point A B\nmidpoint M A B"))) ==
        std::set<std::string>{"midp(M,A,B)", "coll(A,B,M)", "cong(A,M,B,M)"});
  CHECK(initial_facts(parse_construction("point A B")).empty());
  CHECK(texts(initial_facts(parse_construction("point A B C\ncircumcenter O A B C\non_circle D O A"))) ==
        std::set<std::string>{"cong(A,O,B,O)", "cong(B,O,C,O)", "cong(A,O,D,O)"});
  CHECK(texts(initial_facts(parse_construction("point A B P\nfoot F P A B"))) ==
        std::set<std::string>{"coll(A,B,F)", "perp(A,B,F,P)"});
}

TEST_CASE("Pappus hypotheses: six for G, H, I and two base lines") {
  // By hand from the step table.
  CHECK(texts(initial_facts(parse_construction(kPappus))) ==
        std::set<std::string>{"coll(A,B,C)", "coll(D,E,F)", "coll(A,E,G)", "coll(B,D,G)",
                              "coll(A,F,H)", "coll(C,D,H)", "coll(B,F,I)", "coll(C,E,I)"});
}

TEST_CASE("fuzz: hypotheses are canonical, nontrivial and exact on every model") {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    Construction c = testing::random_construction(seed);
    FactSet d0 = initial_facts(c);
    auto models = sample_models(c, 5);
    for (const auto& [f, gen] : d0) {
      CAPTURE(to_string(f));
      CHECK(gen == 0);
      CHECK(classify(f) == Triviality::None);
      CHECK(parse_fact(to_string(f)) == f);
      for (const auto& m : models) CHECK(eval_fact(m, f));
    }
  }
}
