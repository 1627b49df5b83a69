#include <cmath>

#include "doctest.h"
#include "fuzz.hpp"
#include "geofind/construction.hpp"
#include "geofind/numeric.hpp"

using namespace geofind;

namespace {

const char* kMidline = "point A B C\nmidpoint M A B\nmidpoint N A C";
const char* kPappus =
    "point A B D E\non_line C A B\non_line F D E\n"
    "intersect G A E B D\nintersect H A F C D\nintersect I B F C E\n";

}  // namespace

TEST_CASE("midpoint coordinates are exact") {
  auto m = instantiate(parse_construction("point A B\nmidpoint M A B"), 1);
  REQUIRE(m);
  const Vec2 a = m->at(PointId("A")), b = m->at(PointId("B")), mid = m->at(PointId("M"));
  CHECK(mid.x == (a.x + b.x) / 2);
  CHECK(mid.y == (a.y + b.y) / 2);
  CHECK(m->seed == 1);
}

TEST_CASE("free points lie in the unit square and models are reproducible") {
  Construction c = parse_construction(kPappus);
  auto m1 = instantiate(c, 42), m2 = instantiate(c, 42), m3 = instantiate(c, 43);
  REQUIRE(m1);
  REQUIRE(m3);
  CHECK(m1->coords == m2->coords);
  CHECK(m1->coords != m3->coords);
  for (const char* p : {"A", "B", "D", "E"}) {
    Vec2 v = m1->at(PointId(p));
    CHECK(std::abs(v.x) <= 1.0);
    CHECK(std::abs(v.y) <= 1.0);
  }
}

TEST_CASE("Pappus intersection point lies on its line") {
  auto m = instantiate(parse_construction(kPappus), 1);
  REQUIRE(m);
  // Independent collinearity check of G with A and E.
  const Vec2 g = m->at(PointId("G")), a = m->at(PointId("A")), e = m->at(PointId("E"));
  const double c = cross(g - a, e - a);
  CHECK(c * c <= kDefaultTolerance * m->scale * m->scale);
}

TEST_CASE("intersecting parallel lines is degenerate") {
  // The midline MN is parallel to BC for every sample.
  Construction c = parse_construction(std::string(kMidline) + "\nintersect P M N B C");
  CHECK_FALSE(instantiate(c, 1).has_value());
  CHECK(sample_models(c, 5).empty());
  CHECK(verify(parse_fact("coll(A,B,M)"), c) == Verdict::degenerate());
}

TEST_CASE("eval_fact examples") {
  auto m = instantiate(parse_construction(kMidline), 1);
  REQUIRE(m);
  CHECK(eval_fact(*m, parse_fact("para(M,N,B,C)")));
  CHECK(eval_fact(*m, parse_fact("cong(A,B,A,B)")));
  CHECK_FALSE(eval_fact(*m, parse_fact("coll(A,B,C)")));
  CHECK(eval_fact(*m, parse_fact("midp(M,A,B)")));
  CHECK_FALSE(eval_fact(*m, parse_fact("midp(A,M,B)")));
  CHECK_FALSE(eval_fact(*m, parse_fact("perp(M,N,B,C)")));
  CHECK_THROWS_AS(eval_fact(*m, parse_fact("coll(A,B,Z)")), std::out_of_range);
}

TEST_CASE("eval_fact on hand-placed points") {
  CoordinateModel m;
  m.coords = {{PointId("A"), {0, 0}}, {PointId("B"), {2, 0}}, {PointId("C"), {0, 2}}, {PointId("D"), {2, 2}}};
  m.scale = 8;
  CHECK(eval_fact(m, parse_fact("cyclic(A,B,C,D)")));
  CHECK(eval_fact(m, parse_fact("perp(A,B,A,C)")));
  CHECK(eval_fact(m, parse_fact("para(A,B,C,D)")));
  CHECK(eval_fact(m, parse_fact("cong(A,B,C,D)")));
  CHECK_FALSE(eval_fact(m, parse_fact("cong(A,B,A,D)")));
  // Both angles are 45 degrees.
  CHECK(eval_fact(m, parse_fact("eqangle(A,B,A,D,D,C,D,A)")));
  CHECK_FALSE(eval_fact(m, parse_fact("eqangle(A,B,A,D,A,B,A,C)")));
  m.coords[PointId("D")] = {2, 2.1};
  CHECK_FALSE(eval_fact(m, parse_fact("cyclic(A,B,C,D)")));
}

TEST_CASE("verify examples") {
  CHECK(verify(parse_fact("para(M,N,B,C)"), parse_construction(kMidline), 5) == Verdict::holds());
  Verdict v = verify(parse_fact("coll(A,B,D)"), parse_construction(kPappus));
  CHECK(v.kind == Verdict::Kind::Fails);
  REQUIRE(v.seed);
  CHECK(*v.seed == model_seed(kDefaultMasterSeed, 0));
  CHECK(verify(parse_fact("coll(G,H,I)"), parse_construction(kPappus), 100) == Verdict::holds());
  CHECK(to_string(Verdict::fails(7)) == "fails(seed=7)");
}

TEST_CASE("similarity transforms do not change verdicts") {
  auto m = instantiate(parse_construction(kPappus), 3);
  REQUIRE(m);
  CoordinateModel big = *m;
  for (auto& [p, v] : big.coords) v = Vec2{1000 * v.x - 3 * v.y + 7, 3 * v.x + 1000 * v.y - 5};
  big.scale = m->scale * (1000.0 * 1000 + 9);
  for (const char* f : {"coll(G,H,I)", "coll(A,B,C)", "coll(A,B,D)", "para(A,B,D,E)", "cong(A,B,D,E)"})
    CHECK(eval_fact(*m, parse_fact(f)) == eval_fact(big, parse_fact(f)));
}

TEST_CASE("tautologies evaluate true on 100 models") {
  Construction c = parse_construction(kPappus);
  auto models = sample_models(c, 100);
  REQUIRE(models.size() == 100);
  for (const char* f : {"cong(A,B,A,B)", "coll(A,A,B)", "cong(A,A,B,B)", "para(A,B,B,A)", "midp(A,A,A)",
                        "eqangle(A,B,C,D,A,B,C,D)", "eqangle(A,B,A,B,C,D,C,D)", "coll(G,G,G)"}) {
    Fact fact = parse_fact(f);
    REQUIRE(is_tautology(fact));
    CHECK(verify(fact, models, 100) == Verdict::holds());
  }
}

TEST_CASE("model seeds are distinct and depend on the master seed") {
  CHECK(model_seed(1, 0) != model_seed(1, 1));
  CHECK(model_seed(1, 0) != model_seed(2, 0));
  auto models = sample_models(parse_construction(kMidline), 5, 9);
  REQUIRE(models.size() == 5);
  for (int i = 0; i < 5; ++i) CHECK(models[static_cast<std::size_t>(i)].seed == model_seed(9, i));
}
