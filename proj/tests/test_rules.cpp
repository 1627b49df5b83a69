#include "doctest.h"
#include "geofind/construction.hpp"
#include "geofind/rules.hpp"

using namespace geofind;

namespace {

std::string parse_error(std::string_view text) {
  try {
    parse_rules(text);
  } catch (const ParseError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("parse the midline rule") {
  auto rules = parse_rules("rule midline: midp(M,A,B), midp(N,A,C), non_collinear(A,B,C) => para(M,N,B,C)");
  REQUIRE(rules.size() == 1);
  CHECK(rules[0].name == "midline");
  CHECK(rules[0].premises.size() == 2);
  REQUIRE(rules[0].sides.size() == 1);
  CHECK(rules[0].sides[0].kind == SideKind::NonCollinear);
  CHECK(rules[0].conclusion.predicate == Predicate::Para);
  CHECK(to_string(rules[0]) ==
        "rule midline: midp(M,A,B), midp(N,A,C), non_collinear(A,B,C) => para(M,N,B,C)");
}

TEST_CASE("range restriction") {
  CHECK(parse_error("rule bad: midp(M,A,B) => para(M,N,A,B)") ==
        "line 1, column 33: N unbound: it does not occur in any premise");
  CHECK(parse_error("rule bad: coll(A,B,C), distinct(A,D) => coll(A,B,C)").find("D unbound") !=
        std::string::npos);
}

TEST_CASE("malformed rule files") {
  CHECK(parse_error("rule r: coll(A,B) => coll(A,B,C)").find("expects 3 arguments") != std::string::npos);
  CHECK(parse_error("rule r: => coll(A,B,C)").find("expected atom") != std::string::npos);
  CHECK(parse_error("rule r: distinct(A,B) => coll(A,B,A)").find("at least one premise") !=
        std::string::npos);
  CHECK(parse_error("rule r: distinct(A,B), coll(A,B,C) => coll(A,B,C)").find("premise after side") !=
        std::string::npos);
  CHECK(parse_error("rule r: line(A,B) => coll(A,B,C)").find("unknown predicate") != std::string::npos);
  CHECK(parse_error("rule r: coll(A,B,C) => coll(A,B,C)\n\nrule r: coll(A,B,C) => coll(A,B,C)") ==
        "line 3, column 6: duplicate rule name 'r'");
  CHECK(parse_error("rule r: coll(A,B,C) => coll(A,B,C) extra").find("trailing input") != std::string::npos);
}

TEST_CASE("comments, blank lines and point constants") {
  auto rules = parse_rules("# header\n\nrule r: coll(A,b,C) => coll(b,C,A)  # tail\n");
  REQUIRE(rules.size() == 1);
  CHECK(std::holds_alternative<PointId>(rules[0].premises[0].args[1]));
  CHECK(std::holds_alternative<Variable>(rules[0].premises[0].args[0]));
  CHECK(parse_rules("").empty());
}

TEST_CASE("bundled default rules") {
  auto rules = parse_rules(default_rules_text());
  CHECK(rules.size() == 12);
  for (const auto& r : rules) CHECK(!r.premises.empty());
}
