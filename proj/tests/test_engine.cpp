#include <algorithm>

#include "doctest.h"
#include "fuzz.hpp"
#include "geofind/construction.hpp"
#include "geofind/engine.hpp"
#include "geofind/numeric.hpp"

using namespace geofind;

namespace {

FactSet facts_of(std::initializer_list<const char*> texts) {
  FactSet out;
  for (const char* t : texts) out.emplace(parse_fact(t), 0);
  return out;
}

const std::vector<Rule>& defaults() {
  static const std::vector<Rule> rules = parse_rules(default_rules_text());
  return rules;
}

Rule rule_named(const std::string& name) {
  for (const auto& r : defaults())
    if (r.name == name) return r;
  FAIL("no rule " << name);
  return {};
}

FactSet midline_d0() { return initial_facts(parse_construction("point A B C\nmidpoint M A B\nmidpoint N A C")); }

}  // namespace

TEST_CASE("match the midline rule") {
  auto bindings = match_rule(rule_named("midline"), facts_of({"midp(M,A,B)", "midp(N,A,C)"}));
  REQUIRE(bindings.size() == 1);
  const Binding expected{{"M", PointId("M")}, {"A", PointId("A")}, {"B", PointId("B")},
                         {"N", PointId("N")}, {"C", PointId("C")}};
  CHECK(bindings[0] == expected);
}

TEST_CASE("matching finds nothing without facts or with a missing premise") {
  for (const auto& r : defaults()) CHECK(match_rule(r, {}).empty());
  CHECK(match_rule(rule_named("para-trans"), facts_of({"para(A,B,C,D)"})).empty());
}

TEST_CASE("matching respects symmetry of stored facts") {
  // Stored canonically as cong(A,O,B,O); the pattern cong(O,A,O,B) must still match.
  auto bindings = match_rule(rule_named("cong-trans"), facts_of({"cong(O,A,O,B)", "cong(O,B,O,C)"}));
  CHECK_FALSE(bindings.empty());
}

TEST_CASE("name-decidable side conditions block a match") {
  auto rules = parse_rules("rule r: coll(A,B,C), distinct(A,B) => coll(A,B,C)");
  // Every binding of a canonical coll fact has distinct A and B, so one per conclusion.
  CHECK(match_rule(rules[0], facts_of({"coll(A,B,C)"})).size() == 1);
}

TEST_CASE("saturate: empty inputs") {
  auto r = saturate({}, defaults());
  CHECK(r.facts.empty());
  CHECK(r.dag.empty());
  CHECK(r.stop_reason == StopReason::Fixpoint);
  CHECK(r.rounds == 1);

  FactSet d0 = midline_d0();
  auto none = saturate(d0, std::vector<Rule>{});
  CHECK(none.facts == d0);
  CHECK(none.dag.empty());
  CHECK(none.stop_reason == StopReason::Fixpoint);
}

TEST_CASE("saturate: non-positive budgets are rejected") {
  CHECK_THROWS_AS(saturate({}, defaults(), Budget{0, 10}), std::invalid_argument);
  CHECK_THROWS_AS(saturate({}, defaults(), Budget{10, 0}), std::invalid_argument);
}

TEST_CASE("saturate: midline") {
  auto r = saturate(midline_d0(), defaults());
  const Fact para = parse_fact("para(M,N,B,C)");
  REQUIRE(r.facts.count(para) == 1);
  CHECK(r.facts.at(para) == 1);
  const auto& node = r.dag.at(para);
  CHECK(node.rule == "midline");
  CHECK(node.round == 1);
  CHECK(node.premises == std::vector<Fact>{parse_fact("midp(M,A,B)"), parse_fact("midp(N,A,C)")});
  CHECK(node.conditional);
  REQUIRE(node.pending_sides.size() == 1);
  CHECK(to_string(node.pending_sides[0]) == "non_collinear(A,B,C)");
  CHECK(r.stop_reason == StopReason::Fixpoint);
}

TEST_CASE("saturate: budget stop") {
  FactSet d0 = initial_facts(parse_construction("point A B C\ncircumcenter O A B C\non_circle D O A"));
  auto r = saturate(d0, defaults(), Budget{1, 100});
  CHECK(r.stop_reason == StopReason::Budget);
  CHECK(r.rounds == 1);
  auto capped = saturate(d0, defaults(), Budget{10, d0.size() + 1});
  CHECK(capped.stop_reason == StopReason::Budget);
  CHECK(capped.facts.size() == d0.size() + 1);
}

TEST_CASE("saturate: tautological conclusions are dropped") {
  auto rules = parse_rules("rule t: midp(M,A,B) => cong(A,B,A,B)\nrule u: midp(M,A,B) => coll(A,A,B)");
  auto r = saturate(midline_d0(), rules);
  CHECK(r.facts == midline_d0());
  // cong(A,B,A,B), cong(A,C,A,C), and coll(X,X,Y) for both orders of each midp pair.
  CHECK(r.tautologies_dropped == 6);
}

TEST_CASE("fuzz: monotone chain, well-founded DAG, fixpoint, naive equivalence") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    Construction c = testing::random_construction(seed);
    FactSet d0 = initial_facts(c);
    auto r = saturate(d0, defaults());
    CAPTURE(seed);
    REQUIRE(r.stop_reason == StopReason::Fixpoint);
    CHECK(std::is_sorted(r.chain.begin(), r.chain.end()));
    CHECK(r.chain.front() == d0.size());
    CHECK(r.chain.back() == r.facts.size());
    for (const auto& [f, gen] : d0) CHECK(r.facts.at(f) == 0);
    for (const auto& [f, node] : r.dag.nodes()) {
      CHECK(node.round == r.facts.at(f));
      CHECK(node.round > 0);
      for (const auto& p : node.premises) CHECK(r.facts.at(p) < node.round);
    }
    Saturator again(r.facts, defaults());
    CHECK(again.derive_round().empty());
    auto naive = saturate(d0, defaults(), {}, EngineOptions{false, false});
    CHECK(naive.facts == r.facts);
    CHECK(naive.rounds == r.rounds);
  }
}

TEST_CASE("strict side conditions keep conditional facts out of premises") {
  FactSet d0 = initial_facts(parse_construction("point A B C\nmidpoint M A B\nmidpoint N A C\nmidpoint P B C"));
  auto loose = saturate(d0, defaults());
  auto strict = saturate(d0, defaults(), {}, EngineOptions{true, true});
  for (const auto& [f, gen] : strict.facts) CHECK(loose.facts.count(f) == 1);
  for (const auto& [f, node] : strict.dag.nodes())
    for (const auto& p : node.premises) CHECK_FALSE((strict.dag.contains(p) && strict.dag.at(p).conditional));
}
