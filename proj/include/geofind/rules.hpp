// Rule files: patterns over facts with nondegeneracy side conditions.
//
//   rule <name>: <atom> {, <atom>} {, <side>} => <atom>
//
// Identifiers starting with an uppercase letter are variables; any other
// identifier is a point constant.
#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "geofind/geometry.hpp"

namespace geofind {

struct Variable {
  std::string name;
  friend bool operator==(const Variable&, const Variable&) = default;
};

using Term = std::variant<Variable, PointId>;

struct Pattern {
  Predicate predicate;
  std::vector<Term> args;
};

enum class SideKind { Distinct, NonCollinear, DistinctLines };

std::string_view side_name(SideKind kind);
std::size_t side_arity(SideKind kind);

struct SidePattern {
  SideKind kind;
  std::vector<Term> args;
};

/// A side condition instantiated with points.
struct SideCondition {
  SideKind kind;
  std::vector<PointId> args;

  friend bool operator==(const SideCondition&, const SideCondition&) = default;
  friend auto operator<=>(const SideCondition&, const SideCondition&) = default;
};

std::string to_string(const SideCondition& side);

struct Rule {
  std::string name;
  std::vector<Pattern> premises;
  Pattern conclusion;
  std::vector<SidePattern> sides;
};

std::string to_string(const Pattern& pattern);
std::string to_string(const Rule& rule);

/// Parses a `.gr` document. Throws ParseError on syntax errors, duplicate
/// names and unbound conclusion or side-condition variables.
std::vector<Rule> parse_rules(std::string_view text);

/// The bundled default rule set (`rules/gddm-default.gr`).
std::string_view default_rules_text();

}  // namespace geofind
