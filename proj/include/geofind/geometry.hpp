// Points, predicates and canonical ground facts.
//
// Every fact handed around the engine is in canonical form: the unique
// representative of its predicate's symmetry class. Equality, ordering and
// hashing all operate on that form, so two facts that state the same thing
// about the same points always compare equal.
#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <functional>
#include <map>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace geofind {

/// Returns true for `[A-Za-z][A-Za-z0-9_]*`.
bool is_identifier(std::string_view text);

/// Name of a construction point. Comparison is by name (case-sensitive).
class PointId {
 public:
  PointId() = default;
  explicit PointId(std::string name);

  const std::string& name() const { return name_; }

  friend bool operator==(const PointId&, const PointId&) = default;
  friend std::strong_ordering operator<=>(const PointId&, const PointId&) = default;

 private:
  std::string name_;
};

// Enumerators are in alphabetical order of their textual names, so ordering
// by enum value agrees with ordering by name.
enum class Predicate { Coll, Cong, Cyclic, EqAngle, Midp, Para, Perp };

inline constexpr std::array<Predicate, 7> kAllPredicates = {
    Predicate::Coll, Predicate::Cong, Predicate::Cyclic, Predicate::EqAngle,
    Predicate::Midp, Predicate::Para, Predicate::Perp};

std::size_t arity(Predicate p);
std::string_view predicate_name(Predicate p);
/// Throws std::invalid_argument for unknown names.
Predicate predicate_from_name(std::string_view name);
bool is_predicate_name(std::string_view name);

class MalformedFact : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A fact as written, before canonicalization.
struct RawFact {
  Predicate predicate;
  std::vector<PointId> args;
};

class Fact;
Fact canonicalize(const RawFact& raw);

/// A canonical ground atom. Only `canonicalize` can build one.
class Fact {
 public:
  Predicate predicate() const { return predicate_; }
  std::span<const PointId> args() const { return args_; }
  const PointId& arg(std::size_t i) const { return args_[i]; }

  friend bool operator==(const Fact&, const Fact&) = default;
  friend std::strong_ordering operator<=>(const Fact& a, const Fact& b);

 private:
  friend Fact canonicalize(const RawFact& raw);
  Fact(Predicate p, std::vector<PointId> args)
      : predicate_(p), args_(std::move(args)) {}

  Predicate predicate_;
  std::vector<PointId> args_;
};

/// Shorthand for `canonicalize({p, {names...}})`.
Fact make_fact(Predicate p, std::initializer_list<std::string_view> names);

/// `pred(P1,...,Pn)`.
std::string to_string(const Fact& f);
std::string to_string(const RawFact& f);

/// Parses the textual form `pred(P1,...,Pn)` (whitespace tolerated).
/// Throws MalformedFact.
RawFact parse_raw_fact(std::string_view text);
Fact parse_fact(std::string_view text);

enum class Triviality { None, Tautology, Degenerate };

/// Tautology: holds for every point assignment. Degenerate: repeated points
/// make the predicate meaningless or force a coincidence of points.
Triviality classify(const Fact& f);
inline bool is_tautology(const Fact& f) {
  return classify(f) == Triviality::Tautology;
}
inline bool is_degenerate(const Fact& f) {
  return classify(f) == Triviality::Degenerate;
}

struct FactSymbols {
  std::size_t multiset_size = 0;
  std::set<std::string> distinct;
};

/// The predicate symbol plus one symbol per argument position.
FactSymbols fact_symbols(const Fact& f);

/// Canonical facts with the round at which each entered (0 = hypothesis).
using FactSet = std::map<Fact, int>;

/// Distinct points mentioned by the fact.
std::set<PointId> fact_points(const Fact& f);

/// Argument index permutations `pi` such that `f.args[pi[i]]` lists an
/// equivalent fact. Always contains the identity first; closed under
/// composition.
std::span<const std::vector<int>> symmetry_group(Predicate p);

}  // namespace geofind

template <>
struct std::hash<geofind::PointId> {
  std::size_t operator()(const geofind::PointId& p) const noexcept {
    return std::hash<std::string>{}(p.name());
  }
};

template <>
struct std::hash<geofind::Fact> {
  std::size_t operator()(const geofind::Fact& f) const noexcept;
};
