// Breadth-first forward chaining to a fixpoint, with derivation recording.
#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "geofind/geometry.hpp"
#include "geofind/rules.hpp"

namespace geofind {

/// How a derived fact was first obtained.
struct DerivationNode {
  std::string rule;
  std::size_t rule_index = 0;
  std::vector<Fact> premises;  // in rule premise order
  int round = 0;
  /// Side conditions that could not be decided on point names.
  std::vector<SideCondition> pending_sides;
  /// True when pending_sides is nonempty or any premise is conditional.
  bool conditional = false;
};

/// One derivation per derived fact; hypotheses have no node.
class DerivationDag {
 public:
  void add(const Fact& fact, DerivationNode node);

  bool contains(const Fact& f) const { return nodes_.count(f) != 0; }
  const DerivationNode* find(const Fact& f) const;
  const DerivationNode& at(const Fact& f) const;
  const std::map<Fact, DerivationNode>& nodes() const { return nodes_; }
  std::size_t size() const { return nodes_.size(); }
  bool empty() const { return nodes_.empty(); }

  /// Derived facts reachable from `f` through premises, including `f`
  /// itself when it is derived.
  std::set<Fact> derived_closure(const Fact& f) const;
  /// Hypotheses reachable from `f`; a hypothesis is its own only leaf.
  std::set<Fact> leaf_ancestors(const Fact& f) const;
  /// Every fact reachable from `f` through premises, excluding `f`.
  std::set<Fact> ancestors(const Fact& f) const;

  /// Keeps only the listed facts' nodes.
  DerivationDag restricted_to(const std::set<Fact>& keep) const;

 private:
  std::map<Fact, DerivationNode> nodes_;
};

using Binding = std::map<std::string, PointId>;

/// Bindings of `rule` over `facts` whose premises all match stored facts up
/// to symmetry and whose name-decidable side conditions hold. Bindings with
/// a tautological or degenerate conclusion are skipped; one binding is kept
/// per canonical conclusion.
std::vector<Binding> match_rule(const Rule& rule, const FactSet& facts);

struct Budget {
  int max_rounds = 10;
  std::size_t max_facts = 100000;
};

enum class StopReason { Fixpoint, Budget };
std::string_view to_string(StopReason r);

struct EngineOptions {
  /// Only match bindings that use at least one fact from the previous round.
  bool semi_naive = true;
  /// Do not use conditional facts as premises.
  bool strict_sides = false;
};

/// A conclusion produced by a round, not yet committed.
struct Candidate {
  Fact fact;
  DerivationNode node;
};

namespace detail {

struct CompiledTerm {
  int slot = -1;  // variable slot, or -1 for a constant
  PointId constant;
};

struct CompiledPattern {
  Predicate predicate;
  std::vector<CompiledTerm> args;
};

struct CompiledSide {
  SideKind kind;
  std::vector<CompiledTerm> args;
};

struct CompiledRule {
  std::string name;
  std::size_t index = 0;
  std::vector<CompiledPattern> premises;
  CompiledPattern conclusion;
  std::vector<CompiledSide> sides;
  std::vector<std::string> variables;
};

struct IndexEntry {
  const Fact* fact;
  int generation;
  bool conditional;
};

/// Facts by predicate and by (predicate, mentioned point).
struct FactIndex {
  std::map<Predicate, std::vector<IndexEntry>> by_predicate;
  std::map<std::pair<Predicate, PointId>, std::vector<IndexEntry>> by_point;

  void add(const IndexEntry& e);
};

}  // namespace detail

/// Incremental saturation state. Each call to `derive_round` computes the
/// next round's new conclusions; `commit` adds a chosen subset of them.
class Saturator {
 public:
  Saturator(const FactSet& hypotheses, std::span<const Rule> rules, EngineOptions options = {});
  // The index points into facts_.
  Saturator(const Saturator&) = delete;
  Saturator& operator=(const Saturator&) = delete;
  Saturator(Saturator&&) = default;
  Saturator& operator=(Saturator&&) = default;

  /// New conclusions of the next round, sorted by canonical form. Excludes
  /// facts already present, rejected facts, tautologies and degenerate facts.
  std::vector<Candidate> derive_round();
  /// Adds candidates at round `round() + 1` and advances the round counter.
  void commit(std::span<const Candidate> accepted);
  /// Facts that must never be added (discarded by a filter).
  void reject(const Fact& f) { rejected_.insert(f); }

  int round() const { return round_; }
  const FactSet& facts() const { return facts_; }
  const DerivationDag& dag() const { return dag_; }
  /// Distinct tautological conclusions dropped so far.
  std::size_t tautologies_dropped() const { return tautologies_.size(); }
  std::size_t degenerate_dropped() const { return degenerate_.size(); }
  bool is_conditional(const Fact& f) const;

 private:
  std::vector<detail::CompiledRule> rules_;
  EngineOptions options_;
  FactSet facts_;
  DerivationDag dag_;
  std::set<Fact> rejected_;
  std::set<Fact> tautologies_;
  std::set<Fact> degenerate_;
  std::set<Fact> conditional_;
  detail::FactIndex index_;
  int round_ = 0;
};

struct SaturationResult {
  FactSet facts;
  DerivationDag dag;
  StopReason stop_reason = StopReason::Fixpoint;
  int rounds = 0;
  /// |D_0|, |D_1|, ..., one entry per executed round plus the hypotheses.
  std::vector<std::size_t> chain;
  std::size_t tautologies_dropped = 0;
};

/// Applies every rule round by round until no new fact appears or the
/// budget is hit. Throws std::invalid_argument on a non-positive budget.
SaturationResult saturate(const FactSet& hypotheses, std::span<const Rule> rules,
                          const Budget& budget = {}, EngineOptions options = {});

}  // namespace geofind
