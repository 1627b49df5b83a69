#include "geofind/engine.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <stdexcept>
#include <tuple>

namespace geofind {

// ---------------------------------------------------------------------------
// DerivationDag

void DerivationDag::add(const Fact& fact, DerivationNode node) {
  nodes_.try_emplace(fact, std::move(node));
}

const DerivationNode* DerivationDag::find(const Fact& f) const {
  auto it = nodes_.find(f);
  return it == nodes_.end() ? nullptr : &it->second;
}

const DerivationNode& DerivationDag::at(const Fact& f) const {
  auto it = nodes_.find(f);
  if (it == nodes_.end()) throw std::out_of_range("no derivation for " + to_string(f));
  return it->second;
}

namespace {

void collect(const DerivationDag& dag, const Fact& f, std::set<Fact>& seen) {
  std::vector<Fact> stack{f};
  while (!stack.empty()) {
    Fact cur = std::move(stack.back());
    stack.pop_back();
    if (!seen.insert(cur).second) continue;
    if (const auto* node = dag.find(cur))
      for (const auto& p : node->premises) stack.push_back(p);
  }
}

}  // namespace

std::set<Fact> DerivationDag::ancestors(const Fact& f) const {
  std::set<Fact> seen;
  collect(*this, f, seen);
  seen.erase(f);
  return seen;
}

std::set<Fact> DerivationDag::derived_closure(const Fact& f) const {
  std::set<Fact> seen;
  collect(*this, f, seen);
  std::set<Fact> out;
  for (const auto& g : seen)
    if (contains(g)) out.insert(g);
  return out;
}

std::set<Fact> DerivationDag::leaf_ancestors(const Fact& f) const {
  std::set<Fact> seen;
  collect(*this, f, seen);
  std::set<Fact> out;
  for (const auto& g : seen)
    if (!contains(g)) out.insert(g);
  return out;
}

DerivationDag DerivationDag::restricted_to(const std::set<Fact>& keep) const {
  DerivationDag out;
  for (const auto& [fact, node] : nodes_)
    if (keep.count(fact)) out.nodes_.emplace(fact, node);
  return out;
}

std::string_view to_string(StopReason r) {
  return r == StopReason::Fixpoint ? "fixpoint" : "budget";
}

// ---------------------------------------------------------------------------
// Matching

namespace detail {

void FactIndex::add(const IndexEntry& e) {
  Predicate p = e.fact->predicate();
  by_predicate[p].push_back(e);
  for (const auto& point : fact_points(*e.fact)) by_point[{p, point}].push_back(e);
}

namespace {

CompiledTerm compile_term(const Term& t, std::map<std::string, int>& slots,
                          std::vector<std::string>& names) {
  if (const auto* v = std::get_if<Variable>(&t)) {
    auto [it, inserted] = slots.emplace(v->name, static_cast<int>(slots.size()));
    if (inserted) names.push_back(v->name);
    return CompiledTerm{it->second, {}};
  }
  return CompiledTerm{-1, std::get<PointId>(t)};
}

}  // namespace

CompiledRule compile(const Rule& rule, std::size_t index) {
  CompiledRule out;
  out.name = rule.name;
  out.index = index;
  std::map<std::string, int> slots;
  auto compile_pattern = [&](const Pattern& p) {
    CompiledPattern cp{p.predicate, {}};
    for (const auto& t : p.args) cp.args.push_back(compile_term(t, slots, out.variables));
    return cp;
  };
  for (const auto& p : rule.premises) out.premises.push_back(compile_pattern(p));
  out.conclusion = compile_pattern(rule.conclusion);
  for (const auto& s : rule.sides) {
    CompiledSide cs{s.kind, {}};
    for (const auto& t : s.args) cs.args.push_back(compile_term(t, slots, out.variables));
    out.sides.push_back(std::move(cs));
  }
  return out;
}

}  // namespace detail

namespace {

using detail::CompiledPattern;
using detail::CompiledRule;
using detail::CompiledTerm;
using detail::FactIndex;
using detail::IndexEntry;

enum class Source { All, Old, Delta };

struct MatchSettings {
  bool semi_naive = false;
  bool skip_conditional = false;
  int delta_generation = 0;
};

// Backtracking join of one rule's premises against an index.
class Matcher {
 public:
  using Emit = std::function<void(const std::vector<const PointId*>&,
                                  const std::vector<const IndexEntry*>&)>;

  Matcher(const CompiledRule& rule, const FactIndex& index, MatchSettings settings, Emit emit)
      : rule_(rule),
        index_(index),
        settings_(settings),
        emit_(std::move(emit)),
        slots_(rule.variables.size(), nullptr),
        chosen_(rule.premises.size(), nullptr) {}

  void run() {
    const std::size_t n = rule_.premises.size();
    if (!settings_.semi_naive) {
      order_.resize(n);
      sources_.assign(n, Source::All);
      for (std::size_t i = 0; i < n; ++i) order_[i] = i;
      join(0);
      return;
    }
    // Pivot premise from the delta, earlier premises from older facts and
    // later ones from everything: each binding is enumerated exactly once.
    for (std::size_t pivot = 0; pivot < n; ++pivot) {
      order_.clear();
      sources_.assign(n, Source::All);
      order_.push_back(pivot);
      for (std::size_t i = 0; i < n; ++i) {
        if (i == pivot) continue;
        order_.push_back(i);
      }
      for (std::size_t i = 0; i < n; ++i)
        sources_[i] = i == pivot ? Source::Delta : (i < pivot ? Source::Old : Source::All);
      join(0);
    }
  }

 private:
  const PointId* value_of(const CompiledTerm& t) const {
    return t.slot < 0 ? &t.constant : slots_[t.slot];
  }

  const std::vector<IndexEntry>* candidates(const CompiledPattern& p) const {
    for (const auto& t : p.args) {
      if (const PointId* v = value_of(t)) {
        auto it = index_.by_point.find({p.predicate, *v});
        return it == index_.by_point.end() ? nullptr : &it->second;
      }
    }
    auto it = index_.by_predicate.find(p.predicate);
    return it == index_.by_predicate.end() ? nullptr : &it->second;
  }

  bool admissible(const IndexEntry& e, Source s) const {
    if (settings_.skip_conditional && e.conditional) return false;
    switch (s) {
      case Source::All: return true;
      case Source::Old: return e.generation < settings_.delta_generation;
      case Source::Delta: return e.generation == settings_.delta_generation;
    }
    return false;
  }

  void join(std::size_t depth) {
    if (depth == order_.size()) {
      emit_(slots_, chosen_);
      return;
    }
    const std::size_t premise = order_[depth];
    const CompiledPattern& pattern = rule_.premises[premise];
    const auto* list = candidates(pattern);
    if (!list) return;
    std::vector<int> trail;
    for (const IndexEntry& entry : *list) {
      if (!admissible(entry, sources_[premise])) continue;
      const auto args = entry.fact->args();
      for (const auto& perm : symmetry_group(pattern.predicate)) {
        trail.clear();
        bool ok = true;
        for (std::size_t i = 0; i < pattern.args.size() && ok; ++i) {
          const PointId& value = args[perm[i]];
          const CompiledTerm& term = pattern.args[i];
          if (term.slot < 0) {
            ok = term.constant == value;
          } else if (const PointId* bound = slots_[term.slot]) {
            ok = *bound == value;
          } else {
            slots_[term.slot] = &value;
            trail.push_back(term.slot);
          }
        }
        if (ok) {
          chosen_[premise] = &entry;
          join(depth + 1);
          chosen_[premise] = nullptr;
        }
        for (int slot : trail) slots_[slot] = nullptr;
      }
    }
  }

  const CompiledRule& rule_;
  const FactIndex& index_;
  MatchSettings settings_;
  Emit emit_;
  std::vector<const PointId*> slots_;
  std::vector<const IndexEntry*> chosen_;
  std::vector<std::size_t> order_;
  std::vector<Source> sources_;
};

std::vector<PointId> instantiate(const std::vector<CompiledTerm>& terms,
                                 const std::vector<const PointId*>& slots) {
  std::vector<PointId> out;
  out.reserve(terms.size());
  for (const auto& t : terms) out.push_back(t.slot < 0 ? t.constant : *slots[t.slot]);
  return out;
}

// Decides side conditions on point names. Returns nullopt when a condition is
// violated symbolically; otherwise the conditions that need coordinates.
std::optional<std::vector<SideCondition>> symbolic_sides(const CompiledRule& rule,
                                                         const std::vector<const PointId*>& slots) {
  std::vector<SideCondition> pending;
  for (const auto& side : rule.sides) {
    auto a = instantiate(side.args, slots);
    switch (side.kind) {
      case SideKind::Distinct:
        if (a[0] == a[1]) return std::nullopt;
        break;
      case SideKind::NonCollinear:
        if (a[0] == a[1] || a[1] == a[2] || a[0] == a[2]) return std::nullopt;
        pending.push_back({side.kind, std::move(a)});
        break;
      case SideKind::DistinctLines: {
        if (a[0] == a[1] || a[2] == a[3]) return std::nullopt;
        auto l1 = std::minmax(a[0], a[1]);
        auto l2 = std::minmax(a[2], a[3]);
        if (l1 == l2) return std::nullopt;
        pending.push_back({side.kind, std::move(a)});
        break;
      }
    }
  }
  std::sort(pending.begin(), pending.end());
  pending.erase(std::unique(pending.begin(), pending.end()), pending.end());
  return pending;
}

Fact conclusion_of(const CompiledRule& rule, const std::vector<const PointId*>& slots) {
  return canonicalize(RawFact{rule.conclusion.predicate, instantiate(rule.conclusion.args, slots)});
}

// Preference among derivations of the same fact in the same round.
auto derivation_key(const DerivationNode& n) {
  return std::tie(n.conditional, n.rule_index, n.premises, n.pending_sides);
}

}  // namespace

std::vector<Binding> match_rule(const Rule& rule, const FactSet& facts) {
  const CompiledRule compiled = detail::compile(rule, 0);
  FactIndex index;
  for (const auto& [fact, generation] : facts) index.add({&fact, generation, false});

  std::map<Fact, Binding> by_conclusion;
  Matcher matcher(compiled, index, MatchSettings{},
                  [&](const std::vector<const PointId*>& slots,
                      const std::vector<const IndexEntry*>&) {
                    if (!symbolic_sides(compiled, slots)) return;
                    Binding b;
                    for (std::size_t i = 0; i < compiled.variables.size(); ++i)
                      b.emplace(compiled.variables[i], *slots[i]);
                    Fact conclusion = conclusion_of(compiled, slots);
                    if (classify(conclusion) != Triviality::None) return;
                    auto [it, inserted] = by_conclusion.emplace(conclusion, b);
                    if (!inserted && b < it->second) it->second = std::move(b);
                  });
  matcher.run();

  std::vector<Binding> out;
  out.reserve(by_conclusion.size());
  for (auto& [fact, binding] : by_conclusion) out.push_back(std::move(binding));
  return out;
}

// ---------------------------------------------------------------------------
// Saturator

Saturator::Saturator(const FactSet& hypotheses, std::span<const Rule> rules,
                     EngineOptions options)
    : options_(options) {
  for (std::size_t i = 0; i < rules.size(); ++i) rules_.push_back(detail::compile(rules[i], i));
  for (const auto& [fact, generation] : hypotheses) {
    auto [it, inserted] = facts_.emplace(fact, 0);
    index_.add({&it->first, 0, false});
  }
}

bool Saturator::is_conditional(const Fact& f) const { return conditional_.count(f) != 0; }

std::vector<Candidate> Saturator::derive_round() {
  const int next_round = round_ + 1;
  std::map<Fact, DerivationNode> found;
  MatchSettings settings{options_.semi_naive, options_.strict_sides, round_};

  for (const auto& rule : rules_) {
    Matcher matcher(
        rule, index_, settings,
        [&](const std::vector<const PointId*>& slots, const std::vector<const IndexEntry*>& chosen) {
          auto pending = symbolic_sides(rule, slots);
          if (!pending) return;
          Fact conclusion = conclusion_of(rule, slots);
          switch (classify(conclusion)) {
            case Triviality::Tautology:
              tautologies_.insert(conclusion);
              return;
            case Triviality::Degenerate:
              degenerate_.insert(conclusion);
              return;
            case Triviality::None:
              break;
          }
          if (facts_.count(conclusion) || rejected_.count(conclusion)) return;

          DerivationNode node;
          node.rule = rule.name;
          node.rule_index = rule.index;
          node.round = next_round;
          node.pending_sides = std::move(*pending);
          node.conditional = !node.pending_sides.empty();
          for (const IndexEntry* e : chosen) {
            node.premises.push_back(*e->fact);
            node.conditional = node.conditional || e->conditional;
          }
          auto it = found.find(conclusion);
          if (it == found.end()) {
            found.emplace(std::move(conclusion), std::move(node));
          } else if (derivation_key(node) < derivation_key(it->second)) {
            it->second = std::move(node);
          }
        });
    matcher.run();
  }

  std::vector<Candidate> out;
  out.reserve(found.size());
  for (auto& [fact, node] : found) out.push_back(Candidate{fact, std::move(node)});
  return out;
}

void Saturator::commit(std::span<const Candidate> accepted) {
  ++round_;
  for (const auto& c : accepted) {
    auto [it, inserted] = facts_.emplace(c.fact, round_);
    if (!inserted) continue;
    DerivationNode node = c.node;
    node.round = round_;
    if (node.conditional) conditional_.insert(c.fact);
    index_.add({&it->first, round_, node.conditional});
    dag_.add(c.fact, std::move(node));
  }
}

SaturationResult saturate(const FactSet& hypotheses, std::span<const Rule> rules,
                          const Budget& budget, EngineOptions options) {
  if (budget.max_rounds <= 0 || budget.max_facts == 0)
    throw std::invalid_argument("saturation budget must be positive");

  Saturator engine(hypotheses, rules, options);
  SaturationResult result;
  result.chain.push_back(engine.facts().size());
  while (true) {
    if (engine.round() >= budget.max_rounds) {
      result.stop_reason = StopReason::Budget;
      result.rounds = engine.round();
      break;
    }
    auto candidates = engine.derive_round();
    if (candidates.empty()) {
      result.stop_reason = StopReason::Fixpoint;
      result.rounds = engine.round() + 1;
      result.chain.push_back(engine.facts().size());
      break;
    }
    bool truncated = false;
    const std::size_t size = engine.facts().size();
    if (size + candidates.size() > budget.max_facts) {
      const std::size_t keep = budget.max_facts > size ? budget.max_facts - size : 0;
      candidates.erase(candidates.begin() + static_cast<std::ptrdiff_t>(keep), candidates.end());
      truncated = true;
    }
    engine.commit(candidates);
    result.chain.push_back(engine.facts().size());
    if (truncated) {
      result.stop_reason = StopReason::Budget;
      result.rounds = engine.round();
      break;
    }
  }
  result.tautologies_dropped = engine.tautologies_dropped();
  result.facts = engine.facts();
  result.dag = engine.dag();
  return result;
}

}  // namespace geofind
