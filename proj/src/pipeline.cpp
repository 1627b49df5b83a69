#include "geofind/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

namespace geofind {

namespace {

// Outcome of the run-time filter for one derived fact.
struct FilterOutcome {
  bool keep = false;
  DiscardReason reason = DiscardReason::EmpiricallyFalse;
  std::optional<std::uint64_t> seed;
};

class RuntimeFilter {
 public:
  RuntimeFilter(std::span<const CoordinateModel> models, double tol) : models_(models), tol_(tol) {}

  /// `premise_ok` tells whether each premise survived filtering.
  template <typename PremiseOk>
  FilterOutcome check(const Fact& fact, const DerivationNode& node, PremiseOk premise_ok) const {
    if (!node.conditional) {
      Verdict v = verify(fact, models_, models_.size(), tol_);
      if (v.kind == Verdict::Kind::Fails) throw SoundnessViolation(fact, node.rule, *v.seed);
      return {true, {}, std::nullopt};
    }
    for (const auto& premise : node.premises)
      if (!premise_ok(premise)) return {false, DiscardReason::ConditionalFailed, std::nullopt};
    for (const auto& model : models_)
      for (const auto& side : node.pending_sides)
        if (!eval_side(model, side, tol_)) return {false, DiscardReason::ConditionalFailed, model.seed};
    Verdict v = verify(fact, models_, models_.size(), tol_);
    if (v.kind == Verdict::Kind::Fails) return {false, DiscardReason::EmpiricallyFalse, v.seed};
    return {true, {}, std::nullopt};
  }

 private:
  std::span<const CoordinateModel> models_;
  double tol_;
};

void count_discard(DiscardCounts& counts, DiscardReason reason) {
  switch (reason) {
    case DiscardReason::EmpiricallyFalse: ++counts.empirically_false; break;
    case DiscardReason::ConditionalFailed: ++counts.conditional_failed; break;
    case DiscardReason::Uninteresting: ++counts.uninteresting; break;
  }
}

void fill_inputs(Report& report, const Construction& c, const std::vector<Rule>& rules,
                 const PipelineConfig& cfg, const FactSet& d0) {
  std::string steps_text;
  for (const auto& s : c.steps()) {
    report.construction_steps.push_back(to_string(s));
    steps_text += report.construction_steps.back() + "\n";
  }
  report.construction_digest = digest(steps_text);
  std::string rules_text;
  for (const auto& r : rules) {
    report.rule_names.push_back(r.name);
    rules_text += to_string(r) + "\n";
  }
  report.rules_digest = digest(rules_text);
  for (const auto& [fact, generation] : d0) report.hypotheses.push_back(fact);
  report.config = cfg;
}

// Facts ordered by (round, canonical form).
std::vector<Fact> by_round(const FactSet& facts) {
  std::vector<Fact> out;
  for (const auto& [fact, round] : facts)
    if (round > 0) out.push_back(fact);
  std::stable_sort(out.begin(), out.end(),
                   [&](const Fact& a, const Fact& b) { return facts.at(a) < facts.at(b); });
  return out;
}

void finish(Report& report, const FactSet& kept, const DerivationDag& dag, const FactSet& d0,
            const MetricConfig& metrics) {
  auto scores = score_all(kept, dag, d0, metrics);
  report.ranking = filter_interesting(scores, dag, metrics);
  std::set<Fact> interesting;
  for (const auto& r : report.ranking) interesting.insert(r.fact);
  for (const auto& fact : by_round(kept)) {
    report.facts.push_back(FactRecord{fact, dag.at(fact), Verdict::holds(), scores.at(fact),
                                      interesting.count(fact) != 0});
  }
}

Report run_fixpoint(const std::vector<Rule>& rules,
                    const PipelineConfig& cfg, std::span<const CoordinateModel> models,
                    Report report, const FactSet& d0) {
  auto sat = saturate(d0, rules, cfg.budget, EngineOptions{true, cfg.strict_sides});
  report.rounds = sat.rounds;
  report.stop_reason = sat.stop_reason;
  report.discarded.tautologies = sat.tautologies_dropped;

  RuntimeFilter filter(models, cfg.tol);
  FactSet kept = d0;
  std::set<Fact> kept_derived;
  for (const auto& fact : by_round(sat.facts)) {
    const auto& node = sat.dag.at(fact);
    auto outcome = filter.check(fact, node, [&](const Fact& p) { return kept.count(p) != 0; });
    if (outcome.keep) {
      kept.emplace(fact, node.round);
      kept_derived.insert(fact);
    } else {
      count_discard(report.discarded, outcome.reason);
      report.discards.push_back({fact, outcome.reason, node.rule, node.round, outcome.seed});
    }
  }
  finish(report, kept, sat.dag.restricted_to(kept_derived), d0, cfg.metrics);
  return report;
}

Report run_filtered(const std::vector<Rule>& rules, const PipelineConfig& cfg,
                    std::span<const CoordinateModel> models, Report report, const FactSet& d0) {
  Saturator engine(d0, rules, EngineOptions{true, cfg.strict_sides});
  RuntimeFilter filter(models, cfg.tol);
  while (true) {
    if (engine.round() >= cfg.budget.max_rounds) {
      report.stop_reason = StopReason::Budget;
      report.rounds = engine.round();
      break;
    }
    auto candidates = engine.derive_round();

    std::vector<Candidate> passed;
    for (auto& cand : candidates) {
      auto outcome = filter.check(cand.fact, cand.node,
                                  [&](const Fact& p) { return engine.facts().count(p) != 0; });
      if (outcome.keep) {
        passed.push_back(std::move(cand));
      } else {
        engine.reject(cand.fact);
        count_discard(report.discarded, outcome.reason);
        report.discards.push_back({cand.fact, outcome.reason, cand.node.rule, cand.node.round, outcome.seed});
      }
    }

    // Score the survivors against the current fact list plus themselves.
    FactSet trial = engine.facts();
    DerivationDag trial_dag = engine.dag();
    for (const auto& cand : passed) {
      trial.emplace(cand.fact, cand.node.round);
      trial_dag.add(cand.fact, cand.node);
    }
    auto scores = score_all(trial, trial_dag, d0, cfg.metrics);
    std::vector<Candidate> accepted;
    for (auto& cand : passed) {
      if (scores.at(cand.fact).aggregate >= cfg.metrics.threshold) {
        accepted.push_back(std::move(cand));
      } else {
        engine.reject(cand.fact);
        count_discard(report.discarded, DiscardReason::Uninteresting);
        report.discards.push_back({cand.fact, DiscardReason::Uninteresting, cand.node.rule,
                                   cand.node.round, std::nullopt});
      }
    }

    if (accepted.empty()) {
      report.stop_reason = StopReason::Fixpoint;
      report.rounds = engine.round() + 1;
      break;
    }
    bool truncated = false;
    const std::size_t size = engine.facts().size();
    if (size + accepted.size() > cfg.budget.max_facts) {
      const std::size_t keep = cfg.budget.max_facts > size ? cfg.budget.max_facts - size : 0;
      accepted.erase(accepted.begin() + static_cast<std::ptrdiff_t>(keep), accepted.end());
      truncated = true;
    }
    engine.commit(accepted);
    if (truncated) {
      report.stop_reason = StopReason::Budget;
      report.rounds = engine.round();
      break;
    }
  }
  report.discarded.tautologies = engine.tautologies_dropped();
  finish(report, engine.facts(), engine.dag(), d0, cfg.metrics);
  return report;
}

}  // namespace

std::string_view to_string(Mode m) { return m == Mode::Fixpoint ? "fixpoint" : "filtered"; }

std::string_view to_string(DiscardReason r) {
  switch (r) {
    case DiscardReason::EmpiricallyFalse: return "empirically_false";
    case DiscardReason::ConditionalFailed: return "conditional_failed";
    case DiscardReason::Uninteresting: return "uninteresting";
  }
  return "?";
}

SoundnessViolation::SoundnessViolation(Fact fact, std::string rule, std::uint64_t seed)
    : std::runtime_error("soundness violation: " + to_string(fact) + " derived by rule " + rule +
                         " fails on model seed " + std::to_string(seed)),
      fact_(std::move(fact)),
      rule_(std::move(rule)),
      seed_(seed) {}

std::string digest(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Report run_pipeline(const Construction& construction, const std::vector<Rule>& rules,
                    const PipelineConfig& cfg) {
  if (cfg.seeds < 1) throw std::invalid_argument("at least one model seed is required");
  const FactSet d0 = initial_facts(construction);
  Report report;
  fill_inputs(report, construction, rules, cfg, d0);

  const auto models = sample_models(construction, cfg.seeds, cfg.master_seed);
  if (models.size() < static_cast<std::size_t>(cfg.seeds)) {
    throw DegenerateConstruction(
        "construction is degenerate under model seed " +
        std::to_string(model_seed(cfg.master_seed, static_cast<int>(models.size()))) + " after " +
        std::to_string(kMaxSampleAttempts) + " attempts");
  }
  if (cfg.mode == Mode::Fixpoint)
    return run_fixpoint(rules, cfg, models, std::move(report), d0);
  return run_filtered(rules, cfg, models, std::move(report), d0);
}

}  // namespace geofind
