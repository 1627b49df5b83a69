#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <set>
#include <sstream>

#include "geofind/pipeline.hpp"
#include "json.hpp"

namespace geofind {

namespace {

using nlohmann::json;

// Nine significant digits, stored back as a double so the JSON writer
// prints the shortest form of the rounded value.
double fixed9(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return std::strtod(buf, nullptr);
}

std::string fmt9(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9f", x);
  return buf;
}

json fact_list(const std::vector<Fact>& facts) {
  json out = json::array();
  for (const auto& f : facts) out.push_back(to_string(f));
  return out;
}

json metric_map(const MetricValues& values) {
  json out = json::object();
  for (Metric m : kAllMetrics)
    out[std::string(metric_name(m))] = fixed9(values[static_cast<std::size_t>(m)]);
  return out;
}

json score_json(const ScoreCard& s) {
  return json{{"raw", metric_map(s.raw)},
              {"normalized", metric_map(s.normalized)},
              {"aggregate", fixed9(s.aggregate)}};
}

json settings_json(const PipelineConfig& cfg) {
  json directions = json::object();
  for (Metric m : kAllMetrics) {
    bool higher = cfg.metrics.directions[static_cast<std::size_t>(m)] == Direction::HigherIsInteresting;
    directions[std::string(metric_name(m))] = higher ? "higher" : "lower";
  }
  return json{{"mode", std::string(to_string(cfg.mode))},
              {"max_rounds", cfg.budget.max_rounds},
              {"max_facts", cfg.budget.max_facts},
              {"seeds", cfg.seeds},
              {"tol", fixed9(cfg.tol)},
              {"master_seed", std::to_string(cfg.master_seed)},
              {"strict_sides", cfg.strict_sides},
              {"threshold", fixed9(cfg.metrics.threshold)},
              {"top_k", cfg.metrics.top_k ? json(*cfg.metrics.top_k) : json(nullptr)},
              {"weights", metric_map(cfg.metrics.normalized_weights())},
              {"directions", directions}};
}

json derivation_json(const DerivationNode& node) {
  json sides = json::array();
  for (const auto& s : node.pending_sides) sides.push_back(to_string(s));
  return json{{"rule", node.rule},
              {"premises", fact_list(node.premises)},
              {"round", node.round},
              {"conditional", node.conditional},
              {"side_conditions", sides}};
}

std::string report_json(const Report& r) {
  json facts = json::array();
  for (const auto& rec : r.facts) {
    json item = derivation_json(rec.derivation);
    item["fact"] = to_string(rec.fact);
    item["verdict"] = to_string(rec.verdict);
    item["scores"] = score_json(rec.score);
    item["interesting"] = rec.interesting;
    facts.push_back(std::move(item));
  }
  json ranking = json::array();
  for (std::size_t i = 0; i < r.ranking.size(); ++i) {
    ranking.push_back(json{{"rank", i + 1},
                           {"fact", to_string(r.ranking[i].fact)},
                           {"aggregate", fixed9(r.ranking[i].score.aggregate)}});
  }
  json discards = json::array();
  for (const auto& d : r.discards) {
    discards.push_back(json{{"fact", to_string(d.fact)},
                            {"reason", std::string(to_string(d.reason))},
                            {"rule", d.rule},
                            {"round", d.round},
                            {"seed", d.seed ? json(std::to_string(*d.seed)) : json(nullptr)}});
  }
  json doc{
      {"construction",
       json{{"digest", r.construction_digest},
            {"steps", r.construction_steps},
            {"hypotheses", fact_list(r.hypotheses)}}},
      {"rules", json{{"digest", r.rules_digest}, {"names", r.rule_names}}},
      {"settings", settings_json(r.config)},
      {"rounds", r.rounds},
      {"stop_reason", std::string(to_string(r.stop_reason))},
      {"facts", facts},
      {"interesting", ranking},
      {"discarded",
       json{{"counts",
             json{{"tautologies", r.discarded.tautologies},
                  {"empirically_false", r.discarded.empirically_false},
                  {"conditional_failed", r.discarded.conditional_failed},
                  {"uninteresting", r.discarded.uninteresting}}},
            {"items", discards}}},
  };
  return doc.dump(2) + "\n";
}

void proof_lines(std::ostream& out, const Fact& goal, const std::map<Fact, const FactRecord*>& records) {
  // Every derived ancestor, earliest round first.
  std::vector<const FactRecord*> steps;
  std::set<Fact> seen;
  std::vector<Fact> stack{goal};
  while (!stack.empty()) {
    Fact f = stack.back();
    stack.pop_back();
    if (!seen.insert(f).second) continue;
    auto it = records.find(f);
    if (it == records.end()) continue;
    steps.push_back(it->second);
    for (const auto& p : it->second->derivation.premises) stack.push_back(p);
  }
  std::sort(steps.begin(), steps.end(), [](const FactRecord* a, const FactRecord* b) {
    if (a->derivation.round != b->derivation.round) return a->derivation.round < b->derivation.round;
    return a->fact < b->fact;
  });
  for (const auto* rec : steps) {
    out << "  " << derivation_line(rec->fact, rec->derivation) << "\n";
    if (!rec->derivation.pending_sides.empty()) {
      out << "      provided";
      for (const auto& s : rec->derivation.pending_sides) out << " " << to_string(s);
      out << "\n";
    }
  }
}

std::string report_text(const Report& r) {
  std::ostringstream out;
  out << "construction " << r.construction_digest << "  " << r.construction_steps.size()
      << " steps, " << r.hypotheses.size() << " hypotheses\n";
  out << "rules        " << r.rules_digest << "  " << r.rule_names.size() << " rules\n";
  out << "mode " << to_string(r.config.mode) << ", " << r.rounds << " rounds, stopped at "
      << to_string(r.stop_reason) << "\n";
  out << "kept " << r.facts.size() << " derived facts; discarded " << r.discarded.tautologies
      << " tautologies, " << r.discarded.empirically_false << " empirically false, "
      << r.discarded.conditional_failed << " conditional failed, " << r.discarded.uninteresting
      << " uninteresting\n\n";

  out << "Interesting theorems (" << r.ranking.size() << ")\n";
  out << "  rank  aggregate    round  fact\n";
  std::map<Fact, const FactRecord*> records;
  for (const auto& rec : r.facts) records.emplace(rec.fact, &rec);
  for (std::size_t i = 0; i < r.ranking.size(); ++i) {
    const auto& ranked = r.ranking[i];
    char line[64];
    std::snprintf(line, sizeof line, "  %4zu  %s  %5d  ", i + 1, fmt9(ranked.score.aggregate).c_str(),
                  records.at(ranked.fact)->derivation.round);
    out << line << to_string(ranked.fact) << "\n";
  }

  if (!r.ranking.empty()) out << "\nProofs\n";
  for (std::size_t i = 0; i < r.ranking.size(); ++i) {
    out << "[" << i + 1 << "] " << to_string(r.ranking[i].fact) << "\n";
    proof_lines(out, r.ranking[i].fact, records);
  }

  if (!r.discards.empty()) {
    out << "\nDiscarded\n";
    for (const auto& d : r.discards) {
      out << "  " << to_string(d.fact) << "  " << to_string(d.reason) << " (" << d.rule << ", round "
          << d.round << ")";
      if (d.seed) out << " seed " << *d.seed;
      out << "\n";
    }
  }
  return out.str();
}

}  // namespace

std::string derivation_line(const Fact& fact, const DerivationNode& node) {
  std::string out = to_string(fact) + " ⇐ " + node.rule + "[";
  for (std::size_t i = 0; i < node.premises.size(); ++i) {
    if (i) out += ", ";
    out += to_string(node.premises[i]);
  }
  return out + "]";
}

std::string emit_report(const Report& report, Format format) {
  return format == Format::Json ? report_json(report) : report_text(report);
}

std::string emit_saturation(const SaturationResult& result, const FactSet& hypotheses,
                            Format format) {
  std::vector<Fact> derived;
  for (const auto& [fact, round] : result.facts)
    if (round > 0) derived.push_back(fact);
  std::stable_sort(derived.begin(), derived.end(), [&](const Fact& a, const Fact& b) {
    return result.facts.at(a) < result.facts.at(b);
  });

  if (format == Format::Json) {
    std::vector<Fact> hyps;
    for (const auto& [fact, round] : hypotheses) hyps.push_back(fact);
    json facts = json::array();
    for (const auto& f : derived) {
      json item = derivation_json(result.dag.at(f));
      item["fact"] = to_string(f);
      facts.push_back(std::move(item));
    }
    json doc{{"hypotheses", fact_list(hyps)},
             {"facts", facts},
             {"rounds", result.rounds},
             {"stop_reason", std::string(to_string(result.stop_reason))},
             {"chain", result.chain},
             {"tautologies_dropped", result.tautologies_dropped}};
    return doc.dump(2) + "\n";
  }

  std::ostringstream out;
  out << result.rounds << " rounds, stopped at " << to_string(result.stop_reason) << "; "
      << hypotheses.size() << " hypotheses, " << derived.size() << " derived\n";
  for (const auto& [fact, round] : hypotheses) out << "  [0] " << to_string(fact) << "\n";
  for (const auto& f : derived) {
    const auto& node = result.dag.at(f);
    out << "  [" << node.round << "] " << derivation_line(f, node);
    if (node.conditional) out << "  (conditional)";
    out << "\n";
  }
  return out.str();
}

}  // namespace geofind
