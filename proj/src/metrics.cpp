#include "geofind/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "json.hpp"

namespace geofind {

namespace {

std::size_t idx(Metric m) { return static_cast<std::size_t>(m); }

using PointPair = std::pair<PointId, PointId>;

std::set<PointPair> point_pairs(const std::set<PointId>& points) {
  std::set<PointPair> out;
  for (auto i = points.begin(); i != points.end(); ++i)
    for (auto j = std::next(i); j != points.end(); ++j) out.emplace(*i, *j);
  return out;
}

std::set<PointPair> hypothesis_pairs(const FactSet& hypotheses) {
  std::set<PointPair> out;
  for (const auto& [fact, generation] : hypotheses) {
    auto pairs = point_pairs(fact_points(fact));
    out.insert(pairs.begin(), pairs.end());
  }
  return out;
}

double surprisingness_with(const Fact& f, const std::set<PointPair>& known) {
  auto pairs = point_pairs(fact_points(f));
  if (pairs.empty()) return 0;
  auto fresh = std::count_if(pairs.begin(), pairs.end(),
                             [&](const PointPair& p) { return !known.count(p); });
  return static_cast<double>(fresh) / static_cast<double>(pairs.size());
}

double intensity_from_leaves(const Fact& f, const std::set<Fact>& leaves) {
  std::set<PointId> leaf_points;
  for (const auto& leaf : leaves) {
    auto pts = fact_points(leaf);
    leaf_points.insert(pts.begin(), pts.end());
  }
  if (leaf_points.empty()) return 0;
  double ratio = static_cast<double>(fact_points(f).size()) / static_cast<double>(leaf_points.size());
  return std::clamp(1.0 - ratio, 0.0, 1.0);
}

double focus_from_leaf_count(std::size_t negatives) {
  const double p = 1;
  const double n = static_cast<double>(negatives);
  return std::abs(p - n) / (p + n);
}

// Derived-node closure and leaf hypotheses of every derived fact, filled in
// round order so each premise is ready before its consumers.
struct Closures {
  std::map<Fact, std::set<Fact>> nodes;
  std::map<Fact, std::set<Fact>> leaves;

  explicit Closures(const DerivationDag& dag) {
    std::vector<const std::pair<const Fact, DerivationNode>*> order;
    for (const auto& entry : dag.nodes()) order.push_back(&entry);
    std::stable_sort(order.begin(), order.end(),
                     [](auto* a, auto* b) { return a->second.round < b->second.round; });
    for (const auto* entry : order) {
      std::set<Fact> own{entry->first};
      std::set<Fact> own_leaves;
      for (const auto& premise : entry->second.premises) {
        if (auto it = nodes.find(premise); it != nodes.end()) {
          own.insert(it->second.begin(), it->second.end());
          const auto& pl = leaves.at(premise);
          own_leaves.insert(pl.begin(), pl.end());
        } else {
          own_leaves.insert(premise);
        }
      }
      nodes.emplace(entry->first, std::move(own));
      leaves.emplace(entry->first, std::move(own_leaves));
    }
  }
};

void normalize(std::map<Fact, ScoreCard>& cards, const DerivationDag& dag, std::size_t metric) {
  double lo = 0, hi = 0;
  bool any = false;
  for (const auto& [fact, card] : cards) {
    if (!dag.contains(fact)) continue;
    double v = card.raw[metric];
    if (!any) {
      lo = hi = v;
      any = true;
    }
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  for (auto& [fact, card] : cards) {
    double v = card.raw[metric];
    card.normalized[metric] = (!any || hi == lo) ? 0.5 : std::clamp((v - lo) / (hi - lo), 0.0, 1.0);
  }
}

void aggregate(std::map<Fact, ScoreCard>& cards, const MetricConfig& cfg) {
  const MetricValues w = cfg.normalized_weights();
  for (auto& [fact, card] : cards) {
    double total = 0;
    for (std::size_t i = 0; i < kMetricCount; ++i) {
      double n = card.normalized[i];
      total += w[i] * (cfg.directions[i] == Direction::HigherIsInteresting ? n : 1 - n);
    }
    card.aggregate = std::clamp(total, 0.0, 1.0);
  }
}

}  // namespace

std::string_view metric_name(Metric m) {
  switch (m) {
    case Metric::Obviousness: return "obviousness";
    case Metric::Weight: return "weight";
    case Metric::Complexity: return "complexity";
    case Metric::Surprisingness: return "surprisingness";
    case Metric::Intensity: return "intensity";
    case Metric::Adaptivity: return "adaptivity";
    case Metric::Focus: return "focus";
    case Metric::Usefulness: return "usefulness";
  }
  return "?";
}

std::optional<Metric> metric_from_name(std::string_view name) {
  for (Metric m : kAllMetrics)
    if (metric_name(m) == name) return m;
  return std::nullopt;
}

MetricConfig::MetricConfig() {
  weights.fill(1.0);
  directions.fill(Direction::HigherIsInteresting);
  directions[idx(Metric::Weight)] = Direction::LowerIsInteresting;
  directions[idx(Metric::Complexity)] = Direction::LowerIsInteresting;
}

MetricValues MetricConfig::normalized_weights() const {
  double total = 0;
  for (double w : weights) total += w;
  MetricValues out;
  for (std::size_t i = 0; i < kMetricCount; ++i)
    out[i] = total > 0 ? weights[i] / total : 1.0 / kMetricCount;
  return out;
}

MetricConfig MetricConfig::from_json(std::string_view text) {
  using nlohmann::json;
  MetricConfig cfg;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("metric config: ") + e.what());
  }
  if (!doc.is_object()) throw std::invalid_argument("metric config: expected a JSON object");

  auto metric_of = [](const std::string& key) {
    auto m = metric_from_name(key);
    if (!m) throw std::invalid_argument("metric config: unknown metric '" + key + "'");
    return idx(*m);
  };
  for (const auto& [key, value] : doc.items()) {
    if (key == "weights") {
      for (const auto& [name, w] : value.items()) {
        if (!w.is_number() || w.get<double>() < 0)
          throw std::invalid_argument("metric config: weight of " + name + " must be a nonnegative number");
        cfg.weights[metric_of(name)] = w.get<double>();
      }
    } else if (key == "directions") {
      for (const auto& [name, d] : value.items()) {
        std::string s = d.is_string() ? d.get<std::string>() : "";
        if (s == "higher") cfg.directions[metric_of(name)] = Direction::HigherIsInteresting;
        else if (s == "lower") cfg.directions[metric_of(name)] = Direction::LowerIsInteresting;
        else throw std::invalid_argument("metric config: direction of " + name + " must be \"higher\" or \"lower\"");
      }
    } else if (key == "threshold") {
      if (!value.is_number()) throw std::invalid_argument("metric config: threshold must be a number");
      cfg.threshold = value.get<double>();
    } else if (key == "top_k") {
      if (value.is_null()) {
        cfg.top_k.reset();
      } else if (value.is_number_integer() && value.get<long long>() > 0) {
        cfg.top_k = static_cast<std::size_t>(value.get<long long>());
      } else {
        throw std::invalid_argument("metric config: top_k must be a positive integer or null");
      }
    } else {
      throw std::invalid_argument("metric config: unknown key '" + key + "'");
    }
  }
  return cfg;
}

std::size_t obviousness(const Fact& f, const DerivationDag& dag, const FactSet& hypotheses) {
  if (!dag.contains(f) && !hypotheses.count(f))
    throw std::out_of_range("unknown fact " + to_string(f));
  return dag.derived_closure(f).size();
}

std::size_t weight(const Fact& f) { return fact_symbols(f).multiset_size; }

std::size_t complexity(const Fact& f) { return fact_symbols(f).distinct.size(); }

double surprisingness(const Fact& f, const FactSet& hypotheses) {
  return surprisingness_with(f, hypothesis_pairs(hypotheses));
}

double intensity(const Fact& f, const DerivationDag& dag) {
  if (!dag.contains(f)) return 0;
  return intensity_from_leaves(f, dag.leaf_ancestors(f));
}

double adaptivity(const Fact& f) {
  return 1.0 - static_cast<double>(fact_points(f).size()) / static_cast<double>(f.args().size());
}

double focus(const Fact& f, const DerivationDag& dag) {
  if (!dag.contains(f)) return 1;
  return focus_from_leaf_count(dag.leaf_ancestors(f).size());
}

std::size_t usefulness(const Fact& f, const DerivationDag& dag, const std::set<Fact>& interesting) {
  std::size_t count = 0;
  for (const auto& g : interesting) {
    if (g == f) continue;
    if (dag.ancestors(g).count(f)) ++count;
  }
  return count;
}

std::map<Fact, ScoreCard> score_all(const FactSet& facts, const DerivationDag& dag,
                                    const FactSet& hypotheses, const MetricConfig& cfg) {
  const Closures closures(dag);
  const auto known_pairs = hypothesis_pairs(hypotheses);

  std::map<Fact, ScoreCard> cards;
  for (const auto& [fact, generation] : facts) {
    ScoreCard card;
    auto& r = card.raw;
    const bool derived = dag.contains(fact);
    r[idx(Metric::Obviousness)] = derived ? static_cast<double>(closures.nodes.at(fact).size()) : 0;
    r[idx(Metric::Weight)] = static_cast<double>(weight(fact));
    r[idx(Metric::Complexity)] = static_cast<double>(complexity(fact));
    r[idx(Metric::Surprisingness)] = surprisingness_with(fact, known_pairs);
    r[idx(Metric::Intensity)] = derived ? intensity_from_leaves(fact, closures.leaves.at(fact)) : 0;
    r[idx(Metric::Adaptivity)] = adaptivity(fact);
    r[idx(Metric::Focus)] = derived ? focus_from_leaf_count(closures.leaves.at(fact).size()) : 1;
    r[idx(Metric::Usefulness)] = 0;
    cards.emplace(fact, card);
  }
  for (std::size_t m = 0; m < kMetricCount; ++m) normalize(cards, dag, m);
  aggregate(cards, cfg);

  // Second pass: usefulness against the provisional interesting set.
  std::map<Fact, std::size_t> useful;
  for (const auto& [g, card] : cards) {
    if (!dag.contains(g) || card.aggregate < cfg.threshold) continue;
    for (const auto& a : closures.nodes.at(g))
      if (a != g) ++useful[a];
    for (const auto& leaf : closures.leaves.at(g)) ++useful[leaf];
  }
  for (auto& [fact, card] : cards) {
    auto it = useful.find(fact);
    card.raw[idx(Metric::Usefulness)] = it == useful.end() ? 0 : static_cast<double>(it->second);
  }
  normalize(cards, dag, idx(Metric::Usefulness));
  aggregate(cards, cfg);
  return cards;
}

std::vector<RankedFact> filter_interesting(const std::map<Fact, ScoreCard>& scores,
                                           const DerivationDag& dag, const MetricConfig& cfg) {
  std::vector<RankedFact> out;
  for (const auto& [fact, card] : scores)
    if (dag.contains(fact) && card.aggregate >= cfg.threshold) out.push_back({fact, card});
  std::stable_sort(out.begin(), out.end(), [](const RankedFact& a, const RankedFact& b) {
    if (a.score.aggregate != b.score.aggregate) return a.score.aggregate > b.score.aggregate;
    return a.fact < b.fact;
  });
  if (cfg.top_k && out.size() > *cfg.top_k)
    out.erase(out.begin() + static_cast<std::ptrdiff_t>(*cfg.top_k), out.end());
  return out;
}

}  // namespace geofind
