// Interestingness metrics over derived facts and their derivations.
//
// Each metric is the simplest reading of its informal description that can
// be computed from a ground fact and its derivation DAG; docs/metrics.md
// lists the formulas and the alternatives they stand in for.
#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "geofind/engine.hpp"
#include "geofind/geometry.hpp"

namespace geofind {

enum class Metric {
  Obviousness,
  Weight,
  Complexity,
  Surprisingness,
  Intensity,
  Adaptivity,
  Focus,
  Usefulness,
};

inline constexpr std::size_t kMetricCount = 8;
inline constexpr std::array<Metric, kMetricCount> kAllMetrics = {
    Metric::Obviousness, Metric::Weight,     Metric::Complexity, Metric::Surprisingness,
    Metric::Intensity,   Metric::Adaptivity, Metric::Focus,      Metric::Usefulness};

std::string_view metric_name(Metric m);
std::optional<Metric> metric_from_name(std::string_view name);

using MetricValues = std::array<double, kMetricCount>;

enum class Direction { HigherIsInteresting, LowerIsInteresting };

struct MetricConfig {
  MetricValues weights;
  std::array<Direction, kMetricCount> directions;
  double threshold = 0.5;
  std::optional<std::size_t> top_k;

  MetricConfig();

  /// Weights scaled to sum to one (equal weights if they are all zero).
  MetricValues normalized_weights() const;

  /// Reads the JSON config format documented in docs/metrics.md over the
  /// defaults. Throws std::invalid_argument.
  static MetricConfig from_json(std::string_view text);
};

struct ScoreCard {
  MetricValues raw{};
  MetricValues normalized{};
  double aggregate = 0;

  double raw_of(Metric m) const { return raw[static_cast<std::size_t>(m)]; }
  double normalized_of(Metric m) const { return normalized[static_cast<std::size_t>(m)]; }
};

/// Derivation nodes in the ancestor closure of `f`; 0 for hypotheses.
/// Throws std::out_of_range when `f` is neither in `hypotheses` nor in `dag`.
std::size_t obviousness(const Fact& f, const DerivationDag& dag, const FactSet& hypotheses);
std::size_t weight(const Fact& f);
std::size_t complexity(const Fact& f);
double surprisingness(const Fact& f, const FactSet& hypotheses);
double intensity(const Fact& f, const DerivationDag& dag);
double adaptivity(const Fact& f);
double focus(const Fact& f, const DerivationDag& dag);
std::size_t usefulness(const Fact& f, const DerivationDag& dag, const std::set<Fact>& interesting);

/// Scores every fact in `facts`. Min-max normalization uses derived facts
/// only; hypotheses are scored against the same range (clamped) but are
/// never part of the interesting set.
std::map<Fact, ScoreCard> score_all(const FactSet& facts, const DerivationDag& dag,
                                    const FactSet& hypotheses, const MetricConfig& cfg);

struct RankedFact {
  Fact fact;
  ScoreCard score;
};

/// Derived facts with aggregate >= threshold, best first, ties broken by
/// canonical form, truncated to top_k.
std::vector<RankedFact> filter_interesting(const std::map<Fact, ScoreCard>& scores,
                                           const DerivationDag& dag, const MetricConfig& cfg);

}  // namespace geofind
