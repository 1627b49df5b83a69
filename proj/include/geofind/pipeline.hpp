// Generation/filtering loop and report output.
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "geofind/construction.hpp"
#include "geofind/engine.hpp"
#include "geofind/metrics.hpp"
#include "geofind/numeric.hpp"
#include "geofind/rules.hpp"

namespace geofind {

enum class Mode {
  /// Saturate to the fixpoint, then filter and rank.
  Fixpoint,
  /// Filter and rank every round; only interesting facts re-enter the fact list.
  Filtered,
};

std::string_view to_string(Mode m);

struct PipelineConfig {
  Mode mode = Mode::Fixpoint;
  Budget budget;
  int seeds = kDefaultModels;
  double tol = kDefaultTolerance;
  std::uint64_t master_seed = kDefaultMasterSeed;
  bool strict_sides = false;
  MetricConfig metrics;
};

/// An unconditional derived fact failed numeric verification: a rule is
/// unsound or the engine is wrong.
class SoundnessViolation : public std::runtime_error {
 public:
  SoundnessViolation(Fact fact, std::string rule, std::uint64_t seed);

  const Fact& fact() const { return fact_; }
  const std::string& rule() const { return rule_; }
  std::uint64_t seed() const { return seed_; }
  Verdict verdict() const { return Verdict::fails(seed_); }

 private:
  Fact fact_;
  std::string rule_;
  std::uint64_t seed_;
};

/// Fewer models than requested could be sampled.
class DegenerateConstruction : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct FactRecord {
  Fact fact;
  DerivationNode derivation;
  Verdict verdict;
  ScoreCard score;
  bool interesting = false;
};

enum class DiscardReason { EmpiricallyFalse, ConditionalFailed, Uninteresting };
std::string_view to_string(DiscardReason r);

struct DiscardRecord {
  Fact fact;
  DiscardReason reason;
  std::string rule;
  int round = 0;
  /// Seed of the model that refuted the fact or its side condition.
  std::optional<std::uint64_t> seed;
};

struct DiscardCounts {
  std::size_t tautologies = 0;
  std::size_t empirically_false = 0;
  std::size_t conditional_failed = 0;
  std::size_t uninteresting = 0;
};

struct Report {
  std::vector<std::string> construction_steps;
  std::string construction_digest;
  std::vector<Fact> hypotheses;
  std::vector<std::string> rule_names;
  std::string rules_digest;
  PipelineConfig config;

  int rounds = 0;
  StopReason stop_reason = StopReason::Fixpoint;
  /// Surviving derived facts ordered by (round, canonical form).
  std::vector<FactRecord> facts;
  std::vector<RankedFact> ranking;
  DiscardCounts discarded;
  std::vector<DiscardRecord> discards;
};

/// 64-bit FNV-1a, as 16 hex digits.
std::string digest(std::string_view text);

/// Throws DegenerateConstruction or SoundnessViolation.
Report run_pipeline(const Construction& construction, const std::vector<Rule>& rules,
                    const PipelineConfig& cfg);

enum class Format { Json, Text };

std::string emit_report(const Report& report, Format format);

/// `fact ⇐ rule[premise, ...]`
std::string derivation_line(const Fact& fact, const DerivationNode& node);

/// Saturation-only output (no numeric filtering or ranking).
std::string emit_saturation(const SaturationResult& result, const FactSet& hypotheses,
                            Format format);

}  // namespace geofind
