// Coordinate models of constructions and numeric evaluation of facts.
//
// Tolerances are relative to the squared diameter of the sampled figure, so
// verdicts do not change under similarity transformations.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "geofind/construction.hpp"
#include "geofind/geometry.hpp"
#include "geofind/rules.hpp"

namespace geofind {

inline constexpr double kDefaultTolerance = 1e-8;
inline constexpr int kDefaultModels = 5;
inline constexpr std::uint64_t kDefaultMasterSeed = 1;
inline constexpr int kMaxSampleAttempts = 100;
/// Minimum pairwise distance, relative to the diameter.
inline constexpr double kMinSeparation = 1e-3;
/// Minimum |sin| of the angle between two intersected lines.
inline constexpr double kMinIntersectionSine = 1e-3;

struct Vec2 {
  double x = 0;
  double y = 0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend bool operator==(Vec2, Vec2) = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm2(Vec2 a) { return dot(a, a); }

struct CoordinateModel {
  std::map<PointId, Vec2> coords;
  std::uint64_t seed = 0;
  /// Squared diameter of the point set.
  double scale = 0;

  Vec2 at(const PointId& p) const;
};

/// Samples coordinates for every point. Free points are uniform in
/// [-1,1]^2, semi-free points uniform on their locus, and determined points
/// are computed from their defining step. Resamples up to
/// kMaxSampleAttempts times; nullopt means every attempt was degenerate.
std::optional<CoordinateModel> instantiate(const Construction& c, std::uint64_t seed);

/// Seed of the i-th model drawn from a master seed.
std::uint64_t model_seed(std::uint64_t master_seed, int index);

/// The first `n` models for the master seed. Returns fewer than `n` when a
/// model seed cannot produce a non-degenerate figure.
std::vector<CoordinateModel> sample_models(const Construction& c, int n,
                                           std::uint64_t master_seed = kDefaultMasterSeed);

/// Throws std::out_of_range when a point of `f` has no coordinates.
bool eval_fact(const CoordinateModel& m, const Fact& f, double tol_rel = kDefaultTolerance);
bool eval_side(const CoordinateModel& m, const SideCondition& s, double tol_rel = kDefaultTolerance);

struct Verdict {
  enum class Kind { Holds, Fails, Degenerate };
  Kind kind = Kind::Holds;
  /// Seed of the falsifying model when kind == Fails.
  std::optional<std::uint64_t> seed;

  static Verdict holds() { return {Kind::Holds, std::nullopt}; }
  static Verdict fails(std::uint64_t s) { return {Kind::Fails, s}; }
  static Verdict degenerate() { return {Kind::Degenerate, std::nullopt}; }

  friend bool operator==(const Verdict&, const Verdict&) = default;
};

std::string to_string(const Verdict& v);

/// Holds iff `f` is true in all `n_models` models; fails on the first
/// falsifying model; degenerate when fewer than `n_models` could be sampled.
Verdict verify(const Fact& f, const Construction& c, int n_models = kDefaultModels,
               std::uint64_t master_seed = kDefaultMasterSeed, double tol_rel = kDefaultTolerance);

/// Same, over already sampled models.
Verdict verify(const Fact& f, std::span<const CoordinateModel> models, std::size_t required,
               double tol_rel = kDefaultTolerance);

}  // namespace geofind
