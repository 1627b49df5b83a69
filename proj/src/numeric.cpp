#include "geofind/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace geofind {

namespace {

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  // 53 random mantissa bits; independent of the standard library's
  // distribution implementations.
  double unit() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

 private:
  std::mt19937_64 rng_;
};

double sine_between(Vec2 a, Vec2 b) {
  double denom = std::sqrt(norm2(a) * norm2(b));
  return denom == 0 ? 0 : std::abs(cross(a, b)) / denom;
}

std::optional<Vec2> circumcenter(Vec2 a, Vec2 b, Vec2 c) {
  Vec2 ab = b - a;
  Vec2 ac = c - a;
  double d = 2 * cross(ab, ac);
  if (d == 0) return std::nullopt;
  double ux = (ac.y * norm2(ab) - ab.y * norm2(ac)) / d;
  double uy = (ab.x * norm2(ac) - ac.x * norm2(ab)) / d;
  return a + Vec2{ux, uy};
}

// One sampling attempt; nullopt when the figure is degenerate.
std::optional<std::map<PointId, Vec2>> sample_once(const Construction& c, Sampler& rng) {
  std::map<PointId, Vec2> pts;
  for (const auto& step : c.steps()) {
    const auto& a = step.args;
    auto at = [&](std::size_t i) { return pts.at(a[i]); };
    Vec2 p;
    switch (step.kind) {
      case StepKind::FreePoint: {
        double x = rng.uniform(-1, 1);
        double y = rng.uniform(-1, 1);
        p = {x, y};
        break;
      }
      case StepKind::OnLine: {
        double t = rng.uniform(-1, 2);
        p = at(1) + t * (at(2) - at(1));
        break;
      }
      case StepKind::OnCircle: {
        double theta = rng.uniform(0, 2 * std::numbers::pi);
        double r = std::sqrt(norm2(at(2) - at(1)));
        p = at(1) + r * Vec2{std::cos(theta), std::sin(theta)};
        break;
      }
      case StepKind::Midpoint:
        p = 0.5 * (at(1) + at(2));
        break;
      case StepKind::Intersect: {
        Vec2 d1 = at(2) - at(1);
        Vec2 d2 = at(4) - at(3);
        if (sine_between(d1, d2) < kMinIntersectionSine) return std::nullopt;
        double t = cross(at(3) - at(1), d2) / cross(d1, d2);
        p = at(1) + t * d1;
        break;
      }
      case StepKind::Foot: {
        Vec2 d = at(3) - at(2);
        double len2 = norm2(d);
        if (len2 == 0) return std::nullopt;
        p = at(2) + (dot(at(1) - at(2), d) / len2) * d;
        break;
      }
      case StepKind::Circumcenter: {
        if (sine_between(at(2) - at(1), at(3) - at(1)) < kMinIntersectionSine) return std::nullopt;
        auto o = circumcenter(at(1), at(2), at(3));
        if (!o) return std::nullopt;
        p = *o;
        break;
      }
    }
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) return std::nullopt;
    pts.emplace(step.defined(), p);
  }
  return pts;
}

double squared_diameter(const std::map<PointId, Vec2>& pts) {
  double best = 0;
  for (auto i = pts.begin(); i != pts.end(); ++i)
    for (auto j = std::next(i); j != pts.end(); ++j)
      best = std::max(best, norm2(i->second - j->second));
  return best;
}

bool well_separated(const std::map<PointId, Vec2>& pts, double scale) {
  const double floor2 = kMinSeparation * kMinSeparation * scale;
  for (auto i = pts.begin(); i != pts.end(); ++i)
    for (auto j = std::next(i); j != pts.end(); ++j)
      if (norm2(i->second - j->second) < floor2) return false;
  return true;
}

bool collinear(Vec2 a, Vec2 b, Vec2 c, double tol, double scale) {
  double cr = cross(b - a, c - a);
  return cr * cr <= tol * scale * scale;
}

bool equal_lengths(double d1, double d2, double tol, double scale) {
  return std::abs(d1 - d2) <= tol * scale;
}

bool concyclic(std::array<Vec2, 4> p, double tol, double scale) {
  // Circumcircle of the best-conditioned triple, tested against the fourth.
  int skip = 0;
  double best = -1;
  for (int k = 0; k < 4; ++k) {
    std::array<Vec2, 3> t;
    for (int i = 0, j = 0; i < 4; ++i)
      if (i != k) t[j++] = p[i];
    double area = std::abs(cross(t[1] - t[0], t[2] - t[0]));
    if (area > best) {
      best = area;
      skip = k;
    }
  }
  std::array<Vec2, 3> t;
  for (int i = 0, j = 0; i < 4; ++i)
    if (i != skip) t[j++] = p[i];
  auto center = circumcenter(t[0], t[1], t[2]);
  if (!center) return false;
  double r2 = norm2(t[0] - *center);
  return equal_lengths(norm2(p[skip] - *center), r2, tol, scale);
}

// |sin| of the difference of the directed angles (u1 -> v1) and (u2 -> v2),
// which is zero exactly when the angles agree modulo pi.
double angle_gap(Vec2 u1, Vec2 v1, Vec2 u2, Vec2 v2) {
  double c1 = dot(u1, v1), s1 = cross(u1, v1);
  double c2 = dot(u2, v2), s2 = cross(u2, v2);
  double denom = std::sqrt(norm2(u1) * norm2(v1) * norm2(u2) * norm2(v2));
  if (denom == 0) return 1;
  return std::abs(s1 * c2 - c1 * s2) / denom;
}

}  // namespace

Vec2 CoordinateModel::at(const PointId& p) const {
  auto it = coords.find(p);
  if (it == coords.end()) throw std::out_of_range("no coordinates for point " + p.name());
  return it->second;
}

std::optional<CoordinateModel> instantiate(const Construction& c, std::uint64_t seed) {
  Sampler rng(seed);
  for (int attempt = 0; attempt < kMaxSampleAttempts; ++attempt) {
    auto pts = sample_once(c, rng);
    if (!pts) continue;
    double scale = squared_diameter(*pts);
    if (scale == 0 || !std::isfinite(scale) || !well_separated(*pts, scale)) continue;
    return CoordinateModel{std::move(*pts), seed, scale};
  }
  return std::nullopt;
}

std::uint64_t model_seed(std::uint64_t master_seed, int index) {
  // splitmix64 finalizer
  std::uint64_t z = master_seed + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::vector<CoordinateModel> sample_models(const Construction& c, int n,
                                           std::uint64_t master_seed) {
  std::vector<CoordinateModel> out;
  for (int i = 0; i < n; ++i) {
    auto m = instantiate(c, model_seed(master_seed, i));
    if (!m) break;
    out.push_back(std::move(*m));
  }
  return out;
}

bool eval_fact(const CoordinateModel& m, const Fact& f, double tol) {
  const double s = m.scale;
  std::vector<Vec2> p;
  p.reserve(f.args().size());
  for (const auto& id : f.args()) p.push_back(m.at(id));

  switch (f.predicate()) {
    case Predicate::Coll:
      return collinear(p[0], p[1], p[2], tol, s);
    case Predicate::Para: {
      double cr = cross(p[1] - p[0], p[3] - p[2]);
      return cr * cr <= tol * s * s;
    }
    case Predicate::Perp: {
      double d = dot(p[1] - p[0], p[3] - p[2]);
      return d * d <= tol * s * s;
    }
    case Predicate::Midp:
      return collinear(p[0], p[1], p[2], tol, s) &&
             equal_lengths(norm2(p[1] - p[0]), norm2(p[2] - p[0]), tol, s);
    case Predicate::Cong:
      return equal_lengths(norm2(p[1] - p[0]), norm2(p[3] - p[2]), tol, s);
    case Predicate::Cyclic:
      return concyclic({p[0], p[1], p[2], p[3]}, tol, s);
    case Predicate::EqAngle:
      return angle_gap(p[1] - p[0], p[3] - p[2], p[5] - p[4], p[7] - p[6]) <= tol;
  }
  return false;
}

bool eval_side(const CoordinateModel& m, const SideCondition& side, double tol) {
  const double s = m.scale;
  std::vector<Vec2> p;
  for (const auto& id : side.args) p.push_back(m.at(id));
  switch (side.kind) {
    case SideKind::Distinct:
      return norm2(p[1] - p[0]) > tol * s;
    case SideKind::NonCollinear:
      return !collinear(p[0], p[1], p[2], tol, s);
    case SideKind::DistinctLines:
      return !(collinear(p[0], p[1], p[2], tol, s) && collinear(p[0], p[1], p[3], tol, s));
  }
  return false;
}

std::string to_string(const Verdict& v) {
  switch (v.kind) {
    case Verdict::Kind::Holds: return "holds";
    case Verdict::Kind::Fails: return "fails(seed=" + std::to_string(*v.seed) + ")";
    case Verdict::Kind::Degenerate: return "degenerate";
  }
  return "?";
}

Verdict verify(const Fact& f, std::span<const CoordinateModel> models, std::size_t required,
               double tol) {
  if (models.size() < required) return Verdict::degenerate();
  for (std::size_t i = 0; i < required; ++i)
    if (!eval_fact(models[i], f, tol)) return Verdict::fails(models[i].seed);
  return Verdict::holds();
}

Verdict verify(const Fact& f, const Construction& c, int n_models, std::uint64_t master_seed,
               double tol) {
  if (n_models < 1) throw std::invalid_argument("verify needs at least one model");
  auto models = sample_models(c, n_models, master_seed);
  return verify(f, models, static_cast<std::size_t>(n_models), tol);
}

}  // namespace geofind
