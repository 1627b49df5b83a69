#include "geofind/geometry.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <utility>

namespace geofind {

namespace {

using Segment = std::pair<PointId, PointId>;

Segment sorted_segment(const PointId& a, const PointId& b) {
  return a <= b ? Segment{a, b} : Segment{b, a};
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Segment positions (pairs of argument indices) of the two-segment and
// four-segment predicates.
constexpr std::array<std::array<int, 4>, 4> kAngleArrangements = {{
    {0, 1, 2, 3},  // identity
    {2, 3, 0, 1},  // swap the two angles
    {1, 0, 3, 2},  // reverse both angles
    {3, 2, 1, 0},  // both
}};

std::vector<std::vector<int>> all_permutations(int n) {
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  std::vector<std::vector<int>> out;
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

// Group generated by per-segment flips and the given segment arrangements.
std::vector<std::vector<int>> segment_group(std::span<const std::vector<int>> arrangements,
                                            int segments) {
  std::vector<std::vector<int>> out;
  for (const auto& arrangement : arrangements) {
    for (int flips = 0; flips < (1 << segments); ++flips) {
      std::vector<int> perm;
      for (int s = 0; s < segments; ++s) {
        int src = arrangement[s];
        bool flip = (flips >> s) & 1;
        perm.push_back(2 * src + (flip ? 1 : 0));
        perm.push_back(2 * src + (flip ? 0 : 1));
      }
      out.push_back(std::move(perm));
    }
  }
  return out;
}

std::array<std::vector<std::vector<int>>, kAllPredicates.size()> build_groups() {
  std::array<std::vector<std::vector<int>>, kAllPredicates.size()> groups;
  const std::vector<std::vector<int>> two_segments = {{0, 1}, {1, 0}};
  std::vector<std::vector<int>> four_segments;
  for (const auto& a : kAngleArrangements) four_segments.emplace_back(a.begin(), a.end());

  groups[static_cast<int>(Predicate::Coll)] = all_permutations(3);
  groups[static_cast<int>(Predicate::Cyclic)] = all_permutations(4);
  groups[static_cast<int>(Predicate::Midp)] = {{0, 1, 2}, {0, 2, 1}};
  for (auto p : {Predicate::Para, Predicate::Perp, Predicate::Cong})
    groups[static_cast<int>(p)] = segment_group(two_segments, 2);
  groups[static_cast<int>(Predicate::EqAngle)] = segment_group(four_segments, 4);
  return groups;
}

}  // namespace

bool is_identifier(std::string_view text) {
  if (text.empty() || !std::isalpha(static_cast<unsigned char>(text.front()))) return false;
  return std::all_of(text.begin(), text.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

PointId::PointId(std::string name) : name_(std::move(name)) {
  if (!is_identifier(name_))
    throw std::invalid_argument("invalid point name '" + name_ + "'");
}

std::size_t arity(Predicate p) {
  switch (p) {
    case Predicate::Coll:
    case Predicate::Midp:
      return 3;
    case Predicate::Para:
    case Predicate::Perp:
    case Predicate::Cong:
    case Predicate::Cyclic:
      return 4;
    case Predicate::EqAngle:
      return 8;
  }
  return 0;
}

std::string_view predicate_name(Predicate p) {
  switch (p) {
    case Predicate::Coll: return "coll";
    case Predicate::Cong: return "cong";
    case Predicate::Cyclic: return "cyclic";
    case Predicate::EqAngle: return "eqangle";
    case Predicate::Midp: return "midp";
    case Predicate::Para: return "para";
    case Predicate::Perp: return "perp";
  }
  return "?";
}

bool is_predicate_name(std::string_view name) {
  return std::any_of(kAllPredicates.begin(), kAllPredicates.end(),
                     [&](Predicate p) { return predicate_name(p) == name; });
}

Predicate predicate_from_name(std::string_view name) {
  for (Predicate p : kAllPredicates)
    if (predicate_name(p) == name) return p;
  throw std::invalid_argument("unknown predicate '" + std::string(name) + "'");
}

std::strong_ordering operator<=>(const Fact& a, const Fact& b) {
  if (auto c = a.predicate_ <=> b.predicate_; c != 0) return c;
  return std::lexicographical_compare_three_way(a.args_.begin(), a.args_.end(), b.args_.begin(),
                                                b.args_.end());
}

Fact canonicalize(const RawFact& raw) {
  if (raw.args.size() != arity(raw.predicate)) {
    throw MalformedFact(std::string(predicate_name(raw.predicate)) + " expects " +
                        std::to_string(arity(raw.predicate)) + " arguments, got " +
                        std::to_string(raw.args.size()));
  }
  std::vector<PointId> args = raw.args;
  switch (raw.predicate) {
    case Predicate::Coll:
    case Predicate::Cyclic:
      std::sort(args.begin(), args.end());
      break;
    case Predicate::Midp:
      if (args[2] < args[1]) std::swap(args[1], args[2]);
      break;
    case Predicate::Para:
    case Predicate::Perp:
    case Predicate::Cong: {
      Segment s1 = sorted_segment(args[0], args[1]);
      Segment s2 = sorted_segment(args[2], args[3]);
      if (s2 < s1) std::swap(s1, s2);
      args = {s1.first, s1.second, s2.first, s2.second};
      break;
    }
    case Predicate::EqAngle: {
      std::vector<PointId> best;
      for (const auto& arrangement : kAngleArrangements) {
        std::vector<PointId> candidate;
        candidate.reserve(8);
        for (int s : arrangement) {
          Segment seg = sorted_segment(raw.args[2 * s], raw.args[2 * s + 1]);
          candidate.push_back(seg.first);
          candidate.push_back(seg.second);
        }
        if (best.empty() || candidate < best) best = std::move(candidate);
      }
      args = std::move(best);
      break;
    }
  }
  return Fact(raw.predicate, std::move(args));
}

Fact make_fact(Predicate p, std::initializer_list<std::string_view> names) {
  RawFact raw{p, {}};
  for (auto n : names) raw.args.emplace_back(std::string(n));
  return canonicalize(raw);
}

namespace {
std::string format_atom(Predicate p, std::span<const PointId> args) {
  std::string out(predicate_name(p));
  out += '(';
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) out += ',';
    out += args[i].name();
  }
  out += ')';
  return out;
}
}  // namespace

std::string to_string(const Fact& f) { return format_atom(f.predicate(), f.args()); }
std::string to_string(const RawFact& f) { return format_atom(f.predicate, f.args); }

RawFact parse_raw_fact(std::string_view text) {
  text = trim(text);
  auto open = text.find('(');
  if (open == std::string_view::npos || text.back() != ')')
    throw MalformedFact("expected pred(P1,...,Pn), got '" + std::string(text) + "'");
  std::string_view name = trim(text.substr(0, open));
  if (!is_predicate_name(name))
    throw MalformedFact("unknown predicate '" + std::string(name) + "'");
  RawFact raw{predicate_from_name(name), {}};
  std::string_view body = text.substr(open + 1, text.size() - open - 2);
  while (true) {
    auto comma = body.find(',');
    std::string_view item = trim(body.substr(0, comma));
    if (!is_identifier(item))
      throw MalformedFact("invalid point name '" + std::string(item) + "' in '" +
                          std::string(text) + "'");
    raw.args.emplace_back(std::string(item));
    if (comma == std::string_view::npos) break;
    body.remove_prefix(comma + 1);
  }
  return raw;
}

Fact parse_fact(std::string_view text) { return canonicalize(parse_raw_fact(text)); }

Triviality classify(const Fact& f) {
  auto a = f.args();
  switch (f.predicate()) {
    case Predicate::Coll:
      return (a[0] == a[1] || a[1] == a[2]) ? Triviality::Tautology : Triviality::None;
    case Predicate::Cyclic:
      for (std::size_t i = 0; i + 1 < a.size(); ++i)
        if (a[i] == a[i + 1]) return Triviality::Degenerate;
      return Triviality::None;
    case Predicate::Midp:
      if (a[1] == a[2]) return a[0] == a[1] ? Triviality::Tautology : Triviality::Degenerate;
      if (a[0] == a[1] || a[0] == a[2]) return Triviality::Degenerate;
      return Triviality::None;
    case Predicate::Cong: {
      bool zero1 = a[0] == a[1];
      bool zero2 = a[2] == a[3];
      if (zero1 && zero2) return Triviality::Tautology;
      if (zero1 || zero2) return Triviality::Degenerate;
      return (a[0] == a[2] && a[1] == a[3]) ? Triviality::Tautology : Triviality::None;
    }
    case Predicate::Para:
    case Predicate::Perp: {
      if (a[0] == a[1] || a[2] == a[3]) return Triviality::Degenerate;
      bool same = a[0] == a[2] && a[1] == a[3];
      if (!same) return Triviality::None;
      // A line is never perpendicular to itself.
      return f.predicate() == Predicate::Para ? Triviality::Tautology : Triviality::Degenerate;
    }
    case Predicate::EqAngle: {
      for (int s = 0; s < 4; ++s)
        if (a[2 * s] == a[2 * s + 1]) return Triviality::Degenerate;
      auto segment = [&](int s) { return Segment{a[2 * s], a[2 * s + 1]}; };
      if (segment(0) == segment(2) && segment(1) == segment(3)) return Triviality::Tautology;
      if (segment(0) == segment(1) && segment(2) == segment(3)) return Triviality::Tautology;
      return Triviality::None;
    }
  }
  return Triviality::None;
}

FactSymbols fact_symbols(const Fact& f) {
  FactSymbols out;
  out.multiset_size = 1 + f.args().size();
  out.distinct.insert(std::string(predicate_name(f.predicate())));
  for (const auto& p : f.args()) out.distinct.insert(p.name());
  return out;
}

std::set<PointId> fact_points(const Fact& f) {
  return {f.args().begin(), f.args().end()};
}

std::span<const std::vector<int>> symmetry_group(Predicate p) {
  static const auto groups = build_groups();
  return groups[static_cast<int>(p)];
}

}  // namespace geofind

std::size_t std::hash<geofind::Fact>::operator()(const geofind::Fact& f) const noexcept {
  std::size_t h = static_cast<std::size_t>(f.predicate()) * 0x9e3779b97f4a7c15ULL;
  for (const auto& p : f.args())
    h ^= std::hash<geofind::PointId>{}(p) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}
