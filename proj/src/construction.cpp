#include "geofind/construction.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace geofind {

namespace {

struct StepShape {
  StepKind kind;
  std::string_view keyword;
  std::size_t points;  // including the defined point
};

constexpr std::array<StepShape, 7> kShapes = {{
    {StepKind::FreePoint, "point", 1},
    {StepKind::OnLine, "on_line", 3},
    {StepKind::OnCircle, "on_circle", 3},
    {StepKind::Midpoint, "midpoint", 3},
    {StepKind::Intersect, "intersect", 5},
    {StepKind::Foot, "foot", 4},
    {StepKind::Circumcenter, "circumcenter", 4},
}};

const StepShape& shape_of(StepKind kind) {
  return *std::find_if(kShapes.begin(), kShapes.end(),
                       [&](const StepShape& s) { return s.kind == kind; });
}

struct Token {
  std::string_view text;
  std::size_t column;  // 1-based
};

std::vector<Token> tokenize_line(std::string_view line) {
  if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) out.push_back({line.substr(start, i - start), start + 1});
  }
  return out;
}

// Returns an error message, or empty when the step is well formed against
// the already-defined points.
std::string check_step(const ConstructionStep& step, const std::set<PointId>& defined,
                       std::size_t* bad_index) {
  const auto& shape = shape_of(step.kind);
  if (step.args.size() != shape.points) {
    *bad_index = 0;
    return std::string(shape.keyword) + " expects " + std::to_string(shape.points) +
           " points, got " + std::to_string(step.args.size());
  }
  if (defined.count(step.defined())) {
    *bad_index = 0;
    return "point " + step.defined().name() + " is already defined";
  }
  for (std::size_t i = 1; i < step.args.size(); ++i) {
    if (!defined.count(step.args[i])) {
      *bad_index = i;
      return step.args[i].name() + " undefined";
    }
    for (std::size_t j = 1; j < i; ++j) {
      if (step.args[j] == step.args[i]) {
        *bad_index = i;
        return "repeated point " + step.args[i].name() + " in " + std::string(shape.keyword);
      }
    }
  }
  return {};
}

}  // namespace

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) +
                         ": " + message),
      line_(line),
      column_(column) {}

std::string_view step_keyword(StepKind kind) { return shape_of(kind).keyword; }

std::string to_string(const ConstructionStep& step) {
  std::string out(step_keyword(step.kind));
  for (const auto& p : step.args) out += " " + p.name();
  return out;
}

Construction::Construction(std::vector<ConstructionStep> steps) : steps_(std::move(steps)) {
  std::set<PointId> defined;
  for (const auto& step : steps_) {
    std::size_t bad = 0;
    if (auto err = check_step(step, defined, &bad); !err.empty())
      throw std::invalid_argument(to_string(step) + ": " + err);
    defined.insert(step.defined());
  }
  if (free_point_count() < 2)
    throw std::invalid_argument("a construction needs at least two free points");
}

std::vector<PointId> Construction::points() const {
  std::vector<PointId> out;
  out.reserve(steps_.size());
  for (const auto& s : steps_) out.push_back(s.defined());
  return out;
}

std::size_t Construction::free_point_count() const {
  return std::count_if(steps_.begin(), steps_.end(),
                       [](const ConstructionStep& s) { return s.kind == StepKind::FreePoint; });
}

Construction parse_construction(std::string_view text) {
  std::vector<ConstructionStep> steps;
  std::set<PointId> defined;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    auto tokens = tokenize_line(line);
    if (tokens.empty()) continue;

    const Token& head = tokens.front();
    auto shape = std::find_if(kShapes.begin(), kShapes.end(),
                              [&](const StepShape& s) { return s.keyword == head.text; });
    if (shape == kShapes.end())
      throw ParseError(line_no, head.column, "unknown statement '" + std::string(head.text) + "'");
    for (std::size_t i = 1; i < tokens.size(); ++i) {
      if (!is_identifier(tokens[i].text))
        throw ParseError(line_no, tokens[i].column,
                         "invalid identifier '" + std::string(tokens[i].text) + "'");
    }

    // `point` declares one free point per identifier.
    std::vector<std::vector<Token>> groups;
    if (shape->kind == StepKind::FreePoint) {
      if (tokens.size() < 2) throw ParseError(line_no, head.column, "point expects at least one name");
      for (std::size_t i = 1; i < tokens.size(); ++i) groups.push_back({tokens[i]});
    } else {
      if (tokens.size() - 1 != shape->points) {
        std::size_t col = tokens.size() - 1 > shape->points ? tokens[shape->points + 1].column
                                                            : head.column;
        throw ParseError(line_no, col,
                         std::string(shape->keyword) + " expects " + std::to_string(shape->points) +
                             " points, got " + std::to_string(tokens.size() - 1));
      }
      groups.emplace_back(tokens.begin() + 1, tokens.end());
    }

    for (const auto& group : groups) {
      ConstructionStep step{shape->kind, {}};
      for (const auto& t : group) step.args.emplace_back(std::string(t.text));
      std::size_t bad = 0;
      if (auto err = check_step(step, defined, &bad); !err.empty())
        throw ParseError(line_no, group[bad].column, err);
      defined.insert(step.defined());
      steps.push_back(std::move(step));
    }
  }
  try {
    return Construction(std::move(steps));
  } catch (const std::invalid_argument& e) {
    throw ParseError(line_no + 1, 1, e.what());
  }
}

FactSet initial_facts(const Construction& c) {
  FactSet out;
  auto add = [&](Predicate p, std::vector<PointId> args) {
    out.emplace(canonicalize(RawFact{p, std::move(args)}), 0);
  };
  for (const auto& step : c.steps()) {
    const auto& a = step.args;
    switch (step.kind) {
      case StepKind::FreePoint:
        break;
      case StepKind::OnLine:
        add(Predicate::Coll, {a[0], a[1], a[2]});
        break;
      case StepKind::OnCircle:
        add(Predicate::Cong, {a[1], a[0], a[1], a[2]});
        break;
      case StepKind::Midpoint:
        add(Predicate::Midp, {a[0], a[1], a[2]});
        add(Predicate::Coll, {a[0], a[1], a[2]});
        add(Predicate::Cong, {a[0], a[1], a[0], a[2]});
        break;
      case StepKind::Intersect:
        add(Predicate::Coll, {a[0], a[1], a[2]});
        add(Predicate::Coll, {a[0], a[3], a[4]});
        break;
      case StepKind::Foot:
        add(Predicate::Coll, {a[0], a[2], a[3]});
        add(Predicate::Perp, {a[1], a[0], a[2], a[3]});
        break;
      case StepKind::Circumcenter:
        add(Predicate::Cong, {a[0], a[1], a[0], a[2]});
        add(Predicate::Cong, {a[0], a[2], a[0], a[3]});
        break;
    }
  }
  return out;
}

}  // namespace geofind
