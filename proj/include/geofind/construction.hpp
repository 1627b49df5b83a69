// Construction scripts: parsing and the hypothesis facts they imply.
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "geofind/geometry.hpp"

namespace geofind {

/// Syntax or validity error in an input document, with a 1-based position.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message);

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

enum class StepKind { FreePoint, OnLine, OnCircle, Midpoint, Intersect, Foot, Circumcenter };

std::string_view step_keyword(StepKind kind);

/// One construction statement. `args[0]` is the point being defined; the
/// remaining arguments refer to earlier points.
///
///   FreePoint    P
///   OnLine       P A B        P on line AB
///   OnCircle     P O A        P on the circle centred at O through A
///   Midpoint     M A B
///   Intersect    P A B C D    P = AB ∩ CD
///   Foot         F P A B      F = foot of the perpendicular from P to AB
///   Circumcenter O A B C
struct ConstructionStep {
  StepKind kind;
  std::vector<PointId> args;

  const PointId& defined() const { return args.front(); }
  friend bool operator==(const ConstructionStep&, const ConstructionStep&) = default;
};

std::string to_string(const ConstructionStep& step);

class Construction {
 public:
  /// Validates well-foundedness, freshness, step arity and the two-free-point
  /// minimum. Throws std::invalid_argument.
  explicit Construction(std::vector<ConstructionStep> steps);

  const std::vector<ConstructionStep>& steps() const { return steps_; }
  std::vector<PointId> points() const;
  std::size_t free_point_count() const;

 private:
  std::vector<ConstructionStep> steps_;
};

/// Parses a `.gc` script. Throws ParseError.
Construction parse_construction(std::string_view text);

/// The hypothesis set implied by the construction steps.
FactSet initial_facts(const Construction& c);

}  // namespace geofind
