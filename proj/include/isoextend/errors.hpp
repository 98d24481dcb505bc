#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace isoextend {

enum class ErrorKind {
  RankDeficiency,
  ImproperRotation,
  NoFixingReflection,
  Correspondence,
  Distinctness,
  Degenerate,
  Feasibility,
  Budget,
  Properness,
  Disjointness,
  Support,
  GlueConsistency,
  NumericalInversion,
  Precondition,
  AlignmentTooCoarse,
  DimensionConstraint,
  Resolution,
  InternalInvariant,
  Parse,
};

std::string_view to_string(ErrorKind kind);

// All library failures are reported through this type. `value` carries the
// numeric payload the kind implies (numerical rank, required radius ratio,
// admissible bound, max discrepancy); NaN when the kind has none.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message, double value = kNoValue);

  ErrorKind kind() const noexcept { return kind_; }
  double value() const noexcept { return value_; }
  bool has_value() const noexcept { return value_ == value_; }

  static constexpr double kNoValue = __builtin_nan("");

 private:
  ErrorKind kind_;
  double value_;
};

// True for the kinds that signal "the input is outside the budget the
// construction can honor" rather than a bug or malformed input.
bool is_budget_kind(ErrorKind kind);

}  // namespace isoextend
