#include "isoextend/errors.hpp"

namespace isoextend {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::RankDeficiency: return "rank-deficiency";
    case ErrorKind::ImproperRotation: return "improper-rotation";
    case ErrorKind::NoFixingReflection: return "no-fixing-reflection";
    case ErrorKind::Correspondence: return "correspondence";
    case ErrorKind::Distinctness: return "distinctness";
    case ErrorKind::Degenerate: return "degenerate";
    case ErrorKind::Feasibility: return "feasibility";
    case ErrorKind::Budget: return "budget";
    case ErrorKind::Properness: return "properness";
    case ErrorKind::Disjointness: return "disjointness";
    case ErrorKind::Support: return "support";
    case ErrorKind::GlueConsistency: return "glue-consistency";
    case ErrorKind::NumericalInversion: return "numerical-inversion";
    case ErrorKind::Precondition: return "precondition";
    case ErrorKind::AlignmentTooCoarse: return "alignment-too-coarse";
    case ErrorKind::DimensionConstraint: return "dimension-constraint";
    case ErrorKind::Resolution: return "resolution";
    case ErrorKind::InternalInvariant: return "internal-invariant";
    case ErrorKind::Parse: return "parse";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string& message, double value)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message),
      kind_(kind),
      value_(value) {}

bool is_budget_kind(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Feasibility:
    case ErrorKind::Budget:
    case ErrorKind::Precondition:
    case ErrorKind::AlignmentTooCoarse:
    case ErrorKind::Disjointness:
    case ErrorKind::Support:
    case ErrorKind::GlueConsistency:
      return true;
    default:
      return false;
  }
}

}  // namespace isoextend
