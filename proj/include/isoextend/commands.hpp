#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "isoextend/extension.hpp"

namespace isoextend {

// Exit codes shared by all commands.
enum ExitCode : int {
  kExitOk = 0,
  kExitParse = 1,
  kExitCorrespondence = 2,
  kExitBudget = 3,
  kExitDimension = 4,
  kExitFailure = 5,
};

// Each command writes its documents (to stdout when `out` is empty) and a
// one-line summary or error to `log`.
int cmd_align(const std::string& inputY, const std::string& inputZ, bool forceProper, const std::string& out,
              std::ostream& log);

// Documents: <out>.map.json, <out>.certification.json, <out>.trace.json.
int cmd_extend(const std::string& inputY, const std::string& inputZ, double epsilon, const std::string& out,
               const ExtendOptions& options, std::ostream& log);

// Certifies a saved map on the ball about the first point of `inputY` (origin
// when empty) reaching the map's support; interpolation is checked when both
// point files are given.
int cmd_certify(const std::string& mapPath, const std::string& inputY, const std::string& inputZ, double epsilon,
                std::size_t pairs, std::size_t jacobians, std::uint64_t seed, const std::string& out,
                std::ostream& log);

// Documents: <out>.json and <out>.tsv.
int cmd_sweep(int k, int D, const std::vector<double>& epsilons, int trials, std::uint64_t seed,
              const std::string& out, std::ostream& log);

// Documents: <out>.y.json and <out>.z.json (point sets) and <out>.report.json
// (placement, measured distortion, orientation signs, D = 2 degrees).
int cmd_counterexample(int D, double delta, const std::string& out, std::ostream& log);

}  // namespace isoextend
