#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "isoextend/io.hpp"

namespace isoextend {

struct SweepRecord {
  int k = 0;
  int D = 0;
  double epsilonInput = 0.0;
  double residual = 0.0;  // max_i |z_i - Phi0(y_i)| after normalization
  double stress = 0.0;
  std::uint64_t seed = 0;
  PointConfig y;
  PointConfig z;
};

struct SweepFailure {
  double epsilonInput;
  std::uint64_t seed;
  std::string message;
};

// residual ~ c1 * eps^c2 on the per-level medians.
struct SweepFit {
  double c1 = 0.0;
  double c2 = 0.0;
  double c2Low = 0.0;
  double c2High = 0.0;
  std::vector<std::pair<double, double>> medians;  // (epsilon, median residual), all levels
};

struct SweepConfig {
  int k = 3;
  int D = 2;
  std::vector<double> epsilons;
  int trials = 50;
  std::uint64_t seed = 1;
  int bootstrap = 1000;
};

struct SweepResult {
  SweepConfig config;
  std::vector<SweepRecord> records;  // sorted by (epsilon, seed)
  std::vector<SweepFailure> failures;
  std::optional<SweepFit> fit;  // needs two positive epsilon levels
  bool stressBoundHolds = true;  // F <= 4 k^2 eps^2 on every instance
  bool medianMonotone = true;
};

inline constexpr int kMaxRejections = 100;

// Jointly normalized pair whose distances differ by less than eps (or by
// rounding only when eps = 0). Throws Feasibility after kMaxRejections.
std::pair<PointConfig, PointConfig> generate_instance(int k, int D, double epsilon, std::uint64_t seed);

SweepRecord measure_instance(int k, int D, double epsilon, std::uint64_t seed);

SweepResult run_sweep(const SweepConfig& config);

Json sweep_to_json(const SweepResult& result);
std::string sweep_to_tsv(const SweepResult& result);

}  // namespace isoextend
