#include "isoextend/commands.hpp"

#include <iomanip>
#include <iostream>

#include "isoextend/errors.hpp"
#include "isoextend/io.hpp"
#include "isoextend/sweep.hpp"

namespace isoextend {

namespace {

void emit(const std::string& out, const std::string& suffix, const Json& doc) {
  if (out.empty()) {
    std::cout << doc.dump(2) << "\n";
  } else {
    write_json(out + suffix, doc);
  }
}

int exit_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::Parse:
    case ErrorKind::Distinctness:
      return kExitParse;
    case ErrorKind::Correspondence:
      return kExitCorrespondence;
    case ErrorKind::DimensionConstraint:
      return kExitDimension;
    default:
      return is_budget_kind(e.kind()) ? kExitBudget : kExitFailure;
  }
}

PointConfig load_points(const std::string& path) { return points_from_json(read_json(path)); }

}  // namespace

int cmd_align(const std::string& inputY, const std::string& inputZ, bool forceProper, const std::string& out,
              std::ostream& log) {
  try {
    const PointConfig y = load_points(inputY);
    const PointConfig z = match_labels(y, load_points(inputZ));
    const AlignmentResult a = procrustes_align(y, z, forceProper);
    const DistortionReport d = pairwise_distortion(y, z);
    emit(out, "", alignment_report(a, d));
    log << "align: delta " << d.delta << ", max residual " << a.maxResidual << "\n";
    return kExitOk;
  } catch (const Error& e) {
    log << "align: " << e.what() << "\n";
    return exit_for(e);
  }
}

int cmd_extend(const std::string& inputY, const std::string& inputZ, double epsilon, const std::string& out,
               const ExtendOptions& options, std::ostream& log) {
  std::optional<PointConfig> y;
  try {
    y = load_points(inputY);
    const PointConfig z = match_labels(*y, load_points(inputZ));
    const ExtensionResult r = extend_with_pretranslation(*y, z, epsilon, options);
    emit(out, ".map.json", map_to_json(r.map));
    emit(out, ".certification.json", certification_to_json(*r.certification));
    Json trace{{"params", params_to_json(r.params)},
               {"rounds", r.rounds},
               {"certifiedEpsilon", number(r.certifiedEpsilon)},
               {"supportRadius", number(r.supportRadius)},
               {"supportCenter", vec_to_json((*y)[0])}};
    trace["pretranslation"] = r.pretranslation ? vec_to_json(*r.pretranslation) : Json(nullptr);
    trace["recursion"] = trace_to_json(r.trace);
    emit(out, ".trace.json", trace);
    log << "extend: certified epsilon " << r.certifiedEpsilon << " <= " << epsilon << ", support radius "
        << r.supportRadius << "\n";
    return kExitOk;
  } catch (const Error& e) {
    log << "extend: " << e.what() << "\n";
    const int code = exit_for(e);
    if (code == kExitDimension) {
      log << "extend: no extension is possible in general for k > D; `isoextend counterexample` builds an "
             "instance with an orientation obstruction\n";
    }
    if (code == kExitBudget && y) {
      try {
        const auto p = derive_params(epsilon, y->dimension(), std::min<std::size_t>(y->size(), y->dimension()));
        log << std::setprecision(17) << "deltaMax " << p.deltaMax << "\n";
      } catch (const Error&) {
        log << "deltaMax unavailable for epsilon " << epsilon << "\n";
      }
    }
    return code;
  }
}

int cmd_certify(const std::string& mapPath, const std::string& inputY, const std::string& inputZ, double epsilon,
                std::size_t pairs, std::size_t jacobians, std::uint64_t seed, const std::string& out,
                std::ostream& log) {
  try {
    const SmoothMap map = map_from_json(read_json(mapPath));
    Vec center = Vec::Zero(map.dimension());
    CertifyOptions options;
    std::optional<PointConfig> y;
    if (!inputY.empty()) {
      y = load_points(inputY);
      if (y->dimension() != map.dimension()) throw Error(ErrorKind::Correspondence, "point and map dimensions differ");
      center = (*y)[0];
      if (!inputZ.empty()) {
        const PointConfig z = match_labels(*y, load_points(inputZ));
        options.interpolation = std::make_pair(y->points(), z.points());
      }
    }
    double radius = map.support_radius(center);
    if (!(radius > 0.0)) radius = y ? std::max(diam(*y), 1.0) : 1.0;
    Ball region{center, radius};
    if (std::isfinite(radius)) {
      options.support = region;
    } else {
      region.radius = y ? std::max(diam(*y), 1.0) : 1.0;
      options.support = Ball{center, std::numeric_limits<double>::infinity()};
    }
    const CertificationReport r = certify(map, region, epsilon, pairs, jacobians, seed, options);
    emit(out, "", certification_to_json(r));
    log << "certify: " << (r.pass ? "pass" : "fail") << ", certified epsilon " << r.certifiedEpsilon << "\n";
    return r.pass ? kExitOk : kExitBudget;
  } catch (const Error& e) {
    log << "certify: " << e.what() << "\n";
    return exit_for(e);
  }
}

int cmd_sweep(int k, int D, const std::vector<double>& epsilons, int trials, std::uint64_t seed,
              const std::string& out, std::ostream& log) {
  try {
    if (trials < 10) throw Error(ErrorKind::Precondition, "sweep needs at least 10 trials");
    SweepConfig config;
    config.k = k;
    config.D = D;
    config.epsilons = epsilons;
    config.trials = trials;
    config.seed = seed;
    const SweepResult r = run_sweep(config);
    if (out.empty()) {
      std::cout << sweep_to_json(r).dump(2) << "\n";
    } else {
      write_json(out + ".json", sweep_to_json(r));
      write_text(out + ".tsv", sweep_to_tsv(r));
    }
    for (const auto& f : r.failures) log << "sweep: epsilon " << f.epsilonInput << " seed " << f.seed << ": " << f.message << "\n";
    if (r.fit) {
      log << "sweep: c2 " << r.fit->c2 << " [" << r.fit->c2Low << ", " << r.fit->c2High << "], c1 " << r.fit->c1
          << ", stress bound " << (r.stressBoundHolds ? "holds" : "VIOLATED") << "\n";
    }
    return kExitOk;
  } catch (const Error& e) {
    log << "sweep: " << e.what() << "\n";
    return exit_for(e);
  }
}

int cmd_counterexample(int D, double delta, const std::string& out, std::ostream& log) {
  try {
    const Counterexample ce = build_counterexample(D, delta);
    const ObstructionReport obstruction = orientation_obstruction(ce.y, ce.z);
    Json report{{"dimension", D},
                {"delta", number(delta)},
                {"largeCenter", vec_to_json(ce.largeCenter)},
                {"placement",
                 "small simplex on the delta-sphere about the origin with vertex D+1 at delta*e1; large simplex on "
                 "the unit sphere about (1+delta)*e1 sharing that vertex; z swaps labels 1 and 2"},
                {"measuredDelta", number(ce.measuredDelta)},
                {"distortionConstant", number(ce.measuredDelta / delta)},
                {"obstruction", obstruction_to_json(obstruction, ce.y)}};
    bool ok = obstruction.conflict;
    if (D == 2) {
      const auto [small, large] = counterexample_degrees(ce);
      report["degrees"] = Json::array({small, large});
      ok = ok && small == -1 && large == 1;
      log << "counterexample: winding degrees (" << small << ", " << large << ")\n";
    }
    if (out.empty()) {
      std::cout << points_to_json(ce.y).dump(2) << "\n" << points_to_json(ce.z).dump(2) << "\n";
    } else {
      write_json(out + ".y.json", points_to_json(ce.y));
      write_json(out + ".z.json", points_to_json(ce.z));
    }
    emit(out, ".report.json", report);
    log << "counterexample: " << (obstruction.conflict ? "CONFLICT" : "CONSISTENT") << " (" << obstruction.preserving
        << " preserving, " << obstruction.reversing << " reversing), measured delta " << ce.measuredDelta << "\n";
    return ok ? kExitOk : kExitFailure;
  } catch (const Error& e) {
    log << "counterexample: " << e.what() << "\n";
    return exit_for(e);
  }
}

}  // namespace isoextend
