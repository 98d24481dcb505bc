#include <CLI11.hpp>
#include <iostream>

#include "isoextend/commands.hpp"

using namespace isoextend;

int main(int argc, char** argv) {
  CLI::App app{"Extend almost-isometries of finite point sets to epsilon-distorted diffeomorphisms"};
  app.require_subcommand(1);

  std::string out;
  std::uint64_t seed = 1;
  std::size_t pairs = 2000, jacobians = 2000;
  double epsilon = 0.5, delta = 0.01;
  bool proper = false;
  int trials = 50, k = 3, dim = 2;
  std::vector<double> epsilons;
  std::string a, b, c;

  auto* align = app.add_subcommand("align", "least-squares Euclidean alignment of two labeled point sets");
  align->add_option("y", a, "source point set")->required();
  align->add_option("z", b, "target point set")->required();
  align->add_flag("--proper", proper, "restrict to rotations");
  align->add_option("--out", out, "report path (stdout when omitted)");

  auto* extend = app.add_subcommand("extend", "build and certify an epsilon-distorted extension");
  extend->add_option("y", a, "source point set")->required();
  extend->add_option("z", b, "target point set")->required();
  extend->add_option("--epsilon", epsilon, "distortion budget in (0, 1/2]");
  extend->add_option("--out", out, "output prefix for the map, certification and trace documents");
  extend->add_option("--seed", seed, "certification seed")->envname("ISOEXTEND_SEED");
  extend->add_option("--pairs", pairs, "pair samples (>= 1000)");
  extend->add_option("--jacobians", jacobians, "Jacobian samples (>= 1000)");

  auto* certify = app.add_subcommand("certify", "sample a saved map for distortion, interpolation and support");
  certify->add_option("map", a, "map document")->required();
  certify->add_option("y", b, "source point set (centers the region)");
  certify->add_option("z", c, "target point set (checks interpolation)");
  certify->add_option("--epsilon", epsilon, "distortion budget");
  certify->add_option("--out", out, "report path (stdout when omitted)");
  certify->add_option("--seed", seed, "sampling seed")->envname("ISOEXTEND_SEED");
  certify->add_option("--pairs", pairs, "pair samples (>= 1000)");
  certify->add_option("--jacobians", jacobians, "Jacobian samples (>= 1000)");

  auto* sweep = app.add_subcommand("sweep", "estimate the alignment exponent c2 from random instances");
  sweep->add_option("-k", k, "points per instance");
  sweep->add_option("--dim", dim, "ambient dimension");
  sweep->add_option("--epsilon", epsilons, "distance perturbation levels (comma separated)")->delimiter(',');
  sweep->add_option("--trials", trials, "trials per level (>= 10)");
  sweep->add_option("--seed", seed, "base seed; trial i uses seed + i")->envname("ISOEXTEND_SEED");
  sweep->add_option("--out", out, "output prefix for the .json and .tsv documents");

  auto* counter = app.add_subcommand("counterexample", "build the k = 2D+1 orientation obstruction");
  counter->add_option("--dim", dim, "ambient dimension");
  counter->add_option("--delta", delta, "small simplex radius in (0, 1/10]");
  counter->add_option("--out", out, "output prefix for the fixture and report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitParse;
  }

  try {
    if (*align) return cmd_align(a, b, proper, out, std::cerr);
    if (*extend) {
      ExtendOptions options;
      options.seed = seed;
      options.pairs = pairs;
      options.jacobians = jacobians;
      return cmd_extend(a, b, epsilon, out, options, std::cerr);
    }
    if (*certify) return cmd_certify(a, b, c, epsilon, pairs, jacobians, seed, out, std::cerr);
    if (*sweep) {
      if (epsilons.empty()) epsilons = {1e-5, 1e-4, 1e-3, 1e-2};
      return cmd_sweep(k, dim, epsilons, trials, seed, out, std::cerr);
    }
    if (*counter) return cmd_counterexample(dim, delta, out, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "isoextend: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitFailure;
}
