// Acceptance run: one PASS/FAIL line per criterion, exit 1 if any fails.

#include <Eigen/QR>
#include <Eigen/SVD>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>

#include "isoextend/certification.hpp"
#include "isoextend/clustering.hpp"
#include "isoextend/commands.hpp"
#include "isoextend/diffeo.hpp"
#include "isoextend/errors.hpp"
#include "isoextend/extension.hpp"
#include "isoextend/io.hpp"

using namespace isoextend;
namespace fs = std::filesystem;

namespace {

using Rng = std::mt19937_64;

Vec gaussian(int d, Rng& rng, double scale = 1.0) {
  std::normal_distribution<double> n(0.0, scale);
  Vec v(d);
  for (int i = 0; i < d; ++i) v[i] = n(rng);
  return v;
}

Vec direction(int d, Rng& rng) { return gaussian(d, rng).normalized(); }

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

Mat orthogonal(int d, Rng& rng, bool proper) {
  Mat a(d, d);
  for (int c = 0; c < d; ++c) a.col(c) = gaussian(d, rng);
  Eigen::HouseholderQR<Mat> qr(a);
  Mat q = qr.householderQ();
  if ((q.determinant() > 0) != proper) q.col(0) = -q.col(0);
  return q;
}

PointConfig random_config(std::size_t k, int d, Rng& rng) {
  std::vector<Vec> pts;
  for (std::size_t i = 0; i < k; ++i) pts.push_back(gaussian(d, rng));
  return PointConfig(d, pts);
}

PointConfig apply(const EuclideanMotion& m, const PointConfig& p) {
  std::vector<Vec> pts;
  for (const auto& x : p.points()) pts.push_back(m(x));
  return PointConfig(p.dimension(), pts, p.labels());
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

Mat fd_jacobian(const SmoothMap& map, const Vec& x, double h) {
  const int d = static_cast<int>(x.size());
  Mat j(d, d);
  for (int c = 0; c < d; ++c) {
    XVec a = extend(x), b = a;
    a[c] += h;
    b[c] -= h;
    j.col(c) = ((map.eval_extended(a) - map.eval_extended(b)) / (2.0L * h)).cast<double>();
  }
  return j;
}

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Collects the first few reasons a criterion failed.
struct Checker {
  Outcome out;
  int reported = 0;
  void require(bool ok, const std::string& why) {
    if (ok) return;
    out.pass = false;
    if (reported++ < 3) out.detail += (out.detail.empty() ? "" : "; ") + why;
  }
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

// ---------------------------------------------------------------------------

Outcome exact_matching() {
  Rng rng(1001);
  Checker c;
  double worst = 0.0;
  for (int t = 0; t < 200; ++t) {
    const int d = 2 + t % 5;
    const std::size_t k = 1 + static_cast<std::size_t>((t / 5) % (d + 3));
    const auto y = random_config(k, d, rng);
    const auto z = apply(EuclideanMotion(orthogonal(d, rng, t % 2 == 0), gaussian(d, rng)), y);
    const auto free = procrustes_align(y, z, false);
    worst = std::max(worst, free.maxResidual);
    c.require(free.maxResidual < 1e-9, "residual " + fmt("%.3g", free.maxResidual));
    if (k <= static_cast<std::size_t>(d)) {
      const auto proper = procrustes_align(y, z, true);
      worst = std::max(worst, proper.maxResidual);
      c.require(proper.motion.proper() && proper.maxResidual < 1e-9, "proper fit failed");
    }
  }
  c.out.detail = "200 instances, worst residual " + fmt("%.2e", worst) + (c.out.detail.empty() ? "" : "; " + c.out.detail);
  return c.out;
}

Outcome alignment_continuity() {
  Rng rng(1002);
  Checker c;
  std::vector<double> medians;
  for (double delta : {1e-2, 1e-4, 1e-6}) {
    std::vector<double> residuals;
    while (residuals.size() < 50) {
      const auto y = random_config(4, 3, rng);
      const EuclideanMotion m(orthogonal(3, rng, true), gaussian(3, rng));
      const double step = 0.25 * delta * y.min_pairwise_distance();
      std::vector<Vec> zs;
      for (const auto& p : y.points()) zs.push_back(m(p) + step * uniform(rng, 0.0, 1.0) * direction(3, rng));
      const PointConfig z(3, zs);
      if (pairwise_distortion(y, z).delta > delta) continue;
      residuals.push_back(procrustes_align(y, z, true).relativeResidual);
    }
    medians.push_back(median(residuals));
  }
  c.require(medians[0] >= medians[1] && medians[1] >= medians[2], "medians not monotone");
  c.require(medians[2] < 1e-4, "median at 1e-6 is " + fmt("%.3g", medians[2]));
  std::ostringstream s;
  s << "median relative residual " << fmt("%.2e", medians[0]) << " / " << fmt("%.2e", medians[1]) << " / "
    << fmt("%.2e", medians[2]) << " at delta 1e-2 / 1e-4 / 1e-6";
  c.out.detail = s.str() + (c.out.detail.empty() ? "" : "; " + c.out.detail);
  return c.out;
}

Outcome lojasiewicz_exponent(const fs::path& dir) {
  Checker c;
  std::vector<double> levels;
  for (int i = 0; i <= 6; ++i) levels.push_back(std::pow(10.0, -5.0 + 0.5 * i));
  std::ostringstream log;
  const std::string prefix = (dir / "sweep").string();
  const int code = cmd_sweep(3, 2, levels, 50, 1, prefix, log);
  c.require(code == kExitOk, "cmd_sweep exited " + std::to_string(code));
  if (code != kExitOk) return c.out;
  const Json doc = read_json(prefix + ".json");
  c.require(doc.contains("fit"), "no fit");
  if (!doc.contains("fit")) return c.out;
  const double c2 = parse_number(doc["fit"]["c2"]);
  const double lo = parse_number(doc["fit"]["c2Interval95"][0]);
  const double hi = parse_number(doc["fit"]["c2Interval95"][1]);
  c.require(c2 > 0.0, "c2 not positive");
  c.require(lo > 0.0, "interval reaches 0");
  c.require(doc["stressBoundHolds"].get<bool>(), "stress bound violated");
  std::ostringstream s;
  s << "c2 = " << fmt("%.3f", c2) << " [" << fmt("%.3f", lo) << ", " << fmt("%.3f", hi) << "], "
    << doc["records"].size() << " instances, stress bound holds: " << (doc["stressBoundHolds"].get<bool>() ? "yes" : "no");
  c.out.detail = s.str() + (c.out.detail.empty() ? "" : "; " + c.out.detail);
  return c.out;
}

// Plateau, certification and finite-difference checks shared by criterion 4.
void check_constructor(Checker& c, const std::string& name, const SmoothMap& map, const Vec& center, double r1,
                       double r2, double eps, const std::function<Vec(const Vec&)>& plateau, Rng& rng,
                       std::uint64_t seed) {
  const int d = static_cast<int>(center.size());
  double worstPlateau = 0.0;
  for (int i = 0; i < 500; ++i) {
    const Vec in = center + r1 * uniform(rng, 0.0, 1.0) * direction(d, rng);
    worstPlateau = std::max(worstPlateau, (map(in) - plateau(in)).norm() / std::max(1.0, in.norm()));
    const Vec out = center + r2 * uniform(rng, 1.0, 4.0) * direction(d, rng);
    worstPlateau = std::max(worstPlateau, (map(out) - out).norm() / std::max(1.0, out.norm()));
  }
  c.require(worstPlateau <= 1e-12, name + " plateau error " + fmt("%.3g", worstPlateau));
  for (int i = 0; i < 20; ++i) {
    const double r = r1 * std::pow(r2 / r1, uniform(rng, 0.02, 0.98));
    const Vec x = center + r * direction(d, rng);
    const Mat j = map.jacobian(x);
    const double err = (j - fd_jacobian(map, x, 1e-6 * std::max(r, x.norm()))).norm() / j.norm();
    c.require(err <= 1e-5, name + " Jacobian mismatch " + fmt("%.3g", err));
  }
  const auto report = certify(map, Ball{center, 2.0 * r2}, eps, 1000, 1000, seed);
  c.require(report.pass, name + " certified " + fmt("%.4f", report.certifiedEpsilon) + " > " + fmt("%.4f", eps));
}

Outcome map_constructors() {
  Rng rng(1004);
  Checker c;
  for (int t = 0; t < 50; ++t) {
    const int d = 2 + t % 3;
    const double eps = uniform(rng, 0.2, 0.5);
    const Vec center = gaussian(d, rng);
    const double r1 = std::pow(10.0, uniform(rng, -2.0, 2.0));

    // Slow twist of a random rotation (angles up to pi).
    const Mat q = orthogonal(d, rng, true);
    const auto rot = factor_rotation(q);
    const double r2 = r1 * required_radius_ratio(rot.max_abs_angle(), eps) * uniform(rng, 1.001, 10.0);
    const auto twist = make_slow_twist(rot, r1, r2, eps, center);
    check_constructor(c, "twist", twist, center, r1, r2, eps, [&](const Vec& x) -> Vec { return center + q * (x - center); },
                      rng, 10 + t);

    // Slide of a proper motion with a small rotation and admissible translation.
    Mat small = Mat::Identity(d, d);
    small.topLeftCorner(2, 2) = planar_rotation(uniform(rng, 0.01, 0.5));
    const Mat frame = orthogonal(d, rng, true);
    const Mat qs = frame * small * frame.transpose();
    const Vec offset = uniform(rng, 0.0, 0.9) * kSlownessConstant * eps * r1 * direction(d, rng);
    const EuclideanMotion m(qs, center + offset - qs * center);
    const double mid = r1 * required_radius_ratio(factor_rotation(qs).max_abs_angle(), eps) * uniform(rng, 1.001, 3.0);
    const double s2 = mid * mid / r1;
    const auto slide = make_slide(m, r1, s2, eps, center);
    check_constructor(c, "slide", slide, center, r1, s2, eps, [&](const Vec& x) -> Vec { return m(x); }, rng, 20 + t);

    // Point mover.
    const double m2 = r1 * uniform(rng, 1.5, 20.0);
    const Vec x = center + uniform(rng, 0.0, 1.0) * r1 * direction(d, rng);
    const double limit = std::min(kSlownessConstant * eps * r1,
                                  kSlownessConstant * eps * (m2 - r1) / kSmoothStepDerivativeBound);
    const Vec target = x + uniform(rng, 0.1, 0.9) * limit * direction(d, rng);
    const auto mover = make_point_mover(x, target, r1, m2, eps, center);
    c.require((mover(x) - target).norm() <= 1e-12 * std::max(1.0, target.norm()), "mover misses its target");
    // Inside r1 the mover is the translation by target - x.
    check_constructor(c, "mover", mover, center, r1, m2, eps, [&](const Vec& p) -> Vec { return p + (target - x); },
                      rng, 30 + t);
  }
  c.out.detail = "50 instances each of twist, slide and point mover" + (c.out.detail.empty() ? "" : "; " + c.out.detail);
  return c.out;
}

Outcome clustering() {
  Rng rng(1005);
  Checker c;
  std::uniform_int_distribution<int> expo(0, 12);
  int multi = 0;
  for (int t = 0; t < 1000; ++t) {
    const std::size_t k = 2 + static_cast<std::size_t>(t % 11);
    const int d = 2 + t % 3;
    const double eta = t % 2 ? 0.1 : 0.05;
    std::vector<Vec> pts;
    while (pts.size() < k) {
      const Vec base = pts.empty() ? Vec::Zero(d) : pts[rng() % pts.size()];
      const Vec p = base + std::pow(10.0, -expo(rng)) * gaussian(d, rng);
      if (std::none_of(pts.begin(), pts.end(), [&](const Vec& q) { return q == p; })) pts.push_back(p);
    }
    const PointConfig e(d, pts);
    const auto part = partition(e, eta);
    const int l = part.scaleExponent;
    const double dm = diam(e);
    c.require(l >= 10 && l <= max_scale_exponent(k), "scale exponent out of range");
    std::vector<int> owner(k, -1);
    for (std::size_t a = 0; a < part.clusters.size(); ++a)
      for (auto i : part.clusters[a]) {
        c.require(owner[i] < 0, "clusters overlap");
        owner[i] = static_cast<int>(a);
      }
    c.require(std::none_of(owner.begin(), owner.end(), [](int o) { return o < 0; }), "clusters do not cover");
    if (part.clusters.size() < k) ++multi;
    // Exhaustive pair scan: the annulus is empty, same-cluster pairs are
    // within eta^l diam and cross-cluster pairs at least eta^(l-1) diam.
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = i + 1; j < k; ++j) {
        const double r = (e[i] - e[j]).norm();
        c.require(!(r > std::pow(eta, l) * dm && r <= std::pow(eta, l - 1) * dm), "annulus not empty");
        if (owner[i] == owner[j]) c.require(r <= std::pow(eta, l) * dm, "cluster diameter bound violated");
        else c.require(r >= std::pow(eta, l - 1) * dm, "cluster separation bound violated");
      }
  }
  c.out.detail = "1000 configurations, " + std::to_string(multi) + " with multi-point clusters" +
                 (c.out.detail.empty() ? "" : "; " + c.out.detail);
  return c.out;
}

Outcome extension_end_to_end() {
  Rng rng(1006);
  Checker c;
  int success = 0, typed = 0;
  double worstInterp = 0.0, worstCert = 0.0, worstMeasured = 0.0;
  for (int t = 0; t < 100; ++t) {
    const int d = 2 + t % 3;
    const std::size_t k = 1 + static_cast<std::size_t>((t / 3) % d);
    const double eps = 0.5;
    const auto y = random_config(k, d, rng);
    const auto params = derive_params(eps, d, std::max<std::size_t>(k, 2));
    // Target distortion deltaMax/10; at ~1e-200 it is far below the spacing
    // of doubles, so the realized perturbation is rounding only.
    const EuclideanMotion m(orthogonal(d, rng, true), gaussian(d, rng));
    std::vector<Vec> zs;
    for (const auto& p : y.points()) zs.push_back(m(p) + 0.1 * params.deltaMax * diam(y) * direction(d, rng));
    const PointConfig z(d, zs);
    worstMeasured = std::max(worstMeasured, excess_distortion(y, z));
    try {
      const auto r = extend_with_pretranslation(y, z, eps);
      ++success;
      for (std::size_t i = 0; i < k; ++i) worstInterp = std::max(worstInterp, (r.map(y[i]) - z[i]).norm());
      worstCert = std::max(worstCert, r.certifiedEpsilon);
      c.require(r.certification && r.certification->pass && r.certifiedEpsilon <= eps, "uncertified result");
      if (k == 1) continue;
      c.require(std::isfinite(r.supportRadius), "unbounded support");
      for (int i = 0; i < 1000; ++i) {
        const Vec x = y[0] + r.supportRadius * uniform(rng, 1.0, 4.0) * direction(d, rng);
        c.require((r.map(x) - x).norm() <= 1e-12 * std::max(1.0, x.norm()), "not the identity outside support");
      }
      for (int i = 0; i < 100; ++i) {
        const Vec q = y[0] + std::pow(r.supportRadius, uniform(rng, -0.2, 1.0)) * direction(d, rng);
        const double err = (r.map(r.map.inverse_eval(q)) - q).norm();
        c.require(err <= 1e-9 * std::max(1.0, q.norm()), "inverse round trip " + fmt("%.3g", err));
      }
    } catch (const Error& e) {
      const bool ok = is_budget_kind(e.kind()) || e.kind() == ErrorKind::Precondition;
      if (ok) ++typed;
      c.require(ok, std::string("untyped failure: ") + e.what());
    }
  }
  c.require(worstInterp < 1e-9, "interpolation residual " + fmt("%.3g", worstInterp));
  c.require(success >= 95, std::to_string(success) + "/100 succeeded");
  std::ostringstream s;
  s << success << "/100 certified at eps 0.5 (" << typed << " typed failures), worst interpolation "
    << fmt("%.2e", worstInterp) << ", worst certified eps " << fmt("%.4f", worstCert) << ", measured excess distortion "
    << fmt("%.1e", worstMeasured);
  c.out.detail = s.str() + (c.out.detail.empty() ? "" : "; " + c.out.detail);
  return c.out;
}

Outcome counterexample(const fs::path& dir) {
  Checker c;
  std::ostringstream log;
  const std::string p2 = (dir / "ce2").string(), p3 = (dir / "ce3").string();
  c.require(cmd_counterexample(2, 0.01, p2, log) == kExitOk, "D = 2 exit code");
  const Json r2 = read_json(p2 + ".report.json");
  c.require(r2["degrees"] == Json::array({-1, 1}), "degrees " + r2["degrees"].dump());
  c.require(r2["obstruction"]["verdict"] == "CONFLICT", "D = 2 verdict");
  c.require(cmd_counterexample(3, 0.01, p3, log) == kExitOk, "D = 3 exit code");
  const Json r3 = read_json(p3 + ".report.json");
  c.require(r3["obstruction"]["verdict"] == "CONFLICT", "D = 3 verdict");
  const int code = cmd_extend(p2 + ".y.json", p2 + ".z.json", 0.5, (dir / "ce_extend").string(), ExtendOptions{}, log);
  c.require(code == kExitDimension, "extend on fixture exited " + std::to_string(code));
  c.out.detail = "D = 2 degrees " + r2["degrees"].dump() + " " + r2["obstruction"]["verdict"].get<std::string>() +
                 ", D = 3 " + r3["obstruction"]["verdict"].get<std::string>() + ", extend exit " +
                 std::to_string(code) + (c.out.detail.empty() ? "" : "; " + c.out.detail);
  return c.out;
}

Outcome closure_properties() {
  Rng rng(1008);
  Checker c;
  double worstInverse = 0.0, worstCompose = 0.0, worstFresh = 0.0;
  for (int t = 0; t < 10; ++t) {
    const int d = 2 + t % 3;
    const double e1 = 0.5;
    const auto y = random_config(static_cast<std::size_t>(d), d, rng);
    const auto z = apply(EuclideanMotion(orthogonal(d, rng, true), gaussian(d, rng)), y);
    const auto phi = extend_with_pretranslation(y, z, e1, ExtendOptions{2000, 2000, 100 + static_cast<std::uint64_t>(t)});

    // Psi: a slow twist about y_1 with its own budget.
    const double e2 = uniform(rng, 0.2, 0.5);
    const auto rot = factor_rotation(orthogonal(d, rng, true));
    const double r1 = diam(y);
    const double r2 = r1 * 1.01 * required_radius_ratio(rot.max_abs_angle(), e2);
    const auto psi = make_slow_twist(rot, r1, r2, e2, y[0]);

    const double reach = std::max(phi.supportRadius, r2) * 2.0;
    const Ball region{y[0], reach};
    CertifyOptions opts;
    opts.support = region;

    const auto inv = certify_inverse(phi.map, region, e1, 2000, 2000, 7 + t, opts);
    worstInverse = std::max(worstInverse, inv.certifiedEpsilon);
    c.require(inv.certifiedEpsilon <= e1 * (1 + 1e-9), "inverse certified " + fmt("%.4f", inv.certifiedEpsilon));

    const double composed = (1 + e1) * (1 + e2) - 1;
    const auto both = compose(d, {phi.map, psi});
    const auto rep = certify(both, region, composed, 2000, 2000, 11 + t, opts);
    worstCompose = std::max(worstCompose, rep.certifiedEpsilon / composed);
    c.require(rep.pass, "composition certified " + fmt("%.4f", rep.certifiedEpsilon) + " > " + fmt("%.4f", composed));

    // Fresh 10^4-pair sample with an unrelated seed.
    const auto fresh = certify(phi.map, Ball{y[0], phi.supportRadius}, e1, 10000, 1000, 0x9e3779b97f4a7c15ULL + t);
    worstFresh = std::max(worstFresh, std::max(fresh.worstRatioHigh, 1.0 / fresh.worstRatioLow) - 1.0);
    c.require(fresh.worstRatioHigh <= (1 + e1) * (1 + 1e-9) && 1.0 / fresh.worstRatioLow <= (1 + e1) * (1 + 1e-9),
              "fresh pair ratio exceeds budget");
  }
  std::ostringstream s;
  s << "10 map pairs; worst inverse eps " << fmt("%.4f", worstInverse) << " (budget 0.5), worst composed eps "
    << fmt("%.3f", worstCompose) << " of budget, worst fresh pair deviation " << fmt("%.4f", worstFresh);
  c.out.detail = s.str() + (c.out.detail.empty() ? "" : "; " + c.out.detail);
  return c.out;
}

}  // namespace

int main() {
  const fs::path dir = fs::temp_directory_path() / "isoextend_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);

  struct Criterion {
    int id;
    const char* name;
    double limitSeconds;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "exact matching", 5, exact_matching},
      {2, "alignment continuity", 30, alignment_continuity},
      {3, "Lojasiewicz exponent sweep", 120, [&] { return lojasiewicz_exponent(dir); }},
      {4, "map constructors", 60, map_constructors},
      {5, "clustering", 10, clustering},
      {6, "extension end-to-end", 300, extension_end_to_end},
      {7, "counterexample", 10, [&] { return counterexample(dir); }},
      {8, "closure properties", 60, closure_properties},
  };

  int failed = 0;
  for (const auto& cr : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = cr.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > cr.limitSeconds) {
      o.pass = false;
      o.detail += "; runtime over " + fmt("%.0f", cr.limitSeconds) + " s";
    }
    if (!o.pass) ++failed;
    std::printf("[%s] criterion %d [PRIMARY] %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", cr.id, cr.name,
                o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  fs::remove_all(dir);
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
