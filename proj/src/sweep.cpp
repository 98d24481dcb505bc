#include "isoextend/sweep.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstring>
#include <iomanip>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include "isoextend/errors.hpp"

namespace isoextend {

namespace {

constexpr double kRoundoff = 1e-12;

std::uint64_t noise_seed(std::uint64_t seed, double epsilon, int attempt) {
  std::uint64_t bits;
  std::memcpy(&bits, &epsilon, sizeof bits);
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(bits), static_cast<std::uint32_t>(bits >> 32),
                    static_cast<std::uint32_t>(attempt)};
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

// Classical multidimensional scaling of a distance matrix into R^D.
std::vector<Vec> mds_embed(const Mat& dist, int D) {
  const Eigen::Index k = dist.rows();
  const Mat j = Mat::Identity(k, k) - Mat::Constant(k, k, 1.0 / k);
  const Mat b = -0.5 * j * dist.cwiseProduct(dist) * j;
  Eigen::SelfAdjointEigenSolver<Mat> eig(b);
  std::vector<Vec> pts(k, Vec::Zero(D));
  for (int c = 0; c < D && c < k; ++c) {
    const Eigen::Index col = k - 1 - c;  // eigenvalues ascend
    const double scale = std::sqrt(std::max(eig.eigenvalues()[col], 0.0));
    for (Eigen::Index i = 0; i < k; ++i) pts[i][c] = scale * eig.eigenvectors()(i, col);
  }
  return pts;
}

double max_distance_gap(const PointConfig& y, const PointConfig& z) {
  double gap = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i)
    for (std::size_t j = i + 1; j < y.size(); ++j)
      gap = std::max(gap, std::abs((z[i] - z[j]).norm() - (y[i] - y[j]).norm()));
  return gap;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Least-squares slope and intercept of log(m) against log(eps).
std::pair<double, double> loglog_fit(const std::vector<std::pair<double, double>>& pts) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(pts.size());
  for (const auto& [e, m] : pts) {
    const double x = std::log(e), y = std::log(std::max(m, 1e-300));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return {slope, (sy - slope * sx) / n};
}

double percentile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const double pos = q * (v.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - lo) * (v[hi] - v[lo]);
}

}  // namespace

std::pair<PointConfig, PointConfig> generate_instance(int k, int D, double epsilon, std::uint64_t seed) {
  if (k < 2) throw Error(ErrorKind::Precondition, "sweep needs k >= 2");
  if (!(epsilon >= 0.0 && epsilon <= 0.1)) throw Error(ErrorKind::Precondition, "epsilon must lie in [0, 0.1]");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::vector<Vec> ys(k, Vec(D));
  for (auto& p : ys)
    for (int c = 0; c < D; ++c) p[c] = normal(rng);
  const PointConfig y(D, ys);

  for (int attempt = 0; attempt < kMaxRejections; ++attempt) {
    std::mt19937_64 noise(noise_seed(seed, epsilon, attempt));
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const auto yn = normalize_pair(y, y).y;
    Mat dist = Mat::Zero(k, k);
    for (int i = 0; i < k; ++i)
      for (int j = i + 1; j < k; ++j) dist(i, j) = dist(j, i) = (yn[i] - yn[j]).norm() * (1.0 + 0.5 * epsilon * u(noise));
    std::vector<Vec> zs = mds_embed(dist, D);
    try {
      const PointConfig z(D, zs);
      NormalizedPair n = normalize_pair(yn, z);
      const double gap = max_distance_gap(n.y, n.z);
      if (gap < epsilon || gap <= kRoundoff) return {n.y, n.z};
    } catch (const Error&) {
      // coincident re-embedded points; draw new noise
    }
  }
  throw Error(ErrorKind::Feasibility, "re-embedding rejected " + std::to_string(kMaxRejections) + " times");
}

SweepRecord measure_instance(int k, int D, double epsilon, std::uint64_t seed) {
  auto [y, z] = generate_instance(k, D, epsilon, seed);
  const AlignmentResult a = procrustes_align(y, z, false);
  const double stress = distance_stress(y, z);
  return SweepRecord{k, D, epsilon, a.maxResidual, stress, seed, std::move(y), std::move(z)};
}

SweepResult run_sweep(const SweepConfig& config) {
  if (config.k < 2) throw Error(ErrorKind::Precondition, "sweep needs k >= 2");
  if (config.trials < 1) throw Error(ErrorKind::Precondition, "sweep needs at least one trial");
  for (double e : config.epsilons)
    if (!(e >= 0.0 && e <= 0.1)) throw Error(ErrorKind::Precondition, "epsilon levels must lie in [0, 0.1]", e);

  std::vector<double> levels = config.epsilons;
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

  const std::size_t tasks = levels.size() * static_cast<std::size_t>(config.trials);
  std::vector<std::optional<SweepRecord>> slots(tasks);
  std::vector<std::string> errors(tasks);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t t; (t = next.fetch_add(1)) < tasks;) {
      const double eps = levels[t / config.trials];
      const std::uint64_t seed = config.seed + t % config.trials;
      try {
        slots[t] = measure_instance(config.k, config.D, eps, seed);
      } catch (const Error& e) {
        errors[t] = e.what();
      }
    }
  };
  const unsigned threads = std::max(1u, std::min(8u, std::thread::hardware_concurrency()));
  std::vector<std::thread> pool;
  for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();

  SweepResult result{config, {}, {}, std::nullopt, true, true};
  for (std::size_t t = 0; t < tasks; ++t) {
    if (slots[t]) {
      result.records.push_back(std::move(*slots[t]));
    } else {
      result.failures.push_back({levels[t / config.trials], config.seed + t % config.trials, errors[t]});
    }
  }
  const double kk = config.k;
  for (const auto& r : result.records) {
    const double e = std::max(r.epsilonInput, kRoundoff);
    if (r.stress > 4.0 * kk * kk * e * e) result.stressBoundHolds = false;
  }

  std::vector<std::vector<double>> byLevel(levels.size());
  for (const auto& r : result.records) {
    const auto pos = std::lower_bound(levels.begin(), levels.end(), r.epsilonInput) - levels.begin();
    byLevel[pos].push_back(r.residual);
  }
  SweepFit fit;
  std::vector<std::pair<double, double>> positive;
  double previous = -1.0;
  for (std::size_t l = 0; l < levels.size(); ++l) {
    if (byLevel[l].empty()) continue;
    const double m = median(byLevel[l]);
    fit.medians.push_back({levels[l], m});
    if (m < previous) result.medianMonotone = false;
    previous = m;
    if (levels[l] > 0.0) positive.push_back({levels[l], m});
  }
  if (positive.size() >= 2) {
    const auto [slope, intercept] = loglog_fit(positive);
    fit.c2 = slope;
    fit.c1 = std::exp(intercept);
    std::mt19937_64 rng(config.seed ^ 0xb007u);
    std::vector<double> slopes;
    for (int b = 0; b < config.bootstrap; ++b) {
      std::vector<std::pair<double, double>> pts;
      for (std::size_t l = 0; l < levels.size(); ++l) {
        if (!(levels[l] > 0.0) || byLevel[l].empty()) continue;
        std::uniform_int_distribution<std::size_t> pick(0, byLevel[l].size() - 1);
        std::vector<double> sample;
        for (std::size_t i = 0; i < byLevel[l].size(); ++i) sample.push_back(byLevel[l][pick(rng)]);
        pts.push_back({levels[l], median(sample)});
      }
      slopes.push_back(loglog_fit(pts).first);
    }
    if (!slopes.empty()) {
      fit.c2Low = percentile(slopes, 0.025);
      fit.c2High = percentile(slopes, 0.975);
    }
    result.fit = fit;
  } else if (!fit.medians.empty()) {
    fit.c1 = fit.c2 = fit.c2Low = fit.c2High = std::numeric_limits<double>::quiet_NaN();
    result.fit = fit;
  }
  return result;
}

Json sweep_to_json(const SweepResult& r) {
  Json records = Json::array();
  for (const auto& rec : r.records) {
    records.push_back(Json{{"k", rec.k},
                           {"D", rec.D},
                           {"epsilonInput", number(rec.epsilonInput)},
                           {"seed", rec.seed},
                           {"residual", number(rec.residual)},
                           {"stress", number(rec.stress)},
                           {"y", points_to_json(rec.y)},
                           {"z", points_to_json(rec.z)}});
  }
  Json failures = Json::array();
  for (const auto& f : r.failures)
    failures.push_back(Json{{"epsilonInput", number(f.epsilonInput)}, {"seed", f.seed}, {"error", f.message}});
  Json out{{"k", r.config.k},
           {"D", r.config.D},
           {"trials", r.config.trials},
           {"seed", r.config.seed},
           {"bootstrap", r.config.bootstrap},
           {"stressBoundHolds", r.stressBoundHolds},
           {"medianMonotone", r.medianMonotone}};
  if (r.fit) {
    Json medians = Json::array();
    for (const auto& [e, m] : r.fit->medians) medians.push_back(Json{{"epsilon", number(e)}, {"median", number(m)}});
    out["fit"] = Json{{"c1", number(r.fit->c1)},
                      {"c2", number(r.fit->c2)},
                      {"c2Interval95", Json::array({number(r.fit->c2Low), number(r.fit->c2High)})},
                      {"medians", medians}};
  }
  out["records"] = records;
  out["failures"] = failures;
  return out;
}

std::string sweep_to_tsv(const SweepResult& r) {
  std::ostringstream out;
  out << std::setprecision(17);
  out << "k\tD\tepsilon\tseed\tresidual\tstress\n";
  for (const auto& rec : r.records)
    out << rec.k << '\t' << rec.D << '\t' << rec.epsilonInput << '\t' << rec.seed << '\t' << rec.residual << '\t'
        << rec.stress << '\n';
  return out.str();
}

}  // namespace isoextend
