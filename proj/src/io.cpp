#include "isoextend/io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "isoextend/errors.hpp"

namespace isoextend {

namespace {

[[noreturn]] void parse_fail(const std::string& what) { throw Error(ErrorKind::Parse, what); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) parse_fail(std::string("missing field '") + key + "'");
  return j.at(key);
}

Json profile_to_json(const TransitionProfile& p) {
  return Json{{"kind", p.kind}, {"derivativeBound", number(p.derivativeBound)}};
}

TransitionProfile profile_from_json(const Json& j) {
  TransitionProfile p;
  p.kind = field(j, "kind").get<std::string>();
  p.derivativeBound = parse_number(field(j, "derivativeBound"));
  return p;
}

Json factorization_to_json(const RotationFactorization& f) {
  Json angles = Json::array();
  for (double a : f.angles) angles.push_back(number(a));
  return Json{{"frame", mat_to_json(f.frame)}, {"angles", angles}, {"fixedBlock", f.fixedBlock}};
}

RotationFactorization factorization_from_json(const Json& j, int d) {
  RotationFactorization f;
  f.frame = mat_from_json(field(j, "frame"), d, d);
  for (const auto& a : field(j, "angles")) f.angles.push_back(parse_number(a));
  f.fixedBlock = field(j, "fixedBlock").get<int>();
  if (2 * static_cast<int>(f.angles.size()) + f.fixedBlock != d) parse_fail("rotation blocks do not fill D");
  return f;
}

Json witness_to_json(const Witness& w) {
  Json j{{"kind", to_string(w.kind)}, {"x", vec_to_json(w.x)}};
  if (w.xPrime.size() > 0) j["xPrime"] = vec_to_json(w.xPrime);
  j["value"] = number(w.value);
  if (w.inverse) j["inverse"] = true;
  return j;
}

}  // namespace

Json number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double parse_number(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  parse_fail("expected a number");
}

Json vec_to_json(const Vec& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(number(v[i]));
  return a;
}

Vec vec_from_json(const Json& j, int dimension) {
  if (!j.is_array() || static_cast<int>(j.size()) != dimension) {
    parse_fail("expected a list of " + std::to_string(dimension) + " numbers");
  }
  Vec v(dimension);
  for (int i = 0; i < dimension; ++i) v[i] = parse_number(j[i]);
  return v;
}

Json mat_to_json(const Mat& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) rows.push_back(vec_to_json(m.row(r).transpose()));
  return rows;
}

Mat mat_from_json(const Json& j, int rows, int cols) {
  if (!j.is_array() || static_cast<int>(j.size()) != rows) parse_fail("matrix has the wrong number of rows");
  Mat m(rows, cols);
  for (int r = 0; r < rows; ++r) m.row(r) = vec_from_json(j[r], cols).transpose();
  return m;
}

Json points_to_json(const PointConfig& p) {
  Json pts = Json::array();
  for (std::size_t i = 0; i < p.size(); ++i) pts.push_back(Json{{"label", p.label(i)}, {"coords", vec_to_json(p[i])}});
  return Json{{"dimension", p.dimension()}, {"points", pts}};
}

PointConfig points_from_json(const Json& j) {
  try {
    const Json& dim = field(j, "dimension");
    if (!dim.is_number_integer()) parse_fail("dimension must be an integer");
    const int d = dim.get<int>();
    if (d < 2 || d > 16) parse_fail("dimension must lie in [2, 16]");
    const Json& pts = field(j, "points");
    if (!pts.is_array() || pts.empty()) parse_fail("points must be a non-empty list");
    std::vector<Vec> coords;
    std::vector<std::string> labels;
    for (const auto& p : pts) {
      const Json& label = field(p, "label");
      if (!label.is_string()) parse_fail("labels must be strings");
      labels.push_back(label.get<std::string>());
      const Json& c = field(p, "coords");
      for (const auto& x : c) {
        if (!x.is_number()) parse_fail("coordinates must be numbers");
      }
      coords.push_back(vec_from_json(c, d));
    }
    return PointConfig(d, std::move(coords), std::move(labels));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Parse) throw;
    throw Error(ErrorKind::Parse, std::string("invalid point set: ") + e.what());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("invalid point set: ") + e.what());
  }
}

Json motion_to_json(const EuclideanMotion& m) {
  return Json{{"linear", mat_to_json(m.linear())}, {"translation", vec_to_json(m.translation())},
              {"proper", m.proper()}};
}

Json alignment_report(const AlignmentResult& a, const DistortionReport& d) {
  return Json{{"motion", motion_to_json(a.motion)},
              {"maxResidual", number(a.maxResidual)},
              {"relativeResidual", number(a.relativeResidual)},
              {"rmsResidual", number(a.rmsResidual)},
              {"delta", number(d.delta)},
              {"worstPair", Json::array({d.worstPair.first, d.worstPair.second})}};
}

Json partition_to_json(const PointConfig& p, const ClusterPartition& part) {
  Json clusters = Json::array();
  for (const auto& c : part.clusters) {
    Json labels = Json::array();
    for (auto i : c) labels.push_back(p.label(i));
    clusters.push_back(labels);
  }
  Json reps = Json::array();
  for (auto i : part.representatives) reps.push_back(p.label(i));
  return Json{{"base", number(part.base)}, {"scaleExponent", part.scaleExponent}, {"clusters", clusters},
              {"representatives", reps}};
}

Json map_to_json(const SmoothMap& map) {
  const MapNode& node = map.node();
  Json j{{"kind", to_string(map.kind())}, {"dimension", map.dimension()}, {"budget", number(map.budget())}};
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, MotionNode>) {
          j["motion"] = motion_to_json(n.motion);
        } else if constexpr (std::is_same_v<T, SlowTwistNode>) {
          j["center"] = vec_to_json(n.center);
          j["r1"] = number(n.r1);
          j["r2"] = number(n.r2);
          j["rotation"] = factorization_to_json(n.rotation);
          j["profile"] = profile_to_json(n.profile);
        } else if constexpr (std::is_same_v<T, SlideNode>) {
          j["center"] = vec_to_json(n.center);
          j["translation"] = vec_to_json(n.translation);
          j["r1"] = number(n.r1);
          j["r2"] = number(n.r2);
          j["profile"] = profile_to_json(n.profile);
        } else if constexpr (std::is_same_v<T, BallPatchNode>) {
          Json balls = Json::array();
          for (const auto& b : n.balls)
            balls.push_back(Json{{"center", vec_to_json(b.center)}, {"radius", number(b.radius)},
                                 {"map", map_to_json(b.map)}});
          j["balls"] = balls;
        } else if constexpr (std::is_same_v<T, RadialGlueNode>) {
          j["center"] = vec_to_json(n.center);
          j["innerRadius"] = number(n.innerRadius);
          j["outerRadius"] = number(n.outerRadius);
          j["inner"] = map_to_json(n.inner);
          j["outer"] = map_to_json(n.outer);
        } else if constexpr (std::is_same_v<T, ComposeNode>) {
          Json stages = Json::array();
          for (const auto& s : n.stages) stages.push_back(map_to_json(s));
          j["stages"] = stages;
        }
      },
      node.value);
  return j;
}

SmoothMap map_from_json(const Json& j) {
  try {
    const int d = field(j, "dimension").get<int>();
    if (d < 1) parse_fail("bad map dimension");
    const std::string kind = field(j, "kind").get<std::string>();
    auto child = [&](const Json& c) {
      SmoothMap m = map_from_json(c);
      if (m.dimension() != d) parse_fail("submap dimension mismatch");
      return m;
    };
    if (kind == "identity") return nodes::identity(d);
    if (kind == "motion") {
      const Json& m = field(j, "motion");
      return nodes::motion(EuclideanMotion(mat_from_json(field(m, "linear"), d, d),
                                           vec_from_json(field(m, "translation"), d)));
    }
    if (kind == "slow_twist") {
      SlowTwistNode n{vec_from_json(field(j, "center"), d), parse_number(field(j, "r1")),
                      parse_number(field(j, "r2")), factorization_from_json(field(j, "rotation"), d),
                      profile_from_json(field(j, "profile"))};
      return nodes::slow_twist(std::move(n), parse_number(field(j, "budget")));
    }
    if (kind == "slide") {
      SlideNode n{vec_from_json(field(j, "center"), d), vec_from_json(field(j, "translation"), d),
                  parse_number(field(j, "r1")), parse_number(field(j, "r2")), profile_from_json(field(j, "profile"))};
      return nodes::slide(std::move(n), parse_number(field(j, "budget")));
    }
    if (kind == "ball_patch") {
      std::vector<PatchBall> balls;
      for (const auto& b : field(j, "balls"))
        balls.push_back({vec_from_json(field(b, "center"), d), parse_number(field(b, "radius")), child(field(b, "map"))});
      return nodes::ball_patch(d, std::move(balls));
    }
    if (kind == "radial_glue") {
      return nodes::radial_glue(RadialGlueNode{vec_from_json(field(j, "center"), d),
                                               parse_number(field(j, "innerRadius")),
                                               parse_number(field(j, "outerRadius")), child(field(j, "inner")),
                                               child(field(j, "outer"))});
    }
    if (kind == "compose") {
      std::vector<SmoothMap> stages;
      for (const auto& s : field(j, "stages")) stages.push_back(child(s));
      return nodes::compose(d, std::move(stages));
    }
    parse_fail("unknown map kind '" + kind + "'");
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Parse) throw;
    throw Error(ErrorKind::Parse, std::string("invalid map: ") + e.what());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("invalid map: ") + e.what());
  }
}

Json certification_to_json(const CertificationReport& r) {
  Json extremes = Json::array(), failures = Json::array();
  for (const auto& w : r.extremes) extremes.push_back(witness_to_json(w));
  for (const auto& w : r.failures) failures.push_back(witness_to_json(w));
  return Json{{"epsilon", number(r.epsilon)},
              {"seed", r.seed},
              {"pairSamples", r.pairSamples},
              {"jacobianSamples", r.jacobianSamples},
              {"supportSamples", r.supportSamples},
              {"worstRatioHigh", number(r.worstRatioHigh)},
              {"worstRatioLow", number(r.worstRatioLow)},
              {"singularValueRange", Json::array({number(r.singularValueRange.first),
                                                  number(r.singularValueRange.second)})},
              {"interpolationResidual", number(r.interpolationResidual)},
              {"supportResidual", number(r.supportResidual)},
              {"certifiedEpsilon", number(r.certifiedEpsilon)},
              {"verdict", r.pass ? "pass" : "fail"},
              {"extremes", extremes},
              {"failures", failures}};
}

Json params_to_json(const ExtensionParams& p) {
  return Json{{"epsilon", number(p.epsilon)},       {"deltaMax", number(p.deltaMax)},
              {"lambda", number(p.lambda)},         {"m", p.m},
              {"deltaPrime", number(p.deltaPrime)}, {"maxDepth", p.maxDepth},
              {"slowness", number(p.slowness)}};
}

Json trace_to_json(const ExtensionTrace& t) {
  Json children = Json::array();
  for (const auto& c : t.children) children.push_back(trace_to_json(c));
  return Json{{"labels", t.labels},
              {"depth", t.depth},
              {"scaleExponent", t.scaleExponent},
              {"clusters", t.clusters},
              {"diameter", number(t.diameter)},
              {"rotationAngle", number(t.rotationAngle)},
              {"alignmentResidual", number(t.alignmentResidual)},
              {"moverLimit", number(t.moverLimit)},
              {"truncationRadius", number(t.truncationRadius)},
              {"supportRadius", number(t.supportRadius)},
              {"children", children}};
}

Json obstruction_to_json(const ObstructionReport& r, const PointConfig& y) {
  Json simplices = Json::array();
  for (const auto& s : r.simplices) {
    Json labels = Json::array();
    for (auto i : s.indices) labels.push_back(y.label(i));
    simplices.push_back(Json{{"labels", labels}, {"volume", number(s.volume)}, {"ySign", s.ySign}, {"zSign", s.zSign}});
  }
  return Json{{"verdict", r.conflict ? "CONFLICT" : "CONSISTENT"},
              {"volumeThreshold", number(r.volumeThreshold)},
              {"preserving", r.preserving},
              {"reversing", r.reversing},
              {"simplices", simplices}};
}

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Parse, "cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return Json::parse(buf.str());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Parse, path + ": " + e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

void write_json(const std::string& path, const Json& j) { write_text(path, j.dump(2) + "\n"); }

}  // namespace isoextend
