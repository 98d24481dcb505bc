#pragma once

#include <memory>
#include <variant>
#include <vector>

#include "isoextend/geometry.hpp"
#include "isoextend/transition.hpp"

namespace isoextend {

// Evaluation runs in extended precision so that short-range difference
// quotients taken by the certifier are not swamped by roundoff.
using Real = long double;
using XVec = Eigen::Matrix<Real, Eigen::Dynamic, 1>;
using XMat = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;

enum class MapKind { Identity, Motion, SlowTwist, Slide, BallPatch, RadialGlue, Compose };

const char* to_string(MapKind kind);

struct MapNode;

// A sphere or annulus about `center` where a node changes behavior.
struct MapFeature {
  Vec center;
  double inner = 0.0;
  double outer = 0.0;
};

// Immutable composition tree of diffeomorphisms of R^D. Copies share nodes.
class SmoothMap {
 public:
  SmoothMap(int dimension, double budget, std::shared_ptr<const MapNode> node);

  int dimension() const noexcept { return dimension_; }
  // Declared distortion budget; compositions multiply (1 + eps).
  double budget() const noexcept { return budget_; }
  MapKind kind() const;
  const MapNode& node() const noexcept { return *node_; }

  Vec operator()(const Vec& x) const { return eval(x); }
  Vec eval(const Vec& x) const;
  XVec eval_extended(const XVec& x) const;
  Mat jacobian(const Vec& x) const;
  XMat jacobian_extended(const XVec& x, XVec* value = nullptr) const;

  // Preimage of y. Structural where exact; slides use damped Newton.
  Vec inverse_eval(const Vec& y) const;
  XVec inverse_extended(const XVec& y) const;

  // Radius about `center` outside of which the map is the identity; +inf
  // when the map has no compact support (nontrivial motions).
  double support_radius(const Vec& center) const;

  void collect_features(std::vector<MapFeature>& out) const;

 private:
  int dimension_;
  double budget_;
  std::shared_ptr<const MapNode> node_;
};

struct IdentityNode {};

struct MotionNode {
  EuclideanMotion motion;
};

// x -> c + R B(f(|x-c|)) R^T (x - c) with per-plane angles theta_j * s(u),
// u = ln(r / r1) / ln(r2 / r1): the rotation on |x-c| <= r1, identity beyond r2.
struct SlowTwistNode {
  Vec center;
  double r1;
  double r2;
  RotationFactorization rotation;
  TransitionProfile profile;
};

// x -> x + s((|x-c| - r1) / (r2 - r1)) * translation.
struct SlideNode {
  Vec center;
  Vec translation;
  double r1;
  double r2;
  TransitionProfile profile;
};

struct PatchBall {
  Vec center;
  double radius;
  SmoothMap map;
};

// Each submap on its closed ball, identity elsewhere.
struct BallPatchNode {
  std::vector<PatchBall> balls;
};

// `inner` on |x-c| <= (rInner + rOuter) / 2, `outer` beyond; the two agree on
// the annulus rInner <= |x-c| <= rOuter.
struct RadialGlueNode {
  Vec center;
  double innerRadius;
  double outerRadius;
  SmoothMap inner;
  SmoothMap outer;

  double switch_radius() const { return 0.5 * (innerRadius + outerRadius); }
};

// Stages applied first to last.
struct ComposeNode {
  std::vector<SmoothMap> stages;
};

struct MapNode {
  std::variant<IdentityNode, MotionNode, SlowTwistNode, SlideNode, BallPatchNode, RadialGlueNode, ComposeNode> value;
};

// Raw node factories; no precondition checks (see diffeo.hpp for the
// validated constructors).
namespace nodes {
SmoothMap identity(int dimension);
SmoothMap motion(EuclideanMotion m);
SmoothMap slow_twist(SlowTwistNode n, double budget);
SmoothMap slide(SlideNode n, double budget);
SmoothMap ball_patch(int dimension, std::vector<PatchBall> balls);
SmoothMap radial_glue(RadialGlueNode n);
SmoothMap compose(int dimension, std::vector<SmoothMap> stages);
}  // namespace nodes

inline XVec extend(const Vec& v) { return v.cast<Real>(); }
inline Vec narrow(const XVec& v) { return v.cast<double>(); }

}  // namespace isoextend
