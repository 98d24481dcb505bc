#include "isoextend/smooth_map.hpp"

#include <cmath>
#include <limits>

#include "isoextend/errors.hpp"

namespace isoextend {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr int kNewtonIterations = 100;

XMat identity_x(int d) { return XMat::Identity(d, d); }

// Rotation part of a slow twist at radius r, and its radial derivative.
struct TwistFrame {
  XMat rotation;    // R B R^T
  XMat derivative;  // d/dr of the above
};

TwistFrame twist_frame(const SlowTwistNode& n, Real r, bool wantDerivative) {
  const int d = static_cast<int>(n.center.size());
  Real frac = 1, dfrac = 0;
  if (r > Real(n.r1)) {
    const Real logRatio = std::log(Real(n.r2) / Real(n.r1));
    const Real u = std::log(r / Real(n.r1)) / logRatio;
    frac = smooth_step(u);
    dfrac = smooth_step_derivative(u) / (r * logRatio);
  }
  XMat b = identity_x(d);
  XMat bp = XMat::Zero(d, d);
  for (std::size_t j = 0; j < n.rotation.angles.size(); ++j) {
    const Real theta = n.rotation.angles[j];
    const Real a = theta * frac;
    const Real c = std::cos(a), s = std::sin(a);
    const auto i = static_cast<Eigen::Index>(2 * j);
    b(i, i) = c;
    b(i, i + 1) = -s;
    b(i + 1, i) = s;
    b(i + 1, i + 1) = c;
    if (wantDerivative) {
      const Real g = theta * dfrac;
      bp(i, i) = -s * g;
      bp(i, i + 1) = -c * g;
      bp(i + 1, i) = c * g;
      bp(i + 1, i + 1) = -s * g;
    }
  }
  const XMat frame = n.rotation.frame.cast<Real>();
  TwistFrame out;
  out.rotation = frame * b * frame.transpose();
  if (wantDerivative) out.derivative = frame * bp * frame.transpose();
  return out;
}

XVec apply(const SmoothMap& map, const XVec& x, XMat* jac);

XVec apply_twist(const SlowTwistNode& n, const XVec& x, XMat* jac) {
  const int d = static_cast<int>(x.size());
  const XVec v = x - n.center.cast<Real>();
  const Real r = v.norm();
  if (r >= Real(n.r2)) {
    if (jac) *jac = identity_x(d);
    return x;
  }
  const bool annulus = r > Real(n.r1);
  const TwistFrame f = twist_frame(n, r, jac != nullptr && annulus);
  const XVec mv = f.rotation * v;
  if (jac) {
    *jac = f.rotation;
    if (annulus) *jac += (f.derivative * v) * (v / r).transpose();
  }
  return n.center.cast<Real>() + mv;
}

XVec apply_slide(const SlideNode& n, const XVec& x, XMat* jac) {
  const int d = static_cast<int>(x.size());
  const XVec v = x - n.center.cast<Real>();
  const Real r = v.norm();
  const XVec t = n.translation.cast<Real>();
  if (r >= Real(n.r2)) {
    if (jac) *jac = identity_x(d);
    return x;
  }
  if (r <= Real(n.r1)) {
    if (jac) *jac = identity_x(d);
    return x + t;
  }
  const Real width = Real(n.r2) - Real(n.r1);
  const Real u = (r - Real(n.r1)) / width;
  if (jac) *jac = identity_x(d) + t * ((smooth_step_derivative(u) / width) * (v / r)).transpose();
  return x + smooth_step(u) * t;
}

XVec apply(const SmoothMap& map, const XVec& x, XMat* jac) {
  const int d = map.dimension();
  return std::visit(
      overloaded{
          [&](const IdentityNode&) -> XVec {
            if (jac) *jac = identity_x(d);
            return x;
          },
          [&](const MotionNode& n) -> XVec {
            const XMat q = n.motion.linear().cast<Real>();
            if (jac) *jac = q;
            return q * x + n.motion.translation().cast<Real>();
          },
          [&](const SlowTwistNode& n) -> XVec { return apply_twist(n, x, jac); },
          [&](const SlideNode& n) -> XVec { return apply_slide(n, x, jac); },
          [&](const BallPatchNode& n) -> XVec {
            for (const auto& ball : n.balls) {
              if ((x - ball.center.cast<Real>()).norm() <= Real(ball.radius)) return apply(ball.map, x, jac);
            }
            if (jac) *jac = identity_x(d);
            return x;
          },
          [&](const RadialGlueNode& n) -> XVec {
            const Real r = (x - n.center.cast<Real>()).norm();
            return apply(r <= Real(n.switch_radius()) ? n.inner : n.outer, x, jac);
          },
          [&](const ComposeNode& n) -> XVec {
            XVec cur = x;
            if (jac) *jac = identity_x(d);
            XMat step;
            for (const auto& stage : n.stages) {
              cur = apply(stage, cur, jac ? &step : nullptr);
              if (jac) *jac = step * (*jac);
            }
            return cur;
          },
      },
      map.node().value);
}

XVec invert_slide(const SlideNode& n, const XVec& y) {
  const XVec c = n.center.cast<Real>();
  const XVec t = n.translation.cast<Real>();
  if ((y - c).norm() >= Real(n.r2)) return y;
  const XVec plateau = y - t;
  if ((plateau - c).norm() <= Real(n.r1)) return plateau;

  const Real scale = std::max<Real>(1, y.norm());
  const Real tol = Real(1e-15) * scale;
  XVec x = y;
  XMat jac;
  XVec fx = apply_slide(n, x, &jac) - y;
  Real res = fx.norm();
  for (int it = 0; it < kNewtonIterations && res > tol; ++it) {
    // J = I + t g^T, inverted by Sherman-Morrison.
    const XVec g = (jac - identity_x(static_cast<int>(y.size()))).transpose() * t / std::max(t.squaredNorm(), Real(1e-300));
    const XVec step = fx - t * (g.dot(fx) / (Real(1) + g.dot(t)));
    Real damping = 1;
    for (int ls = 0; ls < 40; ++ls) {
      const XVec trial = x - damping * step;
      XMat trialJac;
      const XVec ft = apply_slide(n, trial, &trialJac) - y;
      if (ft.norm() < res || ls == 39) {
        x = trial;
        fx = ft;
        jac = trialJac;
        res = ft.norm();
        break;
      }
      damping /= 2;
    }
  }
  if (!(res <= Real(1e-9) * scale)) {
    throw Error(ErrorKind::NumericalInversion, "slide inversion did not converge", static_cast<double>(res));
  }
  return x;
}

XVec invert(const SmoothMap& map, const XVec& y) {
  return std::visit(
      overloaded{
          [&](const IdentityNode&) -> XVec { return y; },
          [&](const MotionNode& n) -> XVec {
            const XMat q = n.motion.linear().cast<Real>();
            return q.transpose() * (y - n.motion.translation().cast<Real>());
          },
          [&](const SlowTwistNode& n) -> XVec {
            // Twists preserve |x - c|, so the frame at |y - c| is the one used.
            const XVec w = y - n.center.cast<Real>();
            const Real r = w.norm();
            if (r >= Real(n.r2)) return y;
            return n.center.cast<Real>() + twist_frame(n, r, false).rotation.transpose() * w;
          },
          [&](const SlideNode& n) -> XVec { return invert_slide(n, y); },
          [&](const BallPatchNode& n) -> XVec {
            for (const auto& ball : n.balls) {
              if ((y - ball.center.cast<Real>()).norm() <= Real(ball.radius)) return invert(ball.map, y);
            }
            return y;
          },
          [&](const RadialGlueNode& n) -> XVec {
            const XVec c = n.center.cast<Real>();
            const XVec x = invert(n.inner, y);
            if ((x - c).norm() <= Real(n.switch_radius())) return x;
            return invert(n.outer, y);
          },
          [&](const ComposeNode& n) -> XVec {
            XVec cur = y;
            for (auto it = n.stages.rbegin(); it != n.stages.rend(); ++it) cur = invert(*it, cur);
            return cur;
          },
      },
      map.node().value);
}

}  // namespace

const char* to_string(MapKind kind) {
  switch (kind) {
    case MapKind::Identity: return "identity";
    case MapKind::Motion: return "motion";
    case MapKind::SlowTwist: return "slow_twist";
    case MapKind::Slide: return "slide";
    case MapKind::BallPatch: return "ball_patch";
    case MapKind::RadialGlue: return "radial_glue";
    case MapKind::Compose: return "compose";
  }
  return "unknown";
}

SmoothMap::SmoothMap(int dimension, double budget, std::shared_ptr<const MapNode> node)
    : dimension_(dimension), budget_(budget), node_(std::move(node)) {}

MapKind SmoothMap::kind() const { return static_cast<MapKind>(node_->value.index()); }

Vec SmoothMap::eval(const Vec& x) const { return narrow(apply(*this, extend(x), nullptr)); }

XVec SmoothMap::eval_extended(const XVec& x) const { return apply(*this, x, nullptr); }

Mat SmoothMap::jacobian(const Vec& x) const {
  XMat j;
  apply(*this, extend(x), &j);
  return j.cast<double>();
}

XMat SmoothMap::jacobian_extended(const XVec& x, XVec* value) const {
  XMat j;
  XVec y = apply(*this, x, &j);
  if (value) *value = std::move(y);
  return j;
}

Vec SmoothMap::inverse_eval(const Vec& y) const { return narrow(invert(*this, extend(y))); }

XVec SmoothMap::inverse_extended(const XVec& y) const { return invert(*this, y); }

double SmoothMap::support_radius(const Vec& center) const {
  constexpr double inf = std::numeric_limits<double>::infinity();
  return std::visit(
      overloaded{
          [&](const IdentityNode&) { return 0.0; },
          [&](const MotionNode& n) {
            const int d = dimension_;
            const bool trivial = (n.motion.linear() - Mat::Identity(d, d)).norm() == 0.0 &&
                                 n.motion.translation().norm() == 0.0;
            return trivial ? 0.0 : inf;
          },
          [&](const SlowTwistNode& n) { return (n.center - center).norm() + n.r2; },
          [&](const SlideNode& n) { return (n.center - center).norm() + n.r2; },
          [&](const BallPatchNode& n) {
            double r = 0.0;
            for (const auto& ball : n.balls) r = std::max(r, (ball.center - center).norm() + ball.radius);
            return r;
          },
          [&](const RadialGlueNode& n) {
            return std::max((n.center - center).norm() + n.switch_radius(), n.outer.support_radius(center));
          },
          [&](const ComposeNode& n) {
            double r = 0.0;
            for (const auto& stage : n.stages) r = std::max(r, stage.support_radius(center));
            return r;
          },
      },
      node_->value);
}

void SmoothMap::collect_features(std::vector<MapFeature>& out) const {
  std::visit(overloaded{
                 [&](const IdentityNode&) {},
                 [&](const MotionNode&) {},
                 [&](const SlowTwistNode& n) { out.push_back({n.center, n.r1, n.r2}); },
                 [&](const SlideNode& n) { out.push_back({n.center, n.r1, n.r2}); },
                 [&](const BallPatchNode& n) {
                   for (const auto& ball : n.balls) {
                     out.push_back({ball.center, ball.radius, ball.radius});
                     ball.map.collect_features(out);
                   }
                 },
                 [&](const RadialGlueNode& n) {
                   out.push_back({n.center, n.innerRadius, n.outerRadius});
                   out.push_back({n.center, n.switch_radius(), n.switch_radius()});
                   n.inner.collect_features(out);
                   n.outer.collect_features(out);
                 },
                 [&](const ComposeNode& n) {
                   // Features of later stages live in the output coordinates of
                   // earlier ones; pull their centers back.
                   for (std::size_t k = 0; k < n.stages.size(); ++k) {
                     std::vector<MapFeature> local;
                     n.stages[k].collect_features(local);
                     for (auto& f : local) {
                       try {
                         XVec c = extend(f.center);
                         for (std::size_t j = k; j-- > 0;) c = n.stages[j].inverse_extended(c);
                         f.center = narrow(c);
                       } catch (const Error&) {
                       }
                       out.push_back(std::move(f));
                     }
                   }
                 },
             },
             node_->value);
}

namespace nodes {

namespace {
SmoothMap wrap(int dimension, double budget, MapNode node) {
  return SmoothMap(dimension, budget, std::make_shared<const MapNode>(std::move(node)));
}
}  // namespace

SmoothMap identity(int dimension) { return wrap(dimension, 0.0, MapNode{IdentityNode{}}); }

SmoothMap motion(EuclideanMotion m) {
  const int d = m.dimension();
  return wrap(d, 0.0, MapNode{MotionNode{std::move(m)}});
}

SmoothMap slow_twist(SlowTwistNode n, double budget) {
  const int d = static_cast<int>(n.center.size());
  return wrap(d, budget, MapNode{std::move(n)});
}

SmoothMap slide(SlideNode n, double budget) {
  const int d = static_cast<int>(n.center.size());
  return wrap(d, budget, MapNode{std::move(n)});
}

SmoothMap ball_patch(int dimension, std::vector<PatchBall> balls) {
  double budget = 0.0;
  for (const auto& b : balls) budget = std::max(budget, b.map.budget());
  return wrap(dimension, budget, MapNode{BallPatchNode{std::move(balls)}});
}

SmoothMap radial_glue(RadialGlueNode n) {
  const int d = static_cast<int>(n.center.size());
  const double budget = std::max(n.inner.budget(), n.outer.budget());
  return wrap(d, budget, MapNode{std::move(n)});
}

SmoothMap compose(int dimension, std::vector<SmoothMap> stages) {
  double growth = 1.0;
  for (const auto& s : stages) growth *= 1.0 + s.budget();
  return wrap(dimension, growth - 1.0, MapNode{ComposeNode{std::move(stages)}});
}

}  // namespace nodes

}  // namespace isoextend
