#pragma once

// Parametric surface patches, thickness profiles, and quadrature over the
// surface and through the shell thickness.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "shellgamma/errors.hpp"
#include "shellgamma/gauss_legendre.hpp"
#include "shellgamma/types.hpp"

namespace shellgamma {

/// Closed parameter rectangle [lo, hi].
struct ParamBox {
  Vec2 lo = Vec2::Zero();
  Vec2 hi = Vec2::Ones();

  Vec2 extent() const { return hi - lo; }
  double diameter() const { return extent().norm(); }
  bool contains(const Vec2& u, double margin = 0.0) const {
    return (u.array() >= lo.array() + margin).all() &&
           (u.array() <= hi.array() - margin).all();
  }
};

/// Chart value with analytic derivatives up to order two, and the unit
/// normal with its first and second parameter derivatives.
struct ChartData {
  Vec3 x;
  Mat32 dx;
  Hess3 ddx;
  Vec3 n;
  Mat32 dn;
  Hess3 ddn;
};

class SurfacePatch {
 public:
  using Evaluator = std::function<ChartData(const Vec2&)>;

  SurfacePatch(std::string name, ParamBox domain, Evaluator eval)
      : name_(std::move(name)), domain_(domain), eval_(std::move(eval)) {}

  const std::string& name() const { return name_; }
  const ParamBox& domain() const { return domain_; }

  ChartData evaluate(const Vec2& u) const { return eval_(u); }

  Vec3 chart(const Vec2& u) const { return eval_(u).x; }
  Mat32 chart_jacobian(const Vec2& u) const { return eval_(u).dx; }
  Vec3 normal(const Vec2& u) const { return eval_(u).n; }
  Mat2 metric(const Vec2& u) const {
    const Mat32 j = chart_jacobian(u);
    return j.transpose() * j;
  }

 private:
  std::string name_;
  ParamBox domain_;
  Evaluator eval_;
};

/// Differential-geometric quantities at one parameter point.
///
/// `frame` is the orthonormal tangent frame (e1 along the first chart
/// tangent, e2 = n x e1); 2x2 tensors handed to Q2 are expressed in it.
/// `shape` is Pi = grad n as a 3x3 map (zero on the normal).
struct SurfacePoint {
  Vec2 u;
  Vec3 x;
  Mat32 dx;
  Hess3 ddx;
  Vec3 n;
  Mat32 dn;
  Hess3 ddn;
  Mat2 metric;
  Mat2 metric_inv;
  Mat32 dual;  // contravariant basis X^i = X_j G^{ji}
  Mat32 frame;
  Mat3 shape;
  double area_element = 0.0;

  SurfacePoint() = default;

  SurfacePoint(const SurfacePatch& patch, const Vec2& param) : u(param) {
    const ChartData c = patch.evaluate(param);
    x = c.x;
    dx = c.dx;
    ddx = c.ddx;
    n = c.n;
    dn = c.dn;
    ddn = c.ddn;
    metric = dx.transpose() * dx;
    const double det = metric.determinant();
    if (!(det > 0.0) || !std::isfinite(det)) {
      throw EvaluationError("degenerate metric on patch '" + patch.name() + "'");
    }
    metric_inv = metric.inverse();
    dual = dx * metric_inv;
    area_element = std::sqrt(det);
    frame.col(0) = dx.col(0).normalized();
    frame.col(1) = n.cross(frame.col(0));
    shape = dn * dual.transpose();
  }

  /// Surface gradient (a tangent vector) of a scalar with parameter partials d.
  Vec3 tangent_gradient(const Vec2& d) const { return dual * d; }

  /// Tangential gradient of a vector field with parameter partials p, as a
  /// 3x3 map that vanishes on the normal.
  Mat3 gradient(const Mat32& p) const { return p * dual.transpose(); }

  /// Tangential minor in the orthonormal frame.
  Mat2 tangential(const Mat3& m) const { return frame.transpose() * m * frame; }

  /// Shape operator in the orthonormal frame.
  Mat2 shape_operator() const { return tangential(shape); }

  /// Chart-coordinate components of a tangent vector.
  Vec2 chart_components(const Vec3& tau) const { return dual.transpose() * tau; }

  /// Basis [X_1, X_2, n].
  Mat3 basis() const {
    Mat3 t;
    t.leftCols<2>() = dx;
    t.col(2) = n;
    return t;
  }
};

// ---------------------------------------------------------------------------
// Builtin patches

enum class PatchKind { plate, sphere_cap, cylinder, torus_patch };

inline std::string to_string(PatchKind k) {
  switch (k) {
    case PatchKind::plate: return "plate";
    case PatchKind::sphere_cap: return "sphere_cap";
    case PatchKind::cylinder: return "cylinder";
    case PatchKind::torus_patch: return "torus_patch";
  }
  return "?";
}

/// Shape parameters. Only the fields relevant to the kind are used:
///  plate:       u_min, u_max
///  sphere_cap:  radius, cap_angle; chart (polar angle, azimuth) on
///               [0, cap_angle] x [0, 2 pi]
///  cylinder:    radius, height, angle; chart (azimuth, axial) on
///               [0, angle] x [0, height]
///  torus_patch: radius (major), minor_radius, u_min, u_max; chart
///               (toroidal angle, poloidal angle)
/// The normal points outward unless flip_normal is set.
struct PatchParams {
  double radius = 1.0;
  double minor_radius = 0.25;
  double cap_angle = kPi / 2.0;
  double height = 1.0;
  double angle = 2.0 * kPi;
  std::array<double, 2> u_min{0.0, 0.0};
  std::array<double, 2> u_max{1.0, 1.0};
  bool flip_normal = false;

  bool operator==(const PatchParams&) const = default;
};

inline PatchParams default_patch_params(PatchKind kind) {
  PatchParams p;
  if (kind == PatchKind::torus_patch) {
    p.radius = 2.0;
    p.minor_radius = 0.5;
    p.u_min = {0.0, 0.0};
    p.u_max = {kPi / 2.0, kPi / 2.0};
  }
  return p;
}

namespace detail {

inline ChartData flip(ChartData c) {
  c.n = -c.n;
  c.dn = -c.dn;
  for (auto& v : c.ddn) v = -v;
  return c;
}

inline SurfacePatch with_orientation(std::string name, ParamBox box,
                                     SurfacePatch::Evaluator eval, bool flipped) {
  if (!flipped) return SurfacePatch(std::move(name), box, std::move(eval));
  return SurfacePatch(std::move(name), box,
                      [e = std::move(eval)](const Vec2& u) { return flip(e(u)); });
}

}  // namespace detail

inline SurfacePatch make_plate(const PatchParams& p) {
  const ParamBox box{Vec2(p.u_min[0], p.u_min[1]), Vec2(p.u_max[0], p.u_max[1])};
  if (!(box.hi.array() > box.lo.array()).all()) {
    throw ParameterError("plate: empty parameter rectangle");
  }
  auto eval = [](const Vec2& u) {
    ChartData c;
    c.x = Vec3(u.x(), u.y(), 0.0);
    c.dx << 1.0, 0.0, 0.0, 1.0, 0.0, 0.0;
    c.ddx = {Vec3::Zero(), Vec3::Zero(), Vec3::Zero()};
    c.n = Vec3::UnitZ();
    c.dn.setZero();
    c.ddn = {Vec3::Zero(), Vec3::Zero(), Vec3::Zero()};
    return c;
  };
  return detail::with_orientation("plate", box, eval, p.flip_normal);
}

inline SurfacePatch make_sphere_cap(const PatchParams& p) {
  // The full sphere (cap_angle = pi) is admitted; the chart poles carry no
  // quadrature nodes.
  if (!(p.radius > 0.0)) throw ParameterError("sphere_cap: radius must be > 0");
  if (!(p.cap_angle > 0.0 && p.cap_angle <= kPi)) {
    throw ParameterError("sphere_cap: cap_angle must lie in (0, pi]");
  }
  const double r = p.radius;
  const ParamBox box{Vec2(0.0, 0.0), Vec2(p.cap_angle, 2.0 * kPi)};
  auto eval = [r](const Vec2& u) {
    const double st = std::sin(u.x()), ct = std::cos(u.x());
    const double sp = std::sin(u.y()), cp = std::cos(u.y());
    ChartData c;
    const Vec3 radial(st * cp, st * sp, ct);
    c.x = r * radial;
    c.dx.col(0) = r * Vec3(ct * cp, ct * sp, -st);
    c.dx.col(1) = r * Vec3(-st * sp, st * cp, 0.0);
    c.ddx[0] = -c.x;
    c.ddx[1] = r * Vec3(-ct * sp, ct * cp, 0.0);
    c.ddx[2] = r * Vec3(-st * cp, -st * sp, 0.0);
    c.n = radial;
    c.dn = c.dx / r;
    c.ddn = {c.ddx[0] / r, c.ddx[1] / r, c.ddx[2] / r};
    return c;
  };
  return detail::with_orientation("sphere_cap", box, eval, p.flip_normal);
}

inline SurfacePatch make_cylinder(const PatchParams& p) {
  if (!(p.radius > 0.0)) throw ParameterError("cylinder: radius must be > 0");
  if (!(p.height > 0.0)) throw ParameterError("cylinder: height must be > 0");
  if (!(p.angle > 0.0 && p.angle <= 2.0 * kPi)) {
    throw ParameterError("cylinder: angle must lie in (0, 2 pi]");
  }
  const double r = p.radius;
  const ParamBox box{Vec2(0.0, 0.0), Vec2(p.angle, p.height)};
  auto eval = [r](const Vec2& u) {
    const double s = std::sin(u.x()), c0 = std::cos(u.x());
    ChartData c;
    c.x = Vec3(r * c0, r * s, u.y());
    c.dx.col(0) = Vec3(-r * s, r * c0, 0.0);
    c.dx.col(1) = Vec3::UnitZ();
    c.ddx = {Vec3(-r * c0, -r * s, 0.0), Vec3::Zero(), Vec3::Zero()};
    c.n = Vec3(c0, s, 0.0);
    c.dn.col(0) = Vec3(-s, c0, 0.0);
    c.dn.col(1) = Vec3::Zero();
    c.ddn = {Vec3(-c0, -s, 0.0), Vec3::Zero(), Vec3::Zero()};
    return c;
  };
  return detail::with_orientation("cylinder", box, eval, p.flip_normal);
}

inline SurfacePatch make_torus_patch(const PatchParams& p) {
  const double a = p.radius;
  const double b = p.minor_radius;
  if (!(a > 0.0 && b > 0.0 && b < a)) {
    throw ParameterError("torus_patch: need 0 < minor_radius < radius");
  }
  const ParamBox box{Vec2(p.u_min[0], p.u_min[1]), Vec2(p.u_max[0], p.u_max[1])};
  if (!(box.hi.array() > box.lo.array()).all()) {
    throw ParameterError("torus_patch: empty parameter rectangle");
  }
  auto eval = [a, b](const Vec2& u) {
    const double st = std::sin(u.x()), ct = std::cos(u.x());
    const double sf = std::sin(u.y()), cf = std::cos(u.y());
    const double rho = a + b * cf;
    ChartData c;
    c.x = Vec3(rho * ct, rho * st, b * sf);
    c.dx.col(0) = Vec3(-rho * st, rho * ct, 0.0);
    c.dx.col(1) = Vec3(-b * sf * ct, -b * sf * st, b * cf);
    c.ddx[0] = Vec3(-rho * ct, -rho * st, 0.0);
    c.ddx[1] = Vec3(b * sf * st, -b * sf * ct, 0.0);
    c.ddx[2] = Vec3(-b * cf * ct, -b * cf * st, -b * sf);
    c.n = Vec3(cf * ct, cf * st, sf);
    c.dn.col(0) = Vec3(-cf * st, cf * ct, 0.0);
    c.dn.col(1) = Vec3(-sf * ct, -sf * st, cf);
    c.ddn[0] = Vec3(-cf * ct, -cf * st, 0.0);
    c.ddn[1] = Vec3(sf * st, -sf * ct, 0.0);
    c.ddn[2] = Vec3(-cf * ct, -cf * st, -sf);
    return c;
  };
  return detail::with_orientation("torus_patch", box, eval, p.flip_normal);
}

inline SurfacePatch make_builtin_patch(PatchKind kind, const PatchParams& params) {
  switch (kind) {
    case PatchKind::plate: return make_plate(params);
    case PatchKind::sphere_cap: return make_sphere_cap(params);
    case PatchKind::cylinder: return make_cylinder(params);
    case PatchKind::torus_patch: return make_torus_patch(params);
  }
  throw ParameterError("unknown patch kind");
}

inline SurfacePatch make_builtin_patch(PatchKind kind) {
  return make_builtin_patch(kind, default_patch_params(kind));
}

// ---------------------------------------------------------------------------
// Shape operator cross-check and offset map

/// Central-difference estimate of grad n at u, in the orthonormal frame.
inline Mat2 shape_operator_fd(const SurfacePatch& patch, const Vec2& u, double step) {
  if (!(step > 0.0)) throw ParameterError("shape_operator_fd: step must be > 0");
  if (!patch.domain().contains(u, step)) {
    throw DomainError("shape_operator_fd: point closer than one step to the chart boundary");
  }
  const SurfacePoint sp(patch, u);
  Mat32 dn;
  for (int i = 0; i < 2; ++i) {
    Vec2 e = Vec2::Zero();
    e(i) = step;
    dn.col(i) = (patch.normal(u + e) - patch.normal(u - e)) / (2.0 * step);
  }
  return sp.tangential(dn * sp.dual.transpose());
}

inline double default_fd_step(const SurfacePatch& patch) {
  return 1e-4 * patch.domain().diameter();
}

struct OffsetJacobian {
  Mat3 map;  // Id + t Pi (identity on the normal)
  double det = 1.0;
};

inline OffsetJacobian offset_jacobian(const SurfacePoint& sp, double t) {
  OffsetJacobian out;
  out.map = Mat3::Identity() + t * sp.shape;
  const Mat2 m = Mat2::Identity() + t * sp.shape_operator();
  out.det = m.determinant();
  // Both factors 1 + t k_i must be positive; det > 0 alone admits a double
  // sign flip past the focal surface.
  const double lo = Eigen::SelfAdjointEigenSolver<Mat2>(sym(m), Eigen::EigenvaluesOnly)
                        .eigenvalues()
                        .minCoeff();
  if (!(out.det > 0.0) || !(lo > 0.0)) {
    throw ThicknessTooLargeError("offset_jacobian: Id + t Pi degenerate at offset t = " +
                                 std::to_string(t));
  }
  return out;
}

inline OffsetJacobian offset_jacobian(const SurfacePatch& patch, const Vec2& u, double t) {
  return offset_jacobian(SurfacePoint(patch, u), t);
}

// ---------------------------------------------------------------------------
// Scalar fields on the parameter domain (thickness profiles)

/// sin(pi k1 u1 + p1) sin(pi k2 u2 + p2), scaled by an amplitude.
struct TrigMode {
  double amplitude = 1.0;
  std::array<double, 2> k{1.0, 1.0};
  std::array<double, 2> phase{0.0, 0.0};

  bool operator==(const TrigMode&) const = default;

  // Returns value, gradient and Hessian of the unscaled product.
  struct Jet {
    double value;
    Vec2 grad;
    Mat2 hess;
  };

  Jet jet(const Vec2& u) const {
    const double a1 = kPi * k[0], a2 = kPi * k[1];
    const double s1 = std::sin(a1 * u.x() + phase[0]), c1 = std::cos(a1 * u.x() + phase[0]);
    const double s2 = std::sin(a2 * u.y() + phase[1]), c2 = std::cos(a2 * u.y() + phase[1]);
    Jet j;
    j.value = s1 * s2;
    j.grad = Vec2(a1 * c1 * s2, a2 * s1 * c2);
    j.hess << -a1 * a1 * s1 * s2, a1 * a2 * c1 * c2,  //
        a1 * a2 * c1 * c2, -a2 * a2 * s1 * s2;
    return j;
  }
};

struct ScalarField {
  std::function<double(const Vec2&)> value;
  std::function<Vec2(const Vec2&)> gradient;  // parameter partials
  std::function<Mat2(const Vec2&)> hessian;
};

/// c + l . u + sum_m a_m mode_m(u)
inline ScalarField trig_scalar_field(double constant, Vec2 linear, std::vector<TrigMode> modes) {
  auto ms = std::make_shared<const std::vector<TrigMode>>(std::move(modes));
  ScalarField f;
  f.value = [=](const Vec2& u) {
    double v = constant + linear.dot(u);
    for (const auto& m : *ms) v += m.amplitude * m.jet(u).value;
    return v;
  };
  f.gradient = [=](const Vec2& u) {
    Vec2 g = linear;
    for (const auto& m : *ms) g += m.amplitude * m.jet(u).grad;
    return g;
  };
  f.hessian = [=](const Vec2& u) {
    Mat2 h = Mat2::Zero();
    for (const auto& m : *ms) h += m.amplitude * m.jet(u).hess;
    return h;
  };
  return f;
}

inline ScalarField constant_field(double c) { return trig_scalar_field(c, Vec2::Zero(), {}); }

/// Shell profile: the body is {x + t n(x), -h g1(x) < t < h g2(x)}.
struct ThicknessPair {
  ScalarField g1;
  ScalarField g2;
  double lipschitz_bound = 0.0;

  double total(const Vec2& u) const { return g1.value(u) + g2.value(u); }
  double difference(const Vec2& u) const { return g2.value(u) - g1.value(u); }
  Vec2 difference_gradient(const Vec2& u) const { return g2.gradient(u) - g1.gradient(u); }
  Mat2 difference_hessian(const Vec2& u) const { return g2.hessian(u) - g1.hessian(u); }
};

inline ThicknessPair make_thickness(ScalarField g1, ScalarField g2, double lipschitz_bound) {
  return ThicknessPair{std::move(g1), std::move(g2), lipschitz_bound};
}

inline ThicknessPair constant_thickness(double g1, double g2) {
  return make_thickness(constant_field(g1), constant_field(g2), 0.0);
}

// ---------------------------------------------------------------------------
// Quadrature

struct SurfaceNode {
  SurfacePoint geo;
  double weight = 0.0;  // includes the area element
};

struct SurfaceQuadrature {
  std::vector<SurfaceNode> nodes;
  int order = 0;
};

/// Tensor Gauss-Legendre rule on the chart rectangle.
inline SurfaceQuadrature make_surface_quadrature(const SurfacePatch& patch, int order) {
  const GaussRule1D g = gauss_legendre(order);
  const ParamBox& box = patch.domain();
  const Vec2 half = 0.5 * box.extent();
  const Vec2 mid = 0.5 * (box.lo + box.hi);
  SurfaceQuadrature q;
  q.order = order;
  q.nodes.reserve(static_cast<std::size_t>(order) * order);
  for (int i = 0; i < order; ++i) {
    for (int j = 0; j < order; ++j) {
      const Vec2 u(mid.x() + half.x() * g.nodes[i], mid.y() + half.y() * g.nodes[j]);
      SurfaceNode node{SurfacePoint(patch, u), 0.0};
      node.weight = g.weights[i] * g.weights[j] * half.x() * half.y() * node.geo.area_element;
      q.nodes.push_back(std::move(node));
    }
  }
  return q;
}

// Order 20 keeps eval_I within 1e-8 of order 24 on the builtin examples,
// including tilted rotations over a full azimuth.
inline constexpr int kDefaultSurfaceOrder = 20;
inline constexpr int kDefaultTransversalOrder = 4;

struct TransversalNode {
  double t;
  double weight;
};

/// Per surface node, a Gauss rule on (-g1(x), g2(x)).
struct TransversalRule {
  std::vector<std::vector<TransversalNode>> nodes;
  int order = 0;
};

inline TransversalRule make_transversal_rule(const SurfaceQuadrature& squad,
                                             const ThicknessPair& thick, int order) {
  const GaussRule1D g = gauss_legendre(order);
  TransversalRule rule;
  rule.order = order;
  rule.nodes.reserve(squad.nodes.size());
  for (const auto& sn : squad.nodes) {
    const double lo = -thick.g1.value(sn.geo.u);
    const double hi = thick.g2.value(sn.geo.u);
    const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
    std::vector<TransversalNode> col;
    col.reserve(order);
    for (int k = 0; k < order; ++k) col.push_back({mid + half * g.nodes[k], half * g.weights[k]});
    rule.nodes.push_back(std::move(col));
  }
  return rule;
}

/// Checks g1, g2 > 0 and the declared Lipschitz bound at every quadrature node.
inline void validate_thickness(const ThicknessPair& thick, const SurfaceQuadrature& squad) {
  for (const auto& sn : squad.nodes) {
    const Vec2& u = sn.geo.u;
    if (!(thick.g1.value(u) > 0.0)) throw ParameterError("thickness: g1 must be positive");
    if (!(thick.g2.value(u) > 0.0)) throw ParameterError("thickness: g2 must be positive");
    const double l1 = sn.geo.tangent_gradient(thick.g1.gradient(u)).norm();
    const double l2 = sn.geo.tangent_gradient(thick.g2.gradient(u)).norm();
    if (std::max(l1, l2) > thick.lipschitz_bound * (1.0 + 1e-12) + 1e-14) {
      throw ParameterError("thickness: surface gradient exceeds the declared lipschitz bound");
    }
  }
}

/// Largest surface-gradient norm of g1, g2 over the quadrature nodes.
inline double measured_lipschitz(const ThicknessPair& thick, const SurfaceQuadrature& squad) {
  double l = 0.0;
  for (const auto& sn : squad.nodes) {
    l = std::max(l, sn.geo.tangent_gradient(thick.g1.gradient(sn.geo.u)).norm());
    l = std::max(l, sn.geo.tangent_gradient(thick.g2.gradient(sn.geo.u)).norm());
  }
  return l;
}

/// Quadrature of a scalar field f(const SurfacePoint&) over the patch.
template <class F>
double integrate_surface(const SurfaceQuadrature& quad, F&& f) {
  double sum = 0.0;
  for (const auto& node : quad.nodes) {
    const double v = f(node.geo);
    if (!std::isfinite(v)) {
      throw EvaluationError("integrate_surface: non-finite field value at node (" +
                            std::to_string(node.geo.u.x()) + ", " +
                            std::to_string(node.geo.u.y()) + ")");
    }
    sum += node.weight * v;
  }
  return sum;
}

}  // namespace shellgamma
