#pragma once

// Dead loads: thickness extension of surface forces, the rotation-maximized
// action m^h, the total energy J^h, and the maximizer set of the linear
// action for loads scaled as h sqrt(e^h) f with g1 = g2.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <string>

#include <Eigen/Geometry>
#include <Eigen/SVD>

#include "shellgamma/errors.hpp"
#include "shellgamma/geometry.hpp"
#include "shellgamma/limit2d.hpp"
#include "shellgamma/recovery3d.hpp"

namespace shellgamma {

enum class LoadScaling { example, power };

/// f^h(x) = scale(h, e^h) f(x) on S. The `example` scaling is h sqrt(e^h);
/// `power` is h^exponent.
struct LoadField {
  SurfaceLoad f;
  LoadScaling scaling = LoadScaling::example;
  double exponent = 0.0;

  double scale(double h, double e_h) const {
    return scaling == LoadScaling::example ? h * std::sqrt(e_h) : std::pow(h, exponent);
  }
};

/// f^h(x + t n) = det(Id + t Pi(x))^{-1} f^h(x), t the physical offset.
inline Vec3 extend_load(const SurfacePatch& patch, const SurfaceLoad& f_surface, const Vec2& u,
                        double t) {
  const SurfacePoint sp(patch, u);
  return f_surface(sp) / offset_jacobian(sp, t).det;
}

/// Relative violation of int_S (g1 + g2) f = 0 against the L1 mass of f.
inline double load_compatibility(const SurfaceQuadrature& squad, const ThicknessPair& thick,
                                 const SurfaceLoad& f) {
  Vec3 net = Vec3::Zero();
  double mass = 0.0;
  for (const auto& node : squad.nodes) {
    const Vec3 v = f(node.geo);
    net += node.weight * thick.total(node.geo.u) * v;
    mass += node.weight * thick.total(node.geo.u) * v.norm();
  }
  return mass > 0.0 ? net.norm() / mass : 0.0;
}

inline void require_compatible(const SurfaceQuadrature& squad, const ThicknessPair& thick,
                               const SurfaceLoad& f, double tol = 1e-8) {
  const double c = load_compatibility(squad, thick, f);
  if (c > tol) {
    throw ParameterError("load violates int (g1 + g2) f = 0: relative net force " +
                         std::to_string(c));
  }
}

enum class MaximizerClass { unique, one_parameter_family, two_parameter_family, all_rotations };

inline std::string to_string(MaximizerClass c) {
  switch (c) {
    case MaximizerClass::unique: return "unique";
    case MaximizerClass::one_parameter_family: return "one-parameter family";
    case MaximizerClass::two_parameter_family: return "two-parameter family";
    case MaximizerClass::all_rotations: return "all of SO(3)";
  }
  return "unknown";
}

/// max over Q in SO(3) of tr(Q N) = sum_ij Q_ij N_ji.
struct ProcrustesResult {
  Mat3 rotation = Mat3::Identity();
  double value = 0.0;
  Vec3 singular_values = Vec3::Zero();  // of N, descending
  double det_sign = 1.0;
  MaximizerClass kind = MaximizerClass::unique;
  bool unique = true;
  Vec3 free_axis = Vec3::Zero();  // rotation axis of the family, right-multiplied
};

namespace detail {

/// Among Q0 Rot(axis, theta), the member closest to Id: maximizes tr.
inline Mat3 closest_to_identity(const Mat3& q0, const Vec3& axis) {
  const double a = q0.trace() - axis.dot(q0 * axis);
  const double b = (q0 * cross_matrix(axis)).trace();
  return q0 * axis_angle_rotation(axis, std::atan2(b, a));
}

}  // namespace detail

/// Wahba construction with determinant correction. Ties are flagged when the
/// signed tail sigma_2 + d sigma_3 vanishes relative to sigma_1 (1e-10);
/// one-parameter ties are broken toward Id. N with sigma_1 <= zero_tol is
/// treated as zero (quadrature leaves roundoff in moments that vanish).
inline ProcrustesResult procrustes_max(const Mat3& n, double tie_tol = 1e-10,
                                       double zero_tol = 0.0) {
  const Eigen::JacobiSVD<Mat3> svd(n.transpose(), Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Mat3 u = svd.matrixU(), v = svd.matrixV();
  const Vec3 s = svd.singularValues();
  ProcrustesResult r;
  r.singular_values = s;
  r.det_sign = (u * v.transpose()).determinant() < 0.0 ? -1.0 : 1.0;
  const double d = r.det_sign;
  r.rotation = u * Vec3(1.0, 1.0, d).asDiagonal() * v.transpose();
  const double scale = s(0);
  if (!(scale > zero_tol)) {
    r.kind = MaximizerClass::all_rotations;
    r.unique = false;
    r.rotation = Mat3::Identity();
    r.value = 0.0;
    return r;
  }
  const double tol = tie_tol * scale;
  if (s(1) + d * s(2) > tol) {
    r.kind = MaximizerClass::unique;
  } else if (s(0) + d * s(2) > tol) {
    // Q = U diag(1,1,d) V^T composed with rotations about V e1 (right side).
    r.kind = MaximizerClass::one_parameter_family;
    r.unique = false;
    r.free_axis = v.col(0);
    r.rotation = detail::closest_to_identity(r.rotation, r.free_axis);
  } else {
    r.kind = MaximizerClass::two_parameter_family;
    r.unique = false;
  }
  r.value = (r.rotation * n).trace();
  return r;
}

struct RotationActionResult {
  Mat3 moment_matrix = Mat3::Zero();  // (1/h) int_{S^h} z f^h(z)^T dz
  Mat3 optimal_rotation = Mat3::Identity();
  double m_h = 0.0;
  bool unique = true;
  MaximizerClass kind = MaximizerClass::unique;
};

/// N = int_S int_{-g1}^{g2} (x + h t n) f^h(x)^T dt dS; the det weights of
/// the volume element and of the extension cancel.
inline Mat3 load_moment(const LoadField& load, const ThicknessPair& thick, double h,
                        double e_h, const SurfaceQuadrature& squad,
                        const TransversalRule& trule) {
  const double sc = load.scale(h, e_h);
  Mat3 n = Mat3::Zero();
  for (std::size_t k = 0; k < squad.nodes.size(); ++k) {
    const SurfacePoint& sp = squad.nodes[k].geo;
    const Vec3 f = sc * load.f(sp);
    Vec3 z = Vec3::Zero();
    for (const auto& tn : trule.nodes[k]) z += tn.weight * (sp.x + h * tn.t * sp.n);
    n += squad.nodes[k].weight * z * f.transpose();
  }
  return n;
}

/// int_S int |x + h t n| |f^h|: the scale against which N counts as zero.
inline double moment_mass(const LoadField& load, const ThicknessPair& thick, double h,
                          double e_h, const SurfaceQuadrature& squad) {
  const double sc = std::abs(load.scale(h, e_h));
  double mass = 0.0;
  for (const auto& node : squad.nodes) {
    const SurfacePoint& sp = node.geo;
    const double reach = sp.x.norm() + h * std::max(thick.g1.value(sp.u), thick.g2.value(sp.u));
    mass += node.weight * thick.total(sp.u) * reach * sc * load.f(sp).norm();
  }
  return mass;
}

inline RotationActionResult maximize_action(const SurfacePatch& patch, const LoadField& load,
                                            const ThicknessPair& thick, double h, double e_h,
                                            const SurfaceQuadrature& squad,
                                            const TransversalRule& trule) {
  for (const auto& node : squad.nodes) {
    offset_jacobian(node.geo, -h * thick.g1.value(node.geo.u));
    offset_jacobian(node.geo, h * thick.g2.value(node.geo.u));
  }
  (void)patch;
  RotationActionResult r;
  r.moment_matrix = load_moment(load, thick, h, e_h, squad, trule);
  const ProcrustesResult p =
      procrustes_max(r.moment_matrix, 1e-10, 1e-12 * moment_mass(load, thick, h, e_h, squad));
  r.optimal_rotation = p.rotation;
  r.m_h = p.value;
  r.unique = p.unique;
  r.kind = p.kind;
  return r;
}

/// (1/h) int_{S^h} f^h(z) . Q z dz = tr(Q N).
inline double rotation_action(const Mat3& moment, const Mat3& q) { return (q * moment).trace(); }

/// Haar-distributed rotation from a normalized Gaussian quaternion.
inline Mat3 random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  double c[4];
  for (double& x : c) x = g(rng);
  Eigen::Quaterniond q(c[0], c[1], c[2], c[3]);
  q.normalize();
  return q.toRotationMatrix();
}

/// Largest tr(Q N) over `samples` random rotations.
inline double sampled_action_max(const Mat3& moment, int samples, std::mt19937_64& rng) {
  double best = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) {
    best = std::max(best, rotation_action(moment, random_rotation(rng)));
  }
  return best;
}

struct MaximizerSet {
  Mat3 moment_matrix = Mat3::Zero();  // int_S x f^T dS
  Mat3 representative = Mat3::Identity();
  double max_value = 0.0;
  MaximizerClass kind = MaximizerClass::unique;
  Vec3 free_axis = Vec3::Zero();
  double r_value = 0.0;  // r vanishes on the maximizer set

  /// Whether q attains the maximal linear action (relative 1e-10).
  bool contains(const Mat3& q, double rel = 1e-10) const {
    const double scale = std::max(1.0, moment_matrix.norm());
    return std::abs(rotation_action(moment_matrix, q) - max_value) <= rel * scale;
  }
};

inline MaximizerSet example_maximizer_set(const SurfaceQuadrature& squad,
                                          const LoadField& load, const ThicknessPair& thick) {
  if (load.scaling != LoadScaling::example) {
    throw UnsupportedCaseError(
        "example_maximizer_set: requires the load scaling f^h = h sqrt(e^h) f");
  }
  for (const auto& node : squad.nodes) {
    if (std::abs(thick.difference(node.geo.u)) > 1e-14) {
      throw UnsupportedCaseError("example_maximizer_set: requires g1 = g2");
    }
  }
  MaximizerSet m;
  double mass = 0.0;
  for (const auto& node : squad.nodes) {
    const Vec3 f = load.f(node.geo);
    m.moment_matrix += node.weight * node.geo.x * f.transpose();
    mass += node.weight * node.geo.x.norm() * f.norm();
  }
  const ProcrustesResult p = procrustes_max(m.moment_matrix, 1e-10, 1e-12 * mass);
  m.representative = p.rotation;
  m.max_value = p.value;
  m.kind = p.kind;
  m.free_axis = p.free_axis;
  return m;
}

/// J^h(u^h) = E^h + m^h - (1/h) int_{S^h} f^h . u^h, with u^h = Q y^h.
inline double eval_J_h(const RecoveryDeformation& rec, const StoredEnergy& material,
                       const LoadField& load, const SurfacePatch& patch,
                       const ThicknessPair& thick, const SurfaceQuadrature& squad,
                       const TransversalRule& trule) {
  (void)patch;
  require_compatible(squad, thick, load.f);
  const double h = rec.h();
  const double sc = load.scale(h, rec.e_h());
  const double e = eval_shell_energy(rec, material, squad, trule).e_h_value;
  const double m = procrustes_max(load_moment(load, thick, h, rec.e_h(), squad, trule)).value;
  double work = 0.0;
  for (std::size_t k = 0; k < squad.nodes.size(); ++k) {
    const SurfacePoint& sp = squad.nodes[k].geo;
    const Vec3 f = sc * load.f(sp);
    double col = 0.0;
    for (const auto& tn : trule.nodes[k]) col += tn.weight * f.dot(rec.evaluate(sp, tn.t));
    work += squad.nodes[k].weight * col;
  }
  return e + m - work;
}

}  // namespace shellgamma
