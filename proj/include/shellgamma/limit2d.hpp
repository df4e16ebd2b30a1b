#pragma once

// The limit plate/shell functional I(V, B_tan), its bending-only reduction,
// and the total functional J with a dead load.

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "shellgamma/errors.hpp"
#include "shellgamma/geometry.hpp"
#include "shellgamma/kinematics.hpp"
#include "shellgamma/material.hpp"

namespace shellgamma {

struct LimitEnergyBreakdown {
  double stretching = 0.0;
  double bending = 0.0;
  double load_term = 0.0;        // int (g1 + g2) f . Qbar V
  double relaxation_term = 0.0;  // r(Qbar)
  double total = 0.0;            // stretching + bending - load_term + relaxation_term
};

inline const QuadForm3& require_q3(const StoredEnergy& material) {
  if (!material.hessian_at_identity) {
    throw ParameterError("material '" + material.name + "' has no quadratic form at Id");
  }
  return *material.hessian_at_identity;
}

/// One Q2 per quadrature node, reduced with that node's normal and frame.
inline std::vector<QuadForm2> node_q2(const SurfaceQuadrature& squad, const QuadForm3& q3) {
  std::vector<QuadForm2> out;
  out.reserve(squad.nodes.size());
  for (const auto& node : squad.nodes) out.push_back(reduce_q2(q3, node.geo.n, node.geo.frame));
  return out;
}

inline LimitEnergyBreakdown eval_I(const SurfaceQuadrature& squad, const ThicknessPair& thick,
                                   const StoredEnergy& material, const IsometryField& iso,
                                   const StrainField& strain, double kappa) {
  if (!(kappa >= 0.0) || !std::isfinite(kappa)) {
    throw ParameterError("eval_I: kappa must be finite and >= 0");
  }
  const QuadForm3& q3 = require_q3(material);
  LimitEnergyBreakdown out;
  for (const auto& node : squad.nodes) {
    const SurfacePoint& sp = node.geo;
    const QuadForm2 q2 = reduce_q2(q3, sp.n, sp.frame);
    const IsometryLocal loc = iso.at(sp);
    const double g = thick.total(sp.u);
    const double s = q2.apply_tangential(stretching_tensor(sp, loc, strain, thick, kappa));
    const double b = q2.apply_tangential(bending_tensor(sp, loc));
    if (!std::isfinite(s) || !std::isfinite(b)) {
      throw EvaluationError("eval_I: non-finite integrand");
    }
    out.stretching += node.weight * 0.5 * g * s;
    out.bending += node.weight * g * g * g * b / 24.0;
  }
  out.total = out.stretching + out.bending;
  return out;
}

/// Bending-only functional for approximately robust surfaces.
inline double eval_I_tilde(const SurfaceQuadrature& squad, const ThicknessPair& thick,
                           const StoredEnergy& material, const IsometryField& iso) {
  const QuadForm3& q3 = require_q3(material);
  double sum = 0.0;
  for (const auto& node : squad.nodes) {
    const SurfacePoint& sp = node.geo;
    const QuadForm2 q2 = reduce_q2(q3, sp.n, sp.frame);
    const double g = thick.total(sp.u);
    sum += node.weight * g * g * g * q2.apply_tangential(bending_tensor(sp, iso.at(sp))) / 24.0;
  }
  return sum;
}

/// Load density on the surface; f(x) may depend on position and parameter.
using SurfaceLoad = std::function<Vec3(const SurfacePoint&)>;

inline void require_rotation(const Mat3& q, const char* who) {
  const double orth = (q.transpose() * q - Mat3::Identity()).norm();
  if (!(orth <= 1e-10) || !(std::abs(q.determinant() - 1.0) <= 1e-10)) {
    throw ParameterError(std::string(who) + ": matrix is not a rotation");
  }
}

inline LimitEnergyBreakdown eval_J(const SurfaceQuadrature& squad, const ThicknessPair& thick,
                                   const StoredEnergy& material, const IsometryField& iso,
                                   const StrainField& strain, double kappa, const SurfaceLoad& f,
                                   const Mat3& qbar, double r_value) {
  require_rotation(qbar, "eval_J");
  LimitEnergyBreakdown out = eval_I(squad, thick, material, iso, strain, kappa);
  const DisplacementField& v = iso.displacement();
  out.load_term = integrate_surface(squad, [&](const SurfacePoint& sp) {
    return thick.total(sp.u) * f(sp).dot(qbar * v.value(sp.u));
  });
  out.relaxation_term = r_value;
  out.total = out.stretching + out.bending - out.load_term + out.relaxation_term;
  return out;
}

}  // namespace shellgamma
