#pragma once

// The explicit recovery deformation y^h on the rescaled shell, its 3D
// elastic energy, and the averaged-displacement diagnostics.

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "shellgamma/errors.hpp"
#include "shellgamma/gauss_legendre.hpp"
#include "shellgamma/geometry.hpp"
#include "shellgamma/kinematics.hpp"
#include "shellgamma/limit2d.hpp"
#include "shellgamma/material.hpp"

namespace shellgamma {

struct DFields {
  Vec3 d0;
  Vec3 d1;
};

/// d0 = 2 c(stretching tensor) + kappa A^2 n - kappa/2 (n.A^2 n) n
///      + 1/2 (A grad((g2-g1) n))^T n
/// d1 = 2 c(sym bending tensor) + (n^T A Pi)^T - (n^T grad(A n))^T
inline DFields d_fields_at(const SurfacePoint& sp, const QuadForm3& q3, const IsometryLocal& iso,
                           const Mat2& b_tan, const Mat3& thickness_map, double kappa) {
  const QuadForm2 q2 = reduce_q2(q3, sp.n, sp.frame);
  const Vec3& n = sp.n;
  const Mat3 a2 = iso.a * iso.a;
  const Mat2 stretch = stretching_tensor(sp, iso, b_tan, thickness_map, kappa);
  DFields d;
  d.d0 = 2.0 * q2.minimizer(stretch) + kappa * (a2 * n) - 0.5 * kappa * n.dot(a2 * n) * n +
         0.5 * (iso.a * thickness_map).transpose() * n;
  const Mat3 grad_an = sp.gradient(iso.d_an);
  d.d1 = 2.0 * q2.minimizer(bending_tensor(sp, iso)) +
         (iso.a * sp.shape).transpose() * n - grad_an.transpose() * n;
  return d;
}

struct DFieldPair {
  std::function<Vec3(const Vec2&)> d0;
  std::function<Vec3(const Vec2&)> d1;
};

inline DFieldPair build_d_fields(const SurfacePatch& patch, const StoredEnergy& material,
                                 const IsometryField& iso, const StrainField& strain,
                                 const ThicknessPair& thick, double kappa) {
  const QuadForm3 q3 = require_q3(material);
  auto eval = [=](const Vec2& u) {
    const SurfacePoint sp(patch, u);
    return d_fields_at(sp, q3, iso.at(sp), strain.b_tan(sp), thickness_gradient_map(sp, thick),
                       kappa);
  };
  return {[eval](const Vec2& u) { return eval(u).d0; },
          [eval](const Vec2& u) { return eval(u).d1; }};
}

/// e^h for the von Karman scaling e^h / h^4 -> kappa^2: kappa^2 h^4 when
/// kappa > 0, h^alpha (alpha > 4) when kappa = 0.
inline double energy_scale(double h, double kappa, double alpha = 5.0) {
  if (kappa > 0.0) return kappa * kappa * std::pow(h, 4);
  if (!(alpha > 4.0)) throw ParameterError("energy_scale: kappa = 0 requires alpha > 4");
  return std::pow(h, alpha);
}

/// y^h(x + t n), t in (-g1(x), g2(x)), with s = t - (g2 - g1)/2:
///
///   x + h/2 (g2-g1) n + sqrt(e)/h V + sqrt(e) w + h s n + s sqrt(e) A n
///   - h s sqrt(e) (grad w)^T n + s h sqrt(e) d0 + s^2/2 h sqrt(e) d1
///
/// (Pi V_tan - grad(V.n) equals A n for an infinitesimal isometry.) The
/// deformation of the physical shell is u^h(x + h t n) = Q y^h(x + t n) with
/// Q = Id unless a rotation is composed on.
class RecoveryDeformation {
 public:
  RecoveryDeformation(SurfacePatch patch, QuadForm3 q3, IsometryField iso,
                      DisplacementField w, StrainField strain, ThicknessPair thick, double h,
                      double e_h, double kappa, double fd_rel_step = 1e-3)
      : patch_(std::move(patch)),
        q3_(std::move(q3)),
        iso_(std::move(iso)),
        w_(std::move(w)),
        strain_(std::move(strain)),
        thick_(std::move(thick)),
        h_(h),
        e_h_(e_h),
        kappa_(kappa),
        fd_step_(fd_rel_step * patch_.domain().extent()) {}

  double h() const { return h_; }
  double e_h() const { return e_h_; }
  double kappa() const { return kappa_; }
  const SurfacePatch& patch() const { return patch_; }
  const ThicknessPair& thickness() const { return thick_; }
  const IsometryField& isometry() const { return iso_; }
  const StrainField& strain() const { return strain_; }
  const Mat3& rotation() const { return rotation_; }

  RecoveryDeformation rotated(const Mat3& q) const {
    require_rotation(q, "RecoveryDeformation::rotated");
    RecoveryDeformation r = *this;
    r.rotation_ = q * rotation_;
    return r;
  }

  DFields d_fields(const SurfacePoint& sp) const {
    return d_fields_at(sp, q3_, iso_.at(sp), strain_.b_tan(sp),
                       thickness_gradient_map(sp, thick_), kappa_);
  }
  DFields d_fields(const Vec2& u) const { return d_fields(SurfacePoint(patch_, u)); }

  Vec3 evaluate(const Vec2& u, double t) const { return evaluate(SurfacePoint(patch_, u), t); }

  Vec3 evaluate(const SurfacePoint& sp, double t) const {
    const IsometryLocal loc = iso_.at(sp);
    const FieldJet wj = w_.jet(sp.u);
    const Vec3 wn = normal_slope(sp, wj).value;
    const DFields d = d_fields(sp);
    const double delta = thick_.difference(sp.u);
    const double s = t - 0.5 * delta;
    const double se = std::sqrt(e_h_);
    const Vec3 y = sp.x + 0.5 * h_ * delta * sp.n + (se / h_) * loc.v.value + se * wj.value +
                   h_ * s * sp.n + s * se * loc.an - h_ * s * se * wn + s * h_ * se * d.d0 +
                   0.5 * s * s * h_ * se * d.d1;
    return rotation_ * y;
  }

  /// Gradient of u^h at x + h t n, from the chart partials of y and the
  /// transversal partial through the frame {(Id + h t Pi) X_i, n}.
  Mat3 gradient(const Vec2& u, double t) const { return gradient(SurfacePoint(patch_, u), t); }

  Mat3 gradient(const SurfacePoint& sp, double t) const {
    const IsometryLocal loc = iso_.at(sp);
    const FieldJet wj = w_.jet(sp.u);
    const NormalSlope wn = normal_slope(sp, wj);
    const DFields d = d_fields(sp);
    Mat32 dd0, dd1;
    for (int i = 0; i < 2; ++i) {
      Vec2 e = Vec2::Zero();
      e(i) = fd_step_(i);
      const DFields p1 = d_fields(sp.u + e), m1 = d_fields(sp.u - e);
      const DFields p2 = d_fields(sp.u + 2 * e), m2 = d_fields(sp.u - 2 * e);
      dd0.col(i) = (-p2.d0 + 8.0 * p1.d0 - 8.0 * m1.d0 + m2.d0) / (12.0 * e(i));
      dd1.col(i) = (-p2.d1 + 8.0 * p1.d1 - 8.0 * m1.d1 + m2.d1) / (12.0 * e(i));
    }
    const double delta = thick_.difference(sp.u);
    const Vec2 gdelta = thick_.difference_gradient(sp.u);
    const double s = t - 0.5 * delta;
    const double se = std::sqrt(e_h_);
    const double r = se / h_;

    Mat3 cols;
    for (int i = 0; i < 2; ++i) {
      const double si = -0.5 * gdelta(i);
      cols.col(i) = sp.dx.col(i) + 0.5 * h_ * (gdelta(i) * sp.n + delta * sp.dn.col(i)) +
                    r * loc.v.d.col(i) + se * wj.d.col(i) +
                    h_ * (si * sp.n + s * sp.dn.col(i)) +
                    se * (si * loc.an + s * loc.d_an.col(i)) -
                    h_ * se * (si * wn.value + s * wn.d.col(i)) +
                    h_ * se * (si * d.d0 + s * dd0.col(i)) +
                    0.5 * h_ * se * (2.0 * s * si * d.d1 + s * s * dd1.col(i));
    }
    const Vec3 dt = h_ * sp.n + se * loc.an - h_ * se * wn.value + h_ * se * d.d0 +
                    s * h_ * se * d.d1;
    cols.col(2) = dt / h_;

    const OffsetJacobian off = offset_jacobian(sp, h_ * t);
    Mat3 frame;
    frame.col(0) = off.map * sp.dx.col(0);
    frame.col(1) = off.map * sp.dx.col(1);
    frame.col(2) = sp.n;
    return rotation_ * cols * frame.inverse();
  }

 private:
  SurfacePatch patch_;
  QuadForm3 q3_;
  IsometryField iso_;
  DisplacementField w_;
  StrainField strain_;
  ThicknessPair thick_;
  double h_;
  double e_h_;
  double kappa_;
  Vec2 fd_step_;
  Mat3 rotation_ = Mat3::Identity();
};

/// Builds y^h after checking det(Id + h t Pi) > 0 across the thickness at
/// every quadrature node. The strain must carry its generator w.
inline RecoveryDeformation build_recovery(const SurfacePatch& patch,
                                          const StoredEnergy& material,
                                          const IsometryField& iso, const StrainField& strain,
                                          const ThicknessPair& thick, double h, double e_h,
                                          double kappa, const SurfaceQuadrature& squad) {
  if (!(h > 0.0 && h < 1.0)) throw ParameterError("build_recovery: h must lie in (0, 1)");
  if (!(e_h > 0.0)) throw ParameterError("build_recovery: e_h must be > 0");
  if (!(kappa >= 0.0)) throw ParameterError("build_recovery: kappa must be >= 0");
  if (!strain.generator) {
    throw ParameterError("build_recovery: strain must be given by a generator field w");
  }
  for (const auto& node : squad.nodes) {
    offset_jacobian(node.geo, -h * thick.g1.value(node.geo.u));
    offset_jacobian(node.geo, h * thick.g2.value(node.geo.u));
  }
  return RecoveryDeformation(patch, require_q3(material), iso, *strain.generator, strain, thick,
                             h, e_h, kappa);
}

struct ShellEnergyValue {
  double e_h_value = 0.0;   // E^h
  double normalized = 0.0;  // E^h / e^h
};

/// E^h = int_S int_{-g1}^{g2} W(grad u^h(x + h t n)) det(Id + h t Pi) dt dS.
inline ShellEnergyValue eval_shell_energy(const RecoveryDeformation& rec,
                                          const StoredEnergy& material,
                                          const SurfaceQuadrature& squad,
                                          const TransversalRule& trule) {
  if (!material.has_density()) {
    throw ParameterError("eval_shell_energy: material '" + material.name +
                         "' has no energy density");
  }
  double sum = 0.0;
  for (std::size_t k = 0; k < squad.nodes.size(); ++k) {
    const SurfaceNode& node = squad.nodes[k];
    double col = 0.0;
    for (const auto& tn : trule.nodes[k]) {
      const Mat3 f = rec.gradient(node.geo, tn.t);
      const double w = material.evaluate(f);
      if (!std::isfinite(w) || f.norm() > 1e6) {
        throw EnergyBlowupError("eval_shell_energy: energy blow-up at node (" +
                                    std::to_string(node.geo.u.x()) + ", " +
                                    std::to_string(node.geo.u.y()) +
                                    "), t = " + std::to_string(tn.t),
                                node.geo.u, tn.t);
      }
      col += tn.weight * w * offset_jacobian(node.geo, rec.h() * tn.t).det;
    }
    sum += node.weight * col;
  }
  return {sum, sum / rec.e_h()};
}

/// V^h[y^h](x) = h / sqrt(e^h) * mean over t in (-g1, g2) of
/// y^h(x + t n) - (x + h t n).
class AveragedDisplacement {
 public:
  AveragedDisplacement(const RecoveryDeformation& rec, int order, double fd_rel_step = 1e-3)
      : rec_(std::make_shared<const RecoveryDeformation>(rec)),
        rule_(gauss_legendre(order)),
        fd_step_(fd_rel_step * rec.patch().domain().extent()) {}

  Vec3 value(const Vec2& u) const {
    const SurfacePoint sp(rec_->patch(), u);
    const double lo = -rec_->thickness().g1.value(u);
    const double hi = rec_->thickness().g2.value(u);
    const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
    Vec3 mean = Vec3::Zero();
    for (std::size_t k = 0; k < rule_.nodes.size(); ++k) {
      const double t = mid + half * rule_.nodes[k];
      mean += 0.5 * rule_.weights[k] * (rec_->evaluate(sp, t) - (sp.x + rec_->h() * t * sp.n));
    }
    return rec_->h() / std::sqrt(rec_->e_h()) * mean;
  }

  /// (1/h) sym (grad V^h)_tan, in the orthonormal frame at u.
  Mat2 scaled_strain(const Vec2& u) const {
    const SurfacePoint sp(rec_->patch(), u);
    const DisplacementField& v = rec_->isometry().displacement();
    Mat32 d;
    for (int i = 0; i < 2; ++i) {
      Vec2 e = Vec2::Zero();
      e(i) = fd_step_(i);
      auto excess = [&](const Vec2& p) { return (value(p) - v.value(p)).eval(); };
      d.col(i) = (-excess(u + 2 * e) + 8.0 * excess(u + e) - 8.0 * excess(u - e) +
                  excess(u - 2 * e)) /
                 (12.0 * e(i));
    }
    d += v.jacobian(u);
    return sym(sp.tangential(sp.gradient(d))) / rec_->h();
  }

 private:
  std::shared_ptr<const RecoveryDeformation> rec_;
  GaussRule1D rule_;
  Vec2 fd_step_;
};

inline AveragedDisplacement averaged_displacement(const RecoveryDeformation& rec,
                                                  const TransversalRule& trule) {
  return AveragedDisplacement(rec, trule.order);
}

struct AverageDiagnostics {
  double l2_distance = 0.0;       // || V^h - V ||_{L2(S)}
  double max_strain_error = 0.0;  // max_nodes |(1/h) sym grad V^h - B_tan|
};

inline AverageDiagnostics averaged_displacement_diagnostics(const RecoveryDeformation& rec,
                                                            const SurfaceQuadrature& squad,
                                                            const TransversalRule& trule) {
  const AveragedDisplacement avg = averaged_displacement(rec, trule);
  const DisplacementField& v = rec.isometry().displacement();
  AverageDiagnostics out;
  double sq = 0.0;
  for (const auto& node : squad.nodes) {
    const Vec2& u = node.geo.u;
    sq += node.weight * (avg.value(u) - v.value(u)).squaredNorm();
    const Mat2 err = avg.scaled_strain(u) - rec.strain().b_tan(node.geo);
    out.max_strain_error = std::max(out.max_strain_error, err.norm());
  }
  out.l2_distance = std::sqrt(sq);
  return out;
}

}  // namespace shellgamma
