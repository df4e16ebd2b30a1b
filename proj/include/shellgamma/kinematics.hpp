#pragma once

// Displacement fields, infinitesimal isometries V with their skew fields A,
// strain inputs B_tan = sym grad w, the stretching and bending tensors, and
// residuals of the mid-surface expansion identities.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "shellgamma/errors.hpp"
#include "shellgamma/geometry.hpp"
#include "shellgamma/types.hpp"

namespace shellgamma {

/// Value with first and second parameter derivatives.
struct FieldJet {
  Vec3 value;
  Mat32 d;
  Hess3 dd;
};

struct DisplacementField {
  std::function<Vec3(const Vec2&)> value;
  std::function<Mat32(const Vec2&)> jacobian;
  std::function<Hess3(const Vec2&)> hessian;
  bool analytic = true;

  FieldJet jet(const Vec2& u) const { return {value(u), jacobian(u), hessian(u)}; }
};

inline DisplacementField zero_field() {
  DisplacementField f;
  f.value = [](const Vec2&) { return Vec3::Zero().eval(); };
  f.jacobian = [](const Vec2&) { return Mat32::Zero().eval(); };
  f.hessian = [](const Vec2&) { return Hess3{Vec3::Zero(), Vec3::Zero(), Vec3::Zero()}; };
  return f;
}

/// x -> M x + b on the patch.
inline DisplacementField affine_field(const SurfacePatch& patch, const Mat3& m, const Vec3& b) {
  DisplacementField f;
  f.value = [patch, m, b](const Vec2& u) { return (m * patch.chart(u) + b).eval(); };
  f.jacobian = [patch, m](const Vec2& u) { return (m * patch.chart_jacobian(u)).eval(); };
  f.hessian = [patch, m](const Vec2& u) {
    const Hess3 d = patch.evaluate(u).ddx;
    return Hess3{m * d[0], m * d[1], m * d[2]};
  };
  return f;
}

/// Linearized rigid motion x -> omega x x + b.
inline DisplacementField rigid_field(const SurfacePatch& patch, const Vec3& omega, const Vec3& b) {
  return affine_field(patch, cross_matrix(omega), b);
}

struct VectorTrigMode {
  std::array<double, 3> amplitude{0.0, 0.0, 1.0};
  std::array<double, 2> k{1.0, 1.0};
  std::array<double, 2> phase{0.0, 0.0};

  bool operator==(const VectorTrigMode&) const = default;
};

/// sum_m a_m sin(pi k1 u1 + p1) sin(pi k2 u2 + p2) in parameter coordinates.
inline DisplacementField trig_field(std::vector<VectorTrigMode> modes) {
  auto ms = std::make_shared<const std::vector<VectorTrigMode>>(std::move(modes));
  auto scalar = [](const VectorTrigMode& m) {
    return TrigMode{1.0, m.k, m.phase};
  };
  auto amp = [](const VectorTrigMode& m) {
    return Vec3(m.amplitude[0], m.amplitude[1], m.amplitude[2]);
  };
  DisplacementField f;
  f.value = [=](const Vec2& u) {
    Vec3 v = Vec3::Zero();
    for (const auto& m : *ms) v += amp(m) * scalar(m).jet(u).value;
    return v;
  };
  f.jacobian = [=](const Vec2& u) {
    Mat32 d = Mat32::Zero();
    for (const auto& m : *ms) d += amp(m) * scalar(m).jet(u).grad.transpose();
    return d;
  };
  f.hessian = [=](const Vec2& u) {
    Hess3 h{Vec3::Zero(), Vec3::Zero(), Vec3::Zero()};
    for (const auto& m : *ms) {
      const Mat2 s = scalar(m).jet(u).hess;
      h[0] += amp(m) * s(0, 0);
      h[1] += amp(m) * s(0, 1);
      h[2] += amp(m) * s(1, 1);
    }
    return h;
  };
  return f;
}

/// (0, 0, sum_m a_m mode_m(u)): out-of-plane plate displacement.
inline DisplacementField out_of_plane_field(const std::vector<TrigMode>& modes) {
  std::vector<VectorTrigMode> vm;
  vm.reserve(modes.size());
  for (const auto& m : modes) vm.push_back({{0.0, 0.0, m.amplitude}, m.k, m.phase});
  return trig_field(std::move(vm));
}

inline DisplacementField sum_fields(std::vector<DisplacementField> parts) {
  auto ps = std::make_shared<const std::vector<DisplacementField>>(std::move(parts));
  DisplacementField f;
  f.analytic = std::all_of(ps->begin(), ps->end(), [](const auto& p) { return p.analytic; });
  f.value = [ps](const Vec2& u) {
    Vec3 v = Vec3::Zero();
    for (const auto& p : *ps) v += p.value(u);
    return v;
  };
  f.jacobian = [ps](const Vec2& u) {
    Mat32 d = Mat32::Zero();
    for (const auto& p : *ps) d += p.jacobian(u);
    return d;
  };
  f.hessian = [ps](const Vec2& u) {
    Hess3 h{Vec3::Zero(), Vec3::Zero(), Vec3::Zero()};
    for (const auto& p : *ps) {
      const Hess3 q = p.hessian(u);
      for (int k = 0; k < 3; ++k) h[k] += q[k];
    }
    return h;
  };
  return f;
}

/// Field known only by value; derivatives by 4th-order central differences.
inline DisplacementField fd_field(std::function<Vec3(const Vec2&)> value, double step = 1e-3) {
  auto v = std::make_shared<const std::function<Vec3(const Vec2&)>>(std::move(value));
  auto d1 = [v, step](const Vec2& u, int i) {
    Vec2 e = Vec2::Zero();
    e(i) = step;
    return ((-(*v)(u + 2 * e) + 8.0 * (*v)(u + e) - 8.0 * (*v)(u - e) + (*v)(u - 2 * e)) /
            (12.0 * step))
        .eval();
  };
  DisplacementField f;
  f.analytic = false;
  f.value = [v](const Vec2& u) { return (*v)(u); };
  f.jacobian = [d1](const Vec2& u) {
    Mat32 d;
    d.col(0) = d1(u, 0);
    d.col(1) = d1(u, 1);
    return d;
  };
  f.hessian = [v, step](const Vec2& u) {
    auto second = [&](int i) {
      Vec2 e = Vec2::Zero();
      e(i) = step;
      return ((-(*v)(u + 2 * e) + 16.0 * (*v)(u + e) - 30.0 * (*v)(u) + 16.0 * (*v)(u - e) -
               (*v)(u - 2 * e)) /
              (12.0 * step * step))
          .eval();
    };
    // Mixed partial: 4th-order first difference in u2 of 4th-order first
    // differences in u1.
    auto first1 = [&](const Vec2& p) {
      const Vec2 e(step, 0.0);
      return ((-(*v)(p + 2 * e) + 8.0 * (*v)(p + e) - 8.0 * (*v)(p - e) + (*v)(p - 2 * e)) /
              (12.0 * step))
          .eval();
    };
    const Vec2 e2(0.0, step);
    const Vec3 mixed =
        (-first1(u + 2 * e2) + 8.0 * first1(u + e2) - 8.0 * first1(u - e2) + first1(u - 2 * e2)) /
        (12.0 * step);
    return Hess3{second(0), mixed, second(1)};
  };
  return f;
}

// ---------------------------------------------------------------------------
// Local kinematics

/// The tangent vector (grad F)^T n = sum_k (d_k F . n) X^k and its
/// parameter derivatives.
struct NormalSlope {
  Vec3 value;
  Mat32 d;
};

inline NormalSlope normal_slope(const SurfacePoint& sp, const FieldJet& f) {
  const Vec2 b(f.d.col(0).dot(sp.n), f.d.col(1).dot(sp.n));
  NormalSlope out;
  out.value = sp.dual * b;
  for (int i = 0; i < 2; ++i) {
    Mat32 dj;  // d_i [X_1, X_2]
    dj.col(0) = sp.ddx[hess_index(0, i)];
    dj.col(1) = sp.ddx[hess_index(1, i)];
    const Mat2 dg = dj.transpose() * sp.dx + sp.dx.transpose() * dj;
    const Mat2 dginv = -sp.metric_inv * dg * sp.metric_inv;
    const Mat32 ddual = dj * sp.metric_inv + sp.dx * dginv;
    Vec2 db;
    for (int k = 0; k < 2; ++k) {
      db(k) = f.dd[hess_index(k, i)].dot(sp.n) + f.d.col(k).dot(sp.dn.col(i));
    }
    out.d.col(i) = ddual * b + sp.dual * db;
  }
  return out;
}

/// Skew field A of an infinitesimal isometry at one point, with An and the
/// parameter derivatives of An.
struct IsometryLocal {
  FieldJet v;
  Mat3 a;
  Vec3 an;
  Mat32 d_an;
};

/// Assembles A from A X_i = d_i V and skewness on the normal column:
/// An = -(grad V)^T n. The result is projected onto skew matrices.
inline IsometryLocal isometry_local(const SurfacePoint& sp, const DisplacementField& v) {
  IsometryLocal out;
  out.v = v.jet(sp.u);
  const NormalSlope s = normal_slope(sp, out.v);
  out.an = -s.value;
  out.d_an = -s.d;
  Mat3 cols;
  cols.leftCols<2>() = out.v.d;
  cols.col(2) = out.an;
  const Mat3 a = cols * sp.basis().inverse();
  out.a = 0.5 * (a - a.transpose());
  return out;
}

/// |sym (grad V)_tan| in the orthonormal frame.
inline double isometry_residual(const SurfacePoint& sp, const DisplacementField& v) {
  return sym(sp.tangential(sp.gradient(v.jacobian(sp.u)))).norm();
}

class IsometryField {
 public:
  IsometryField(SurfacePatch patch, DisplacementField v, double tol)
      : patch_(std::move(patch)), v_(std::move(v)), tol_(tol) {}

  const SurfacePatch& patch() const { return patch_; }
  const DisplacementField& displacement() const { return v_; }
  double tolerance() const { return tol_; }

  IsometryLocal at(const SurfacePoint& sp) const { return isometry_local(sp, v_); }
  IsometryLocal at(const Vec2& u) const { return at(SurfacePoint(patch_, u)); }
  Mat3 skew(const Vec2& u) const { return at(u).a; }

 private:
  SurfacePatch patch_;
  DisplacementField v_;
  double tol_;
};

inline double default_isometry_tolerance(const DisplacementField& v) {
  return v.analytic ? 1e-8 : 1e-5;
}

/// Checks sym(grad V)_tan at every quadrature node against `tol`.
inline IsometryField build_isometry(const SurfacePatch& patch, const DisplacementField& v,
                                    const SurfaceQuadrature& squad, double tol) {
  double worst = 0.0;
  Vec2 worst_u = Vec2::Zero();
  for (const auto& node : squad.nodes) {
    const double r = isometry_residual(node.geo, v);
    if (!std::isfinite(r)) {
      throw EvaluationError("build_isometry: non-finite displacement derivative");
    }
    if (r > worst) {
      worst = r;
      worst_u = node.geo.u;
    }
  }
  if (worst > tol) {
    throw NotAnIsometryError("build_isometry: |sym(grad V)_tan| = " + std::to_string(worst) +
                                 " exceeds tolerance at node (" + std::to_string(worst_u.x()) +
                                 ", " + std::to_string(worst_u.y()) + ")",
                             worst_u, worst);
  }
  return IsometryField(patch, v, tol);
}

inline IsometryField build_isometry(const SurfacePatch& patch, const DisplacementField& v,
                                    const SurfaceQuadrature& squad) {
  return build_isometry(patch, v, squad, default_isometry_tolerance(v));
}

/// B_tan as a field of symmetric 2x2 matrices in the orthonormal frame.
/// Elements of the finite strain space are represented by a generator w
/// with B_tan = sym (grad w)_tan; a direct B_tan without generator is
/// accepted where only the 2D tensor is needed.
struct StrainField {
  std::function<Mat2(const SurfacePoint&)> b_tan;
  std::optional<DisplacementField> generator;
};

inline StrainField make_strain(const DisplacementField& w) {
  StrainField s;
  s.generator = w;
  s.b_tan = [w](const SurfacePoint& sp) {
    return sym(sp.tangential(sp.gradient(w.jacobian(sp.u))));
  };
  return s;
}

inline StrainField zero_strain() { return make_strain(zero_field()); }

inline StrainField direct_strain(std::function<Mat2(const SurfacePoint&)> b) {
  StrainField s;
  s.b_tan = std::move(b);
  return s;
}

// ---------------------------------------------------------------------------
// Stretching and bending tensors

/// grad((g2 - g1) n) = n (x) grad(g2 - g1) + (g2 - g1) Pi, as a 3x3 map.
inline Mat3 thickness_gradient_map(const SurfacePoint& sp, const ThicknessPair& thick) {
  const Vec3 gd = sp.tangent_gradient(thick.difference_gradient(sp.u));
  return sp.n * gd.transpose() + thick.difference(sp.u) * sp.shape;
}

/// (grad(A n) - A Pi) as a 3x3 map on the tangent plane.
inline Mat3 bending_map(const SurfacePoint& sp, const IsometryLocal& iso) {
  Mat32 k;
  for (int i = 0; i < 2; ++i) k.col(i) = iso.d_an.col(i) - iso.a * sp.dn.col(i);
  return sp.gradient(k);
}

/// sym (grad(A n) - A Pi)_tan.
inline Mat2 bending_tensor(const SurfacePoint& sp, const IsometryLocal& iso) {
  return sym(sp.tangential(bending_map(sp, iso)));
}

inline Mat2 stretching_tensor(const SurfacePoint& sp, const IsometryLocal& iso,
                              const Mat2& b_tan, const Mat3& thickness_map, double kappa) {
  const Mat2 a2 = sp.tangential(iso.a * iso.a);
  const Mat2 corr = sym(sp.tangential(iso.a * thickness_map));
  return b_tan - 0.5 * kappa * a2 - 0.5 * corr;
}

inline Mat2 stretching_tensor(const SurfacePoint& sp, const IsometryLocal& iso,
                              const StrainField& strain, const ThicknessPair& thick,
                              double kappa) {
  return stretching_tensor(sp, iso, strain.b_tan(sp), thickness_gradient_map(sp, thick), kappa);
}

using TensorField = std::function<Mat2(const Vec2&)>;

inline TensorField bending_tensor(const IsometryField& iso, const SurfacePatch& patch) {
  return [iso, patch](const Vec2& u) {
    const SurfacePoint sp(patch, u);
    return bending_tensor(sp, iso.at(sp));
  };
}

inline TensorField stretching_tensor(const IsometryField& iso, const StrainField& strain,
                                     const ThicknessPair& thick, double kappa,
                                     const SurfacePatch& patch) {
  if (!(kappa >= 0.0) || !std::isfinite(kappa)) {
    throw ParameterError("stretching_tensor: kappa must be finite and >= 0");
  }
  return [=](const Vec2& u) {
    const SurfacePoint sp(patch, u);
    return stretching_tensor(sp, iso.at(sp), strain, thick, kappa);
  };
}

// ---------------------------------------------------------------------------
// Expansion identities of the mid-surface deformations
//   phi~ = id + h/2 (g2 - g1) n,   phi = phi~ + h V + h^2 w.

/// Largest mismatch over nodes and frame tangents, with the largest
/// magnitude of the compared left-hand side (for roundoff classification).
struct ExpansionResidual {
  double residual = 0.0;
  double scale = 0.0;

  /// Residual, or 0 when it is indistinguishable from roundoff.
  double significant(double rel_roundoff = 1e-12) const {
    return residual > rel_roundoff * scale ? residual : 0.0;
  }
};

namespace detail {

/// First and second parameter derivatives of phi~ (or phi when v, w given).
struct SurfaceMapJet {
  Mat32 d;
  Hess3 dd;
};

inline SurfaceMapJet mid_surface_jet(const SurfacePoint& sp, const ThicknessPair& thick,
                                     double h) {
  const double delta = thick.difference(sp.u);
  const Vec2 gd = thick.difference_gradient(sp.u);
  const Mat2 hd = thick.difference_hessian(sp.u);
  SurfaceMapJet j;
  for (int i = 0; i < 2; ++i) {
    j.d.col(i) = sp.dx.col(i) + 0.5 * h * (gd(i) * sp.n + delta * sp.dn.col(i));
  }
  for (int i = 0; i < 2; ++i) {
    for (int k = i; k < 2; ++k) {
      const int idx = hess_index(i, k);
      j.dd[idx] = sp.ddx[idx] + 0.5 * h *
                                    (hd(i, k) * sp.n + gd(i) * sp.dn.col(k) +
                                     gd(k) * sp.dn.col(i) + delta * sp.ddn[idx]);
    }
  }
  return j;
}

/// Shape operator of a parametrized surface in chart coordinates,
/// S = -G^{-1} [Y_ij . N], with N oriented along `orient`.
inline Mat2 weingarten(const SurfaceMapJet& y, const Vec3& orient) {
  Vec3 nrm = y.d.col(0).cross(y.d.col(1));
  const double len = nrm.norm();
  if (!(len > 0.0)) throw EvaluationError("degenerate deformed metric");
  nrm /= len;
  if (nrm.dot(orient) < 0.0) nrm = -nrm;
  Mat2 hm;
  hm << y.dd[0].dot(nrm), y.dd[1].dot(nrm), y.dd[1].dot(nrm), y.dd[2].dot(nrm);
  const Mat2 g = y.d.transpose() * y.d;
  return -g.inverse() * hm;
}

}  // namespace detail

/// max | |d_tau phi|^2 - |d_tau phi~|^2
///       - 2 h^2 tau^T (sym grad w - A^2/2 - sym(A grad((g2-g1) n))/2) tau |
inline ExpansionResidual stretching_expansion_residual(const SurfaceQuadrature& squad,
                                                       const IsometryField& iso,
                                                       const DisplacementField& w,
                                                       const ThicknessPair& thick, double h) {
  ExpansionResidual out;
  for (const auto& node : squad.nodes) {
    const SurfacePoint& sp = node.geo;
    const IsometryLocal loc = iso.at(sp);
    const Mat32 dw = w.jacobian(sp.u);
    const Mat3 gw = sp.gradient(dw);
    const Mat3 tm = thickness_gradient_map(sp, thick);
    const detail::SurfaceMapJet mid = detail::mid_surface_jet(sp, thick, h);
    for (int a = 0; a < 2; ++a) {
      const Vec3 tau = sp.frame.col(a);
      const Vec2 c = sp.chart_components(tau);
      const Vec3 p = mid.d * c;
      const Vec3 q = h * loc.v.d * c + h * h * dw * c;
      const double lhs = 2.0 * p.dot(q) + q.squaredNorm();
      const double rhs = 2.0 * h * h *
                         (tau.dot(gw * tau) - 0.5 * tau.dot(loc.a * loc.a * tau) -
                          0.5 * tau.dot(loc.a * tm * tau));
      out.residual = std::max(out.residual, std::abs(lhs - rhs));
      out.scale = std::max(out.scale, std::abs(lhs));
    }
  }
  return out;
}

/// max | (grad phi)^{-1} Pi^h (grad phi) tau - (grad phi~)^{-1} Pi~^h (grad phi~) tau
///       - h (d_tau(A n) - A Pi tau) |
/// with both shape operators pulled back to chart coordinates.
inline ExpansionResidual bending_expansion_residual(const SurfaceQuadrature& squad,
                                                    const IsometryField& iso,
                                                    const DisplacementField& w,
                                                    const ThicknessPair& thick, double h) {
  ExpansionResidual out;
  const DisplacementField& v = iso.displacement();
  for (const auto& node : squad.nodes) {
    const SurfacePoint& sp = node.geo;
    const IsometryLocal loc = iso.at(sp);
    const FieldJet wj = w.jet(sp.u);
    const detail::SurfaceMapJet mid = detail::mid_surface_jet(sp, thick, h);
    detail::SurfaceMapJet def = mid;
    def.d += h * loc.v.d + h * h * wj.d;
    for (int k = 0; k < 3; ++k) def.dd[k] += h * loc.v.dd[k] + h * h * wj.dd[k];
    const Mat2 s_def = detail::weingarten(def, sp.n);
    const Mat2 s_mid = detail::weingarten(mid, sp.n);
    const Mat3 bend = bending_map(sp, loc);
    for (int a = 0; a < 2; ++a) {
      const Vec3 tau = sp.frame.col(a);
      const Vec2 c = sp.chart_components(tau);
      const Vec3 lhs = sp.dx * ((s_def - s_mid) * c);
      const Vec3 rhs = h * bend * tau;
      out.residual = std::max(out.residual, (lhs - rhs).norm());
      out.scale = std::max(out.scale, lhs.norm());
    }
  }
  return out;
}

/// max | d_tau V . d_tau phi~ + h/2 tau^T sym(A grad((g2-g1) n)) tau |:
/// the first-order failure of V to be an infinitesimal isometry of the
/// geometric mid-surface.
inline ExpansionResidual tangential_deficit_residual(const SurfaceQuadrature& squad,
                                                     const IsometryField& iso,
                                                     const ThicknessPair& thick, double h) {
  ExpansionResidual out;
  for (const auto& node : squad.nodes) {
    const SurfacePoint& sp = node.geo;
    const IsometryLocal loc = iso.at(sp);
    const Mat3 tm = thickness_gradient_map(sp, thick);
    const detail::SurfaceMapJet mid = detail::mid_surface_jet(sp, thick, h);
    for (int a = 0; a < 2; ++a) {
      const Vec3 tau = sp.frame.col(a);
      const Vec2 c = sp.chart_components(tau);
      const double lhs = (loc.v.d * c).dot(mid.d * c);
      const double corr = 0.5 * h * tau.dot(loc.a * tm * tau);
      out.residual = std::max(out.residual, std::abs(lhs + corr));
      out.scale = std::max(out.scale, std::abs(lhs));
    }
  }
  return out;
}

}  // namespace shellgamma
