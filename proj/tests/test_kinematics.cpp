#include <cmath>
#include <random>
#include <utility>
#include <vector>

#include <gtest/gtest.h>

#include "shellgamma/convergence.hpp"
#include "shellgamma/kinematics.hpp"

using namespace shellgamma;

namespace {

std::vector<PatchKind> all_kinds() {
  return {PatchKind::plate, PatchKind::sphere_cap, PatchKind::cylinder, PatchKind::torus_patch};
}

DisplacementField bump_v() { return out_of_plane_field({TrigMode{1.0, {1.0, 1.0}, {0.0, 0.0}}}); }

DisplacementField sample_w() {
  return trig_field({VectorTrigMode{{0.3, -0.2, 0.1}, {1.0, 2.0}, {0.0, 0.5}}});
}

ThicknessPair variable_thickness() {
  return make_thickness(constant_field(0.4),
                        trig_scalar_field(0.6, Vec2::Zero(), {TrigMode{0.1, {1.0, 1.0}, {0, 0}}}),
                        1.0);
}

// Oracle for the plate bump: w(u) = sin(pi u1) sin(pi u2).
Vec2 bump_grad(const Vec2& u) {
  return kPi * Vec2(std::cos(kPi * u.x()) * std::sin(kPi * u.y()),
                    std::sin(kPi * u.x()) * std::cos(kPi * u.y()));
}

Mat2 bump_hess(const Vec2& u) {
  const double s1 = std::sin(kPi * u.x()), c1 = std::cos(kPi * u.x());
  const double s2 = std::sin(kPi * u.y()), c2 = std::cos(kPi * u.y());
  Mat2 h;
  h << -s1 * s2, c1 * c2, c1 * c2, -s1 * s2;
  return kPi * kPi * h;
}

std::vector<double> schedule() {
  std::vector<double> hs;
  for (int k = 3; k <= 8; ++k) hs.push_back(std::ldexp(1.0, -k));
  return hs;
}

}  // namespace

TEST(Kinematics, RigidFieldSkewIsOmegaCross) {
  const Vec3 omega(0.3, -0.4, 1.0);
  for (PatchKind kind : all_kinds()) {
    const SurfacePatch patch = make_builtin_patch(kind);
    const SurfaceQuadrature squad = make_surface_quadrature(patch, 6);
    const IsometryField iso = build_isometry(patch, rigid_field(patch, omega, Vec3(1, 2, 3)), squad);
    for (const auto& node : squad.nodes) {
      const IsometryLocal loc = iso.at(node.geo);
      EXPECT_LE((loc.a - cross_matrix(omega)).norm(), 1e-12) << to_string(kind);
      EXPECT_LE((loc.an - omega.cross(node.geo.n)).norm(), 1e-12);
      EXPECT_LE(bending_tensor(node.geo, loc).norm(), 1e-12) << to_string(kind);
    }
  }
}

TEST(Kinematics, PlateOutOfPlaneSkewAndBending) {
  const SurfacePatch patch = make_builtin_patch(PatchKind::plate);
  const SurfaceQuadrature squad = make_surface_quadrature(patch, 7);
  const IsometryField iso = build_isometry(patch, bump_v(), squad);
  for (const auto& node : squad.nodes) {
    const Vec2 u = node.geo.u;
    const IsometryLocal loc = iso.at(node.geo);
    const Vec2 g = bump_grad(u);
    EXPECT_LE((loc.an - Vec3(-g.x(), -g.y(), 0.0)).norm(), 1e-12);
    EXPECT_LE((loc.a + loc.a.transpose()).norm(), 1e-14);
    EXPECT_LE((bending_tensor(node.geo, loc) + bump_hess(u)).norm(), 1e-11);
  }
}

TEST(Kinematics, PlateStretchingIsStrainPlusHalfSlopeSquare) {
  const SurfacePatch patch = make_builtin_patch(PatchKind::plate);
  const SurfaceQuadrature squad = make_surface_quadrature(patch, 5);
  const IsometryField iso = build_isometry(patch, bump_v(), squad);
  const DisplacementField w = sample_w();
  const StrainField strain = make_strain(w);
  const ThicknessPair thick = constant_thickness(0.5, 0.5);
  const double kappa = 0.7;
  const TensorField s = stretching_tensor(iso, strain, thick, kappa, patch);
  for (const auto& node : squad.nodes) {
    const Vec2 u = node.geo.u;
    const Mat32 dw = w.jacobian(u);
    const Mat2 b = 0.5 * (dw.topRows<2>() + dw.topRows<2>().transpose());
    const Vec2 g = bump_grad(u);
    const Mat2 expected = b + 0.5 * kappa * g * g.transpose();
    EXPECT_LE((s(u) - expected).norm(), 1e-12);
  }
  EXPECT_THROW(stretching_tensor(iso, strain, thick, -1.0, patch), ParameterError);
}

TEST(Kinematics, ThicknessCorrectionVanishesForConstantOffsetOnSphere) {
  // Constant g2 - g1 gives grad((g2 - g1) n) = (g2 - g1) Pi; with Pi = P / R
  // the correction sym(A P)_tan is the symmetric part of a skew minor.
  const SurfacePatch patch = make_builtin_patch(PatchKind::sphere_cap);
  const SurfaceQuadrature squad = make_surface_quadrature(patch, 5);
  const IsometryField iso =
      build_isometry(patch, rigid_field(patch, Vec3(0.2, 0.5, -0.3), Vec3::Zero()), squad);
  const ThicknessPair lopsided = constant_thickness(0.2, 0.9);
  const ThicknessPair even = constant_thickness(0.55, 0.55);
  const StrainField strain = zero_strain();
  for (const auto& node : squad.nodes) {
    const IsometryLocal loc = iso.at(node.geo);
    const Mat3 tm = thickness_gradient_map(node.geo, lopsided);
    const Mat3 p = Mat3::Identity() - node.geo.n * node.geo.n.transpose();
    EXPECT_LE((tm - 0.7 * p).norm(), 1e-12);
    EXPECT_LE((stretching_tensor(node.geo, loc, strain, lopsided, 1.0) -
               stretching_tensor(node.geo, loc, strain, even, 1.0))
                  .norm(),
              1e-12);
  }
}

TEST(Kinematics, InPlaneStretchIsRejectedWithWorstNode) {
  const SurfacePatch patch = make_builtin_patch(PatchKind::plate);
  const SurfaceQuadrature squad = make_surface_quadrature(patch, 4);
  Mat3 m = Mat3::Zero();
  m(0, 0) = 1.0;
  try {
    build_isometry(patch, affine_field(patch, m, Vec3::Zero()), squad);
    FAIL() << "expected NotAnIsometryError";
  } catch (const NotAnIsometryError& e) {
    EXPECT_NEAR(e.residual(), 1.0, 1e-14);
    EXPECT_TRUE(patch.domain().contains(e.worst_node()));
  }
  // A residual that grows across the patch: the worst node is the one with
  // the largest u1.
  const DisplacementField quad = fd_field([](const Vec2& u) {
    return Vec3(u.x() * u.x() * u.x(), 0.0, 0.0);
  });
  try {
    build_isometry(patch, quad, squad);
    FAIL() << "expected NotAnIsometryError";
  } catch (const NotAnIsometryError& e) {
    double umax = 0.0;
    for (const auto& node : squad.nodes) umax = std::max(umax, node.geo.u.x());
    EXPECT_DOUBLE_EQ(e.worst_node().x(), umax);
    EXPECT_NEAR(e.residual(), 3.0 * umax * umax, 1e-5);
  }
}

TEST(Kinematics, FiniteDifferenceFieldMatchesAnalytic) {
  const DisplacementField exact = sample_w();
  const DisplacementField fd = fd_field(exact.value);
  EXPECT_FALSE(fd.analytic);
  EXPECT_GT(default_isometry_tolerance(fd), default_isometry_tolerance(exact));
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> unit(0.1, 0.9);
  for (int i = 0; i < 20; ++i) {
    const Vec2 u(unit(rng), unit(rng));
    EXPECT_LE((fd.jacobian(u) - exact.jacobian(u)).norm(), 1e-4);
    const Hess3 a = fd.hessian(u), b = exact.hessian(u);
    for (int k = 0; k < 3; ++k) EXPECT_LE((a[k] - b[k]).norm(), 1e-2);
  }
}

TEST(Kinematics, SumOfFieldsAddsJets) {
  const SurfacePatch patch = make_builtin_patch(PatchKind::plate);
  const DisplacementField r = rigid_field(patch, Vec3(0.2, -0.1, 0.3), Vec3::Zero());
  const DisplacementField b = bump_v();
  const DisplacementField s = sum_fields({r, b});
  const Vec2 u(0.3, 0.8);
  EXPECT_LE((s.value(u) - r.value(u) - b.value(u)).norm(), 1e-15);
  EXPECT_LE((s.jacobian(u) - r.jacobian(u) - b.jacobian(u)).norm(), 1e-15);
  EXPECT_LE((s.hessian(u)[1] - b.hessian(u)[1]).norm(), 1e-14);
}

TEST(Kinematics, ZeroVectorFieldHasZeroTensors) {
  for (PatchKind kind : all_kinds()) {
    const SurfacePatch patch = make_builtin_patch(kind);
    const SurfaceQuadrature squad = make_surface_quadrature(patch, 4);
    const IsometryField iso = build_isometry(patch, zero_field(), squad);
    const TensorField s =
        stretching_tensor(iso, zero_strain(), constant_thickness(0.3, 0.8), 1.0, patch);
    for (const auto& node : squad.nodes) {
      EXPECT_EQ(iso.skew(node.geo.u).norm(), 0.0);
      EXPECT_LE(s(node.geo.u).norm(), 1e-15);
    }
  }
}

TEST(Kinematics, StretchingExpansionResidualIsThirdOrder) {
  const SurfacePatch patch = make_builtin_patch(PatchKind::plate);
  const SurfaceQuadrature squad = make_surface_quadrature(patch, 6);
  const IsometryField iso = build_isometry(patch, bump_v(), squad);
  const ThicknessPair thick = variable_thickness();
  std::vector<std::pair<double, double>> pairs;
  for (double h : schedule()) {
    pairs.emplace_back(h, stretching_expansion_residual(squad, iso, sample_w(), thick, h).residual);
  }
  const OrderFit fit = fit_order(pairs);
  EXPECT_GE(fit.slope, 2.9);
  EXPECT_GE(fit.r_squared, 0.99);
}

TEST(Kinematics, BendingExpansionResidualIsSecondOrder) {
  const SurfacePatch patch = make_builtin_patch(PatchKind::plate);
  const SurfaceQuadrature squad = make_surface_quadrature(patch, 6);
  const IsometryField iso = build_isometry(patch, bump_v(), squad);
  const ThicknessPair thick = variable_thickness();
  std::vector<std::pair<double, double>> pairs;
  for (double h : schedule()) {
    pairs.emplace_back(h, bending_expansion_residual(squad, iso, sample_w(), thick, h).residual);
  }
  const OrderFit fit = fit_order(pairs);
  EXPECT_GE(fit.slope, 1.9);
  EXPECT_GE(fit.r_squared, 0.99);
}

TEST(Kinematics, CurvedRigidExpansionResiduals) {
  for (PatchKind kind : {PatchKind::sphere_cap, PatchKind::cylinder}) {
    const SurfacePatch patch = make_builtin_patch(kind);
    const SurfaceQuadrature squad = make_surface_quadrature(patch, 6);
    const IsometryField iso =
        build_isometry(patch, rigid_field(patch, Vec3(0.3, -0.4, 1.0), Vec3::Zero()), squad);
    const ThicknessPair thick = constant_thickness(0.5, 0.5);
    std::vector<std::pair<double, double>> bend;
    for (double h : schedule()) {
      const ExpansionResidual s = stretching_expansion_residual(squad, iso, zero_field(), thick, h);
      EXPECT_EQ(s.significant(), 0.0) << to_string(kind) << " h = " << h;
      bend.emplace_back(h, bending_expansion_residual(squad, iso, zero_field(), thick, h).residual);
    }
    const OrderFit fit = fit_order(bend, 1e-14);
    if (!fit.exact) EXPECT_GE(fit.slope, 1.9) << to_string(kind);
  }
}

TEST(Kinematics, TangentialDeficitVanishes) {
  const SurfacePatch patch = make_builtin_patch(PatchKind::plate);
  const SurfaceQuadrature squad = make_surface_quadrature(patch, 6);
  const IsometryField iso = build_isometry(patch, bump_v(), squad);
  for (double h : schedule()) {
    const ExpansionResidual r = tangential_deficit_residual(squad, iso, variable_thickness(), h);
    EXPECT_LE(r.residual, 1e-12 * std::max(1.0, r.scale));
  }
}
