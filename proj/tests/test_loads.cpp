#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "shellgamma/loads.hpp"

using namespace shellgamma;

namespace {

SurfacePatch full_sphere() {
  PatchParams p = default_patch_params(PatchKind::sphere_cap);
  p.cap_angle = kPi;
  return make_sphere_cap(p);
}

LoadField example_load(SurfaceLoad f) {
  LoadField l;
  l.f = std::move(f);
  return l;
}

Mat3 gaussian_matrix(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Mat3 m;
  for (int i = 0; i < 9; ++i) m(i / 3, i % 3) = g(rng);
  return m;
}

}  // namespace

TEST(Loads, LoadScaling) {
  LoadField l = example_load([](const SurfacePoint&) { return Vec3::UnitZ().eval(); });
  EXPECT_DOUBLE_EQ(l.scale(0.5, 0.0625), 0.125);
  l.scaling = LoadScaling::power;
  l.exponent = 3.0;
  EXPECT_DOUBLE_EQ(l.scale(0.5, 0.0625), 0.125);
  l.exponent = 4.0;
  EXPECT_DOUBLE_EQ(l.scale(0.5, 1.0), 0.0625);
}

TEST(Loads, ExtendLoadDividesByOffsetDeterminant) {
  const SurfaceLoad f = [](const SurfacePoint&) { return Vec3(1.0, -2.0, 0.5); };
  const SurfacePatch plate = make_builtin_patch(PatchKind::plate);
  EXPECT_EQ(extend_load(plate, f, Vec2(0.3, 0.4), 0.2), Vec3(1.0, -2.0, 0.5));
  const SurfacePatch sphere = make_builtin_patch(PatchKind::sphere_cap);
  const Vec3 e = extend_load(sphere, f, Vec2(0.7, 1.0), 0.1);
  EXPECT_LE((e - Vec3(1.0, -2.0, 0.5) / 1.21).norm(), 1e-14);
  EXPECT_THROW(extend_load(sphere, f, Vec2(0.7, 1.0), -1.0), ThicknessTooLargeError);
}

TEST(Loads, ExtendedLoadIntegratesToSurfaceLoad) {
  // int_{-h g1}^{h g2} f^h(x + t n) det(Id + t Pi) dt = h (g1 + g2) f^h(x).
  const SurfacePatch sphere = make_builtin_patch(PatchKind::sphere_cap);
  const SurfaceLoad f = [](const SurfacePoint& sp) { return (sp.x + Vec3(0.1, 0, 0)).eval(); };
  const Vec2 u(0.9, 2.0);
  const SurfacePoint sp(sphere, u);
  const double h = 0.2, g1 = 0.3, g2 = 0.6;
  const GaussRule1D g = gauss_legendre(6);
  Vec3 sum = Vec3::Zero();
  const double half = 0.5 * h * (g1 + g2), mid = 0.5 * h * (g2 - g1);
  for (std::size_t k = 0; k < g.nodes.size(); ++k) {
    const double t = mid + half * g.nodes[k];
    sum += half * g.weights[k] * extend_load(sphere, f, u, t) * offset_jacobian(sp, t).det;
  }
  EXPECT_LE((sum - h * (g1 + g2) * f(sp)).norm(), 1e-14);
}

TEST(Loads, ProcrustesExamples) {
  const ProcrustesResult id = procrustes_max(Mat3::Identity());
  EXPECT_LE((id.rotation - Mat3::Identity()).norm(), 1e-14);
  EXPECT_NEAR(id.value, 3.0, 1e-14);
  EXPECT_EQ(id.kind, MaximizerClass::unique);

  const Mat3 r0 = axis_angle_rotation(Vec3(1.0, 2.0, -0.5), 2.2);
  const ProcrustesResult rot = procrustes_max(r0.transpose());
  EXPECT_LE((rot.rotation - r0).norm(), 1e-13);
  EXPECT_NEAR(rot.value, 3.0, 1e-13);
  EXPECT_TRUE(rot.unique);

  // N = -Id: every half turn attains 1; a two-parameter set.
  const ProcrustesResult neg = procrustes_max(-Mat3::Identity());
  EXPECT_EQ(neg.kind, MaximizerClass::two_parameter_family);
  EXPECT_NEAR(neg.value, 1.0, 1e-13);

  const ProcrustesResult zero = procrustes_max(Mat3::Zero());
  EXPECT_EQ(zero.kind, MaximizerClass::all_rotations);
  EXPECT_EQ(zero.value, 0.0);
  const Mat3 tiny = 1e-15 * Mat3::Identity();
  EXPECT_EQ(procrustes_max(tiny).kind, MaximizerClass::unique);
  EXPECT_EQ(procrustes_max(tiny, 1e-10, 1e-12).kind, MaximizerClass::all_rotations);
}

TEST(Loads, ProcrustesBeatsSamplingAndIsLocallyOptimal) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 5; ++trial) {
    const Mat3 n = gaussian_matrix(rng);
    const ProcrustesResult p = procrustes_max(n);
    EXPECT_EQ(p.kind, MaximizerClass::unique);
    EXPECT_LE((p.rotation.transpose() * p.rotation - Mat3::Identity()).norm(), 1e-13);
    EXPECT_NEAR(p.rotation.determinant(), 1.0, 1e-13);
    const double sampled = sampled_action_max(n, 100000, rng);
    EXPECT_GE(p.value, sampled - 1e-12);
    EXPECT_GE(sampled, p.value - 0.05 * n.norm());
    for (int k = 0; k < 3; ++k) {
      Vec3 axis = Vec3::Zero();
      axis(k) = 1.0;
      for (double eps : {1e-3, -1e-3}) {
        EXPECT_LT(rotation_action(n, p.rotation * axis_angle_rotation(axis, eps)), p.value);
      }
    }
  }
}

TEST(Loads, RandomRotationIsDeterministicAndOrthogonal) {
  std::mt19937_64 a(7), b(7);
  for (int i = 0; i < 10; ++i) {
    const Mat3 q = random_rotation(a);
    EXPECT_EQ(q, random_rotation(b));
    EXPECT_LE((q.transpose() * q - Mat3::Identity()).norm(), 1e-14);
    EXPECT_NEAR(q.determinant(), 1.0, 1e-14);
  }
}

TEST(Loads, MaximizerClassificationExamples) {
  const ThicknessPair even = constant_thickness(0.5, 0.5);
  {
    // Constant f on the full sphere: the moment vanishes.
    const SurfaceQuadrature q = make_surface_quadrature(full_sphere(), 12);
    const MaximizerSet m =
        example_maximizer_set(q, example_load([](const SurfacePoint&) {
                                return Vec3(0.3, -1.0, 2.0);
                              }),
                              even);
    EXPECT_LE(m.moment_matrix.norm(), 1e-13);
    EXPECT_EQ(m.kind, MaximizerClass::all_rotations);
    EXPECT_TRUE(m.contains(axis_angle_rotation(Vec3(1, 1, 0), 0.7)));
  }
  {
    // f = x on the full sphere: N = (4 pi / 3) Id, maximizer {Id}, value 4 pi.
    const SurfaceQuadrature q = make_surface_quadrature(full_sphere(), 12);
    const MaximizerSet m =
        example_maximizer_set(q, example_load([](const SurfacePoint& sp) { return sp.x; }), even);
    EXPECT_LE((m.moment_matrix - 4.0 * kPi / 3.0 * Mat3::Identity()).norm(), 1e-10);
    EXPECT_EQ(m.kind, MaximizerClass::unique);
    EXPECT_LE((m.representative - Mat3::Identity()).norm(), 1e-13);
    EXPECT_NEAR(m.max_value, 4.0 * kPi, 1e-10);
    EXPECT_FALSE(m.contains(axis_angle_rotation(Vec3::UnitX(), 0.1)));
  }
  {
    // f = e3 on the upper hemisphere: N = pi e3 e3^T, rotations about e3.
    const SurfaceQuadrature q = make_surface_quadrature(make_builtin_patch(PatchKind::sphere_cap), 12);
    const MaximizerSet m = example_maximizer_set(
        q, example_load([](const SurfacePoint&) { return Vec3::UnitZ().eval(); }), even);
    EXPECT_LE((m.moment_matrix - kPi * Vec3::UnitZ() * Vec3::UnitZ().transpose()).norm(), 1e-12);
    EXPECT_EQ(m.kind, MaximizerClass::one_parameter_family);
    EXPECT_NEAR(std::abs(m.free_axis.z()), 1.0, 1e-12);
    EXPECT_LE((m.representative - Mat3::Identity()).norm(), 1e-12);
    EXPECT_NEAR(m.max_value, kPi, 1e-12);
    EXPECT_TRUE(m.contains(axis_angle_rotation(Vec3::UnitZ(), 1.3)));
    EXPECT_FALSE(m.contains(axis_angle_rotation(Vec3::UnitX(), 0.2)));
  }
}

TEST(Loads, MaximizerSetRejectsUnsupportedCases) {
  const SurfaceQuadrature q = make_surface_quadrature(full_sphere(), 6);
  LoadField l = example_load([](const SurfacePoint& sp) { return sp.x; });
  EXPECT_THROW(example_maximizer_set(q, l, constant_thickness(0.4, 0.6)), UnsupportedCaseError);
  l.scaling = LoadScaling::power;
  l.exponent = 3.0;
  EXPECT_THROW(example_maximizer_set(q, l, constant_thickness(0.5, 0.5)), UnsupportedCaseError);
}

TEST(Loads, CompatibilityCheck) {
  const SurfacePatch sphere = full_sphere();
  const SurfaceQuadrature q = make_surface_quadrature(sphere, 10);
  const ThicknessPair even = constant_thickness(0.5, 0.5);
  EXPECT_LE(load_compatibility(q, even, [](const SurfacePoint& sp) { return sp.x; }), 1e-14);
  const SurfaceLoad constant = [](const SurfacePoint&) { return Vec3::UnitZ().eval(); };
  const SurfaceQuadrature hemi = make_surface_quadrature(make_builtin_patch(PatchKind::sphere_cap), 8);
  EXPECT_NEAR(load_compatibility(hemi, even, constant), 1.0, 1e-12);
  EXPECT_THROW(require_compatible(hemi, even, constant), ParameterError);
  EXPECT_EQ(load_compatibility(q, even, [](const SurfacePoint&) { return Vec3::Zero().eval(); }),
            0.0);
}

TEST(Loads, LoadMomentMatchesDirectIntegral) {
  // g1 = g2: the transversal mean of x + h t n is x, so N = scale int (g1+g2) x f^T.
  const SurfacePatch sphere = full_sphere();
  const SurfaceQuadrature q = make_surface_quadrature(sphere, 16);
  const ThicknessPair even = constant_thickness(0.5, 0.5);
  const TransversalRule tr = make_transversal_rule(q, even, 4);
  const LoadField l = example_load([](const SurfacePoint& sp) { return sp.x; });
  const double h = 0.1, e = energy_scale(h, 1.0);
  const Mat3 n = load_moment(l, even, h, e, q, tr);
  EXPECT_LE((n - h * std::sqrt(e) * 4.0 * kPi / 3.0 * Mat3::Identity()).norm(), 1e-10 * n.norm());
  const RotationActionResult r = maximize_action(sphere, l, even, h, e, q, tr);
  EXPECT_NEAR(r.m_h, n.trace(), 1e-15);
  EXPECT_TRUE(r.unique);
}

TEST(Loads, ZeroLoadLeavesTheElasticEnergy) {
  const SurfacePatch plate = make_builtin_patch(PatchKind::plate);
  const SurfaceQuadrature q = make_surface_quadrature(plate, 8);
  const ThicknessPair thick = constant_thickness(0.5, 0.5);
  const TransversalRule tr = make_transversal_rule(q, thick, 4);
  const StoredEnergy mat = make_isotropic(1.0, 1.0);
  const IsometryField iso =
      build_isometry(plate, out_of_plane_field({TrigMode{1.0, {1, 1}, {0, 0}}}), q);
  const RecoveryDeformation rec =
      build_recovery(plate, mat, iso, zero_strain(), thick, 0.125, energy_scale(0.125, 1.0), 1.0, q);
  const LoadField none = example_load([](const SurfacePoint&) { return Vec3::Zero().eval(); });
  EXPECT_EQ(eval_J_h(rec, mat, none, plate, thick, q, tr),
            eval_shell_energy(rec, mat, q, tr).e_h_value);
}

TEST(Loads, IdentityDeformationHasNonnegativeTotalEnergy) {
  const SurfacePatch sphere = full_sphere();
  const SurfaceQuadrature q = make_surface_quadrature(sphere, 10);
  const ThicknessPair thick = constant_thickness(0.5, 0.5);
  const TransversalRule tr = make_transversal_rule(q, thick, 4);
  const StoredEnergy mat = make_isotropic(1.0, 1.0);
  const IsometryField iso = build_isometry(sphere, zero_field(), q);
  const RecoveryDeformation rec =
      build_recovery(sphere, mat, iso, zero_strain(), thick, 0.1, energy_scale(0.1, 1.0), 1.0, q);
  // f = x is maximized at Id: J^h vanishes at the identity. A twisted load is not.
  const LoadField radial = example_load([](const SurfacePoint& sp) { return sp.x; });
  EXPECT_NEAR(eval_J_h(rec, mat, radial, sphere, thick, q, tr), 0.0, 1e-14);
  const Mat3 r = axis_angle_rotation(Vec3(0.2, 1.0, 0.3), 0.8);
  const LoadField twisted = example_load([r](const SurfacePoint& sp) { return (r * sp.x).eval(); });
  EXPECT_GT(eval_J_h(rec, mat, twisted, sphere, thick, q, tr), 0.0);
  const LoadField net = example_load([](const SurfacePoint&) { return Vec3::UnitZ().eval(); });
  const SurfaceQuadrature hemi = make_surface_quadrature(make_builtin_patch(PatchKind::sphere_cap), 6);
  const RecoveryDeformation hemi_rec = build_recovery(
      make_builtin_patch(PatchKind::sphere_cap), mat,
      build_isometry(make_builtin_patch(PatchKind::sphere_cap), zero_field(), hemi), zero_strain(),
      thick, 0.1, energy_scale(0.1, 1.0), 1.0, hemi);
  EXPECT_THROW(eval_J_h(hemi_rec, mat, net, make_builtin_patch(PatchKind::sphere_cap), thick, hemi,
                        make_transversal_rule(hemi, thick, 4)),
               ParameterError);
}

TEST(Loads, PlateTotalEnergyApproachesLimitFunctional) {
  // f = cos(2 pi u1) cos(2 pi u2) e3: compatible, zero moment, so Qbar = Id
  // and r = 0 in the limit functional.
  const SurfacePatch plate = make_builtin_patch(PatchKind::plate);
  const SurfaceQuadrature q = make_surface_quadrature(plate, kDefaultSurfaceOrder);
  const ThicknessPair thick = constant_thickness(0.5, 0.5);
  const TransversalRule tr = make_transversal_rule(q, thick, kDefaultTransversalOrder);
  const StoredEnergy mat = make_isotropic(1.0, 1.0);
  const IsometryField iso =
      build_isometry(plate, out_of_plane_field({TrigMode{1.0, {1, 1}, {0, 0}}}), q);
  const LoadField load = example_load([](const SurfacePoint& sp) {
    return Vec3(0.0, 0.0, 20.0 * std::cos(2 * kPi * sp.u.x()) * std::cos(2 * kPi * sp.u.y()));
  });
  const LimitEnergyBreakdown j =
      eval_J(q, thick, mat, iso, zero_strain(), 1.0, load.f, Mat3::Identity(), 0.0);
  // int cos(2 pi u) sin(pi u) du = -2 / (3 pi), squared, times 20.
  EXPECT_NEAR(j.load_term, 20.0 * 4.0 / (9.0 * kPi * kPi), 1e-12);
  for (double h : {0.0625, 0.0078125}) {
    const double e = energy_scale(h, 1.0);
    const RecoveryDeformation rec = build_recovery(plate, mat, iso, zero_strain(), thick, h, e, 1.0, q);
    const double jh = eval_J_h(rec, mat, load, plate, thick, q, tr) / e;
    EXPECT_NEAR(jh, j.total, 0.05 * std::abs(j.total)) << "h = " << h;
  }
}
