#pragma once

// Stored-energy densities, the quadratic form Q3 = D^2 W(Id), and its
// relaxation Q2(x, .) over normal corrections c (x) n + n (x) c.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <string>

#include "shellgamma/errors.hpp"
#include "shellgamma/types.hpp"

namespace shellgamma {

/// Quadratic form on 3x3 matrices that sees only the symmetric part,
/// stored as a symmetric 6x6 matrix in Mandel coordinates.
struct QuadForm3 {
  Mat6 matrix = Mat6::Zero();

  double apply(const Mat3& f) const {
    const Vec6 s = to_mandel(f);
    return s.dot(matrix * s);
  }

  double min_eigenvalue() const {
    return Eigen::SelfAdjointEigenSolver<Mat6>(matrix, Eigen::EigenvaluesOnly)
        .eigenvalues()
        .minCoeff();
  }
};

/// Frame-indifferent density with W(Id) = 0.
///
/// `evaluate` is empty for materials given only through Q3; energy-level
/// computations reject those.
struct StoredEnergy {
  std::string name;
  std::function<double(const Mat3&)> evaluate;
  std::optional<QuadForm3> hessian_at_identity;
  // W(F) >= coercivity * dist^2(F, SO(3)) for F within 0.1 of SO(3).
  double coercivity = 0.0;

  bool has_density() const { return static_cast<bool>(evaluate); }
};

inline QuadForm3 isotropic_q3(double mu, double lambda) {
  QuadForm3 q;
  Vec6 m;
  m << 1.0, 1.0, 1.0, 0.0, 0.0, 0.0;
  q.matrix = 2.0 * mu * Mat6::Identity() + lambda * m * m.transpose();
  return q;
}

/// W(F) = mu/4 |F^T F - Id|^2 + lambda/8 (tr(F^T F - Id))^2, so that
/// Q3(F) = 2 mu |sym F|^2 + lambda (tr F)^2.
inline StoredEnergy make_isotropic(double mu, double lambda) {
  if (!(mu > 0.0)) throw ParameterError("isotropic material: mu must be > 0");
  if (!(lambda >= 0.0)) throw ParameterError("isotropic material: lambda must be >= 0");
  StoredEnergy w;
  w.name = "isotropic";
  w.evaluate = [mu, lambda](const Mat3& f) {
    const Mat3 e = f.transpose() * f - Mat3::Identity();
    const double tr = e.trace();
    return 0.25 * mu * e.squaredNorm() + 0.125 * lambda * tr * tr;
  };
  w.hessian_at_identity = isotropic_q3(mu, lambda);
  w.coercivity = 0.5 * mu;
  return w;
}

/// Material known only through Q3 (21 upper-triangular entries, row-major,
/// in Mandel coordinates).
inline StoredEnergy make_q3_material(const std::array<double, 21>& upper) {
  QuadForm3 q;
  int k = 0;
  for (int i = 0; i < 6; ++i) {
    for (int j = i; j < 6; ++j) {
      q.matrix(i, j) = upper[k];
      q.matrix(j, i) = upper[k];
      ++k;
    }
  }
  if (!(q.min_eigenvalue() > 0.0)) {
    throw ParameterError("q3 material: matrix is not positive definite on symmetric matrices");
  }
  StoredEnergy w;
  w.name = "q3";
  w.hessian_at_identity = q;
  return w;
}

namespace detail {

inline Mat3 mandel_basis(int k) {
  Vec6 e = Vec6::Zero();
  e(k) = 1.0;
  return from_mandel(e);
}

}  // namespace detail

/// Central second differences of W at Id on the orthonormal Mandel basis.
inline QuadForm3 q3_from_energy(const StoredEnergy& w, double step = 1e-4) {
  if (!w.has_density()) throw ParameterError("q3_from_energy: material has no energy density");
  const Mat3 id = Mat3::Identity();
  const double w0 = w.evaluate(id);
  QuadForm3 q;
  for (int k = 0; k < 6; ++k) {
    const Mat3 ek = step * detail::mandel_basis(k);
    q.matrix(k, k) = (w.evaluate(id + ek) - 2.0 * w0 + w.evaluate(id - ek)) / (step * step);
    for (int l = 0; l < 6; ++l) {
      if (l == k) continue;
      const Mat3 el = step * detail::mandel_basis(l);
      q.matrix(k, l) = (w.evaluate(id + ek + el) - w.evaluate(id + ek - el) -
                        w.evaluate(id - ek + el) + w.evaluate(id - ek - el)) /
                       (4.0 * step * step);
    }
  }
  if (!q.matrix.allFinite()) {
    throw DifferentiationError("q3_from_energy: non-finite energy values near Id");
  }
  const double asym = (q.matrix - q.matrix.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-8 * std::max(1.0, q.matrix.cwiseAbs().maxCoeff())) {
    throw DifferentiationError("q3_from_energy: finite-difference Hessian is not symmetric");
  }
  q.matrix = 0.5 * (q.matrix + q.matrix.transpose()).eval();
  return q;
}

/// Q2 at one surface point: the minimum of Q3 over symmetric completions of
/// a tangential minor, and the linear minimizer map c(x, F_tan).
///
/// Tangential minors are 2x2 matrices in `frame`; c is returned in world
/// coordinates.
struct QuadForm2 {
  QuadForm3 base;
  Vec3 normal;
  Mat32 frame;
  Mat3 reduced;     // Q2 on 2D Mandel coordinates
  Mat3 correction;  // 2D Mandel coordinates -> c

  double apply_tangential(const Mat2& f) const {
    const Vec3 s = to_mandel2(f);
    return s.dot(reduced * s);
  }

  Vec3 minimizer(const Mat2& f) const { return correction * to_mandel2(f); }

  /// The 3x3 matrix F_tan + c (x) n + n (x) c.
  Mat3 completion(const Mat2& f, const Vec3& c) const {
    return frame * f * frame.transpose() + c * normal.transpose() + normal * c.transpose();
  }
};

inline QuadForm2 reduce_q2(const QuadForm3& q3, const Vec3& n, const Mat32& frame) {
  QuadForm2 q;
  q.base = q3;
  q.normal = n;
  q.frame = frame;
  Eigen::Matrix<double, 6, 3> embed;   // 2D Mandel -> 3D Mandel
  Eigen::Matrix<double, 6, 3> couple;  // c -> c (x) n + n (x) c
  for (int k = 0; k < 3; ++k) {
    Vec3 e = Vec3::Zero();
    e(k) = 1.0;
    embed.col(k) = to_mandel(frame * from_mandel2(e) * frame.transpose());
    couple.col(k) = to_mandel(e * n.transpose() + n * e.transpose());
  }
  const Mat3 k = couple.transpose() * q3.matrix * couple;
  const Eigen::SelfAdjointEigenSolver<Mat3> eig(k, Eigen::EigenvaluesOnly);
  if (!(eig.eigenvalues().minCoeff() > 1e-12 * std::max(1.0, q3.matrix.norm()))) {
    throw DegenerateMaterialError("reduce_q2: normal-coupling block of Q3 is singular");
  }
  const Eigen::LDLT<Mat3> solver(k);
  q.correction = -solver.solve(couple.transpose() * q3.matrix * embed);
  const Mat3 r = embed.transpose() * q3.matrix * (embed + couple * q.correction);
  q.reduced = 0.5 * (r + r.transpose());
  return q;
}

inline QuadForm2 reduce_q2(const QuadForm3& q3, const Vec3& n) {
  return reduce_q2(q3, n, complete_frame(n));
}

inline double isotropic_q2_closed_form(double mu, double lambda, const Mat2& f) {
  const Mat2 s = sym(f);
  const double tr = s.trace();
  return 2.0 * mu * s.squaredNorm() + (2.0 * mu * lambda / (2.0 * mu + lambda)) * tr * tr;
}

struct DescentResult {
  double value;
  Vec3 c;
  int iterations;
};

/// Minimizes c -> Q3(F_tan + c (x) n + n (x) c) by steepest descent with
/// exact line search, using only evaluations of Q3. Serves as a check on
/// the linear-solve reduction.

inline DescentResult minimize_q2_by_descent(const QuadForm3& q3, const Vec3& n,
                                            const Mat32& frame, const Mat2& f,
                                            int max_iterations = 5000) {
  const Mat3 base = frame * f * frame.transpose();
  auto objective = [&](const Vec3& c) {
    return q3.apply(base + c * n.transpose() + n * c.transpose());
  };
  Vec3 c = Vec3::Zero();
  const double scale = std::max(objective(c), 1e-300);
  const double eps = 1e-3;
  int it = 0;
  for (; it < max_iterations; ++it) {
    Vec3 g;
    for (int j = 0; j < 3; ++j) {
      Vec3 e = Vec3::Zero();
      e(j) = eps;
      g(j) = (objective(c + e) - objective(c - e)) / (2.0 * eps);
    }
    const double gn = g.norm();
    if (gn <= 1e-10 * std::sqrt(scale) + 1e-300) break;
    const Vec3 d = -g / gn;
    const double f0 = objective(c);
    // Along a line the objective is f0 + alpha * slope + alpha^2 * curv.
    const double slope = g.dot(d);
    const double curv = 0.5 * (objective(c + d) + objective(c - d)) - f0;
    if (!(curv > 0.0)) break;
    const double alpha = -slope / (2.0 * curv);
    if (std::abs(alpha) < 1e-17) break;
    c += alpha * d;
  }
  return {objective(c), c, it};
}

}  // namespace shellgamma
