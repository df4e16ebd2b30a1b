#pragma once

#include <array>
#include <cmath>

#include <Eigen/Dense>

namespace shellgamma {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;
using Mat6 = Eigen::Matrix<double, 6, 6>;
using Mat32 = Eigen::Matrix<double, 3, 2>;

/// Second partials of a map R^2 -> R^3, ordered (11, 12, 22).
using Hess3 = std::array<Vec3, 3>;

inline constexpr double kPi = 3.14159265358979323846;

inline int hess_index(int i, int j) { return i + j; }

inline Mat3 sym(const Mat3& m) { return 0.5 * (m + m.transpose()); }
inline Mat2 sym(const Mat2& m) { return 0.5 * (m + m.transpose()); }

/// Cross-product matrix: cross_matrix(w) * v == w.cross(v).
inline Mat3 cross_matrix(const Vec3& w) {
  Mat3 m;
  m << 0.0, -w.z(), w.y(),  //
      w.z(), 0.0, -w.x(),   //
      -w.y(), w.x(), 0.0;
  return m;
}

// Mandel coordinates of the symmetric part: (S11, S22, S33, r S23, r S13, r S12)
// with r = sqrt(2), so that |S|^2 equals the Euclidean norm of the 6-vector.
inline Vec6 to_mandel(const Mat3& f) {
  const double r = std::sqrt(2.0);
  Vec6 s;
  s << f(0, 0), f(1, 1), f(2, 2),  //
      r * 0.5 * (f(1, 2) + f(2, 1)), r * 0.5 * (f(0, 2) + f(2, 0)),
      r * 0.5 * (f(0, 1) + f(1, 0));
  return s;
}

inline Mat3 from_mandel(const Vec6& s) {
  const double q = 1.0 / std::sqrt(2.0);
  Mat3 m;
  m << s(0), q * s(5), q * s(4),  //
      q * s(5), s(1), q * s(3),   //
      q * s(4), q * s(3), s(2);
  return m;
}

// Two-dimensional Mandel coordinates (S11, S22, r S12).
inline Vec3 to_mandel2(const Mat2& f) {
  return {f(0, 0), f(1, 1), std::sqrt(2.0) * 0.5 * (f(0, 1) + f(1, 0))};
}

inline Mat2 from_mandel2(const Vec3& s) {
  const double q = 1.0 / std::sqrt(2.0);
  Mat2 m;
  m << s(0), q * s(2), q * s(2), s(1);
  return m;
}

/// Rotation by `angle` about the unit vector `axis` (Rodrigues).
inline Mat3 axis_angle_rotation(const Vec3& axis, double angle) {
  const Vec3 a = axis.normalized();
  return std::cos(angle) * Mat3::Identity() + std::sin(angle) * cross_matrix(a) +
         (1.0 - std::cos(angle)) * a * a.transpose();
}

/// Orthonormal pair spanning the plane orthogonal to the unit vector n.
inline Mat32 complete_frame(const Vec3& n) {
  const Vec3 seed = std::abs(n.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
  const Vec3 e1 = (seed - seed.dot(n) * n).normalized();
  Mat32 e;
  e.col(0) = e1;
  e.col(1) = n.cross(e1);
  return e;
}

}  // namespace shellgamma
