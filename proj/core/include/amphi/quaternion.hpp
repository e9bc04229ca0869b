#pragma once

#include <Eigen/Dense>

namespace amphi {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Scalar-first attitude quaternion. The product is the Hamilton product and a
/// unit quaternion maps body-frame vectors into the inertial frame.
struct Quat {
  double w = 1.0;
  Vec3 v = Vec3::Zero();

  Quat() = default;
  Quat(double w_, const Vec3& v_) : w(w_), v(v_) {}
  Quat(double w_, double x, double y, double z) : w(w_), v(x, y, z) {}

  static Quat identity() { return {}; }

  [[nodiscard]] double norm() const;
  [[nodiscard]] Quat normalized() const;
  [[nodiscard]] Eigen::Vector4d coeffs() const { return {w, v.x(), v.y(), v.z()}; }

  Quat operator-() const { return {-w, -v}; }
  Quat operator+(const Quat& o) const { return {w + o.w, v + o.v}; }
  Quat operator*(double s) const { return {w * s, v * s}; }
};

Mat3 skew(const Vec3& a);

Quat quat_multiply(const Quat& a, const Quat& b);
Quat quat_conjugate(const Quat& a);

/// Body -> inertial: q (x) [0; v] (x) q*.
Vec3 quat_rotate(const Quat& q, const Vec3& v);
/// Inertial -> body: q* (x) [0; v] (x) q.
Vec3 quat_rotate_inverse(const Quat& q, const Vec3& v);
/// Rotation matrix equivalent of quat_rotate.
Mat3 rotation_matrix(const Quat& q);

/// Minimal rotation taking unit vector `from` onto unit vector `to`:
///   [1 + from.to ; from x to] / sqrt(2 (1 + from.to)).
/// For antiparallel inputs returns a half-turn about the body x axis
/// (or about y when `from` is itself along x).
Quat quat_from_two_vectors(const Vec3& from, const Vec3& to);

/// Pure yaw rotation [cos(psi/2), 0, 0, sin(psi/2)].
Quat quat_from_yaw(double psi);

/// Yaw angle of q: the twist about the third axis left after removing the tilt.
double yaw_of(const Quat& q);

/// Kinematics q_dot = 1/2 q (x) [0; omega] with omega in the body frame.
Quat quat_derivative(const Quat& q, const Vec3& omega_body);

}  // namespace amphi
