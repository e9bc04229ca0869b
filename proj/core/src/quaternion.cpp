#include "amphi/quaternion.hpp"

#include <cmath>
#include <numbers>

namespace amphi {

double Quat::norm() const { return std::sqrt(w * w + v.squaredNorm()); }

Quat Quat::normalized() const {
  const double n = norm();
  return {w / n, v / n};
}

Mat3 skew(const Vec3& a) {
  Mat3 m;
  m << 0.0, -a.z(), a.y(),
       a.z(), 0.0, -a.x(),
       -a.y(), a.x(), 0.0;
  return m;
}

Quat quat_multiply(const Quat& a, const Quat& b) {
  return {a.w * b.w - a.v.dot(b.v), a.w * b.v + b.w * a.v + a.v.cross(b.v)};
}

Quat quat_conjugate(const Quat& a) { return {a.w, -a.v}; }

Vec3 quat_rotate(const Quat& q, const Vec3& v) {
  return quat_multiply(quat_multiply(q, Quat(0.0, v)), quat_conjugate(q)).v;
}

Vec3 quat_rotate_inverse(const Quat& q, const Vec3& v) {
  return quat_multiply(quat_multiply(quat_conjugate(q), Quat(0.0, v)), q).v;
}

Mat3 rotation_matrix(const Quat& q) {
  const double w = q.w, x = q.v.x(), y = q.v.y(), z = q.v.z();
  Mat3 r;
  r << 1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y),
       2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x),
       2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y);
  return r;
}

Quat quat_from_two_vectors(const Vec3& from, const Vec3& to) {
  const double c = from.dot(to);
  if (1.0 + c < 1e-12) {
    Vec3 axis = Vec3::UnitX();
    if (std::abs(from.dot(axis)) > 0.9) axis = Vec3::UnitY();
    axis = (axis - from * from.dot(axis)).normalized();
    return {0.0, axis};
  }
  const double s = std::sqrt(2.0 * (1.0 + c));
  return Quat(1.0 + c, skew(from) * to) * (1.0 / s);
}

Quat quat_from_yaw(double psi) {
  return {std::cos(0.5 * psi), 0.0, 0.0, std::sin(0.5 * psi)};
}

double yaw_of(const Quat& q) {
  // Twist angle of the swing-twist split about the body z axis, so a pure tilt has zero yaw.
  double psi = 2.0 * std::atan2(q.v.z(), q.w);
  if (psi > std::numbers::pi) psi -= 2.0 * std::numbers::pi;
  if (psi <= -std::numbers::pi) psi += 2.0 * std::numbers::pi;
  return psi;
}

Quat quat_derivative(const Quat& q, const Vec3& omega_body) {
  return {-0.5 * q.v.dot(omega_body), 0.5 * (skew(q.v) + q.w * Mat3::Identity()) * omega_body};
}

}  // namespace amphi
