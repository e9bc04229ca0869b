#include "amphi/vehicle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace amphi {

void VehicleParams::validate() const {
  if (!((inertia.array() > 0.0).all() && mass > 0.0 && arm_length > 0.0 && rotor_radius > 0.0 &&
        thrust_coeff > 0.0 && torque_coeff > 0.0 && battery_capacity > 0.0)) {
    throw InvalidArgument("vehicle parameters must all be positive");
  }
}

void MediumParams::validate() const {
  if (!(density > 0.0)) throw InvalidArgument("medium density must be positive");
  if (!(buoyancy >= 0.0 && buoyancy <= 1.0)) throw InvalidArgument("buoyancy factor must be in [0,1]");
  if (!((drag_area.array() >= 0.0).all() && (attitude_drag.array() >= 0.0).all())) {
    throw InvalidArgument("drag coefficients must be non-negative");
  }
  if (!(motor_efficiency > 0.0 && motor_efficiency <= 1.0)) {
    throw InvalidArgument("motor efficiency must be in (0,1]");
  }
  if (!(idle_power >= 0.0 && omega_max > 0.0)) throw InvalidArgument("bad idle power / omega_max");
}

MediumParams default_air() { return MediumParams{}; }

MediumParams default_water() {
  MediumParams m;
  m.medium = Medium::Water;
  m.density = 1000.0;
  m.buoyancy = 0.75;
  m.attitude_drag = Vec3::Constant(0.2);
  m.motor_efficiency = 0.70;
  m.omega_max = 400.0;
  return m;
}

RotorCoefficients rotor_coefficients(const MediumParams& med, const VehicleParams& vp) {
  const double r = vp.rotor_radius;
  const double area = std::numbers::pi * r * r;
  return {vp.thrust_coeff * med.density * area * r * r,
          vp.torque_coeff * med.density * area * r * r * r};
}

ThrustTorque rotor_thrust_torque(double omega, const MediumParams& med, const VehicleParams& vp) {
  const auto k = rotor_coefficients(med, vp);
  return {k.kt * omega * omega, k.kq * omega * omega};
}

MixResult mix(const ControlVector& u, const MediumParams& med, const VehicleParams& vp) {
  const auto k = rotor_coefficients(med, vp);
  const double l = vp.arm_length / std::numbers::sqrt2;
  const double a = u.thrust / k.kt;
  const double b = u.moments.x() / (l * k.kt);
  const double c = u.moments.y() / (l * k.kt);
  const double d = u.moments.z() / k.kq;
  const std::array<double, 4> sq{(a + b + c + d) / 4.0, (a - b + c - d) / 4.0,
                                 (a - b - c + d) / 4.0, (a + b - c - d) / 4.0};
  MixResult out;
  const double max_sq = med.omega_max * med.omega_max;
  // Thrust has priority: clamp the collective first, then shrink the moment
  // part uniformly until every rotor is inside [0, max_sq].
  const double base = std::clamp(a / 4.0, 0.0, max_sq);
  if (base != a / 4.0) out.saturated = true;
  double scale = 1.0;
  for (int i = 0; i < 4; ++i) {
    const double m = sq[i] - a / 4.0;
    if (base + scale * m > max_sq) scale = std::min(scale, (max_sq - base) / m);
    if (base + scale * m < 0.0) scale = std::min(scale, -base / m);
  }
  if (scale < 1.0) out.saturated = true;
  scale = std::max(scale, 0.0);
  for (int i = 0; i < 4; ++i) {
    const double s = std::clamp(base + scale * (sq[i] - a / 4.0), 0.0, max_sq);
    out.rotors.omega[i] = std::sqrt(s);
  }
  return out;
}

ControlVector unmix(const RotorSpeeds& rotors, const MediumParams& med, const VehicleParams& vp) {
  const auto k = rotor_coefficients(med, vp);
  const double l = vp.arm_length / std::numbers::sqrt2;
  std::array<double, 4> t{}, q{};
  for (int i = 0; i < 4; ++i) {
    const double w2 = rotors.omega[i] * rotors.omega[i];
    t[i] = k.kt * w2;
    q[i] = k.kq * w2;
  }
  ControlVector u;
  u.thrust = t[0] + t[1] + t[2] + t[3];
  u.moments = Vec3(l * (t[0] + t[3] - t[1] - t[2]), l * (t[0] + t[1] - t[2] - t[3]),
                   q[0] - q[1] + q[2] - q[3]);
  return u;
}

double electrical_power(const RotorSpeeds& rotors, const MediumParams& med, const VehicleParams& vp) {
  const auto k = rotor_coefficients(med, vp);
  double shaft = 0.0;
  for (double w : rotors.omega) shaft += k.kq * w * w * w;
  return shaft / med.motor_efficiency + med.idle_power;
}

Vec3 body_drag(const Vec3& v_body, const MediumParams& med) {
  return -0.5 * med.density * (med.drag_area.array() * v_body.array().abs() * v_body.array()).matrix();
}

StateDerivative dynamics_derivative(const VehicleState& s, const RotorSpeeds& rotors,
                                    const MediumParams& med, const VehicleParams& vp) {
  const ControlVector u = unmix(rotors, med, vp);
  const Mat3 r = rotation_matrix(s.q);
  const Vec3 thrust_body(0.0, 0.0, -u.thrust);
  const Vec3 drag_body = body_drag(r.transpose() * s.v, med);

  StateDerivative d;
  d.x_dot = s.v;
  d.v_dot = (r * (thrust_body + drag_body)) / vp.mass + med.buoyancy * gravity_vector();
  const Vec3 jw = vp.inertia.cwiseProduct(s.w);
  d.w_dot = (u.moments - s.w.cross(jw) - med.attitude_drag.cwiseProduct(s.w)).cwiseQuotient(vp.inertia);
  d.q_dot = quat_derivative(s.q, s.w);
  d.power = electrical_power(rotors, med, vp);
  return d;
}

namespace {

VehicleState advance(const VehicleState& s, const StateDerivative& d, double h) {
  VehicleState out = s;
  out.x = s.x + h * d.x_dot;
  out.v = s.v + h * d.v_dot;
  out.q = s.q + d.q_dot * h;
  out.w = s.w + h * d.w_dot;
  return out;
}

bool finite(const VehicleState& s) {
  return s.x.allFinite() && s.v.allFinite() && s.w.allFinite() && std::isfinite(s.q.w) &&
         s.q.v.allFinite() && std::isfinite(s.energy);
}

}  // namespace

VehicleState step_rk4(const VehicleState& s, const RotorSpeeds& rotors, const MediumParams& med,
                      const VehicleParams& vp, double dt) {
  if (!(dt > 0.0)) throw InvalidArgument("step_rk4: dt must be positive");
  const StateDerivative k1 = dynamics_derivative(s, rotors, med, vp);
  const StateDerivative k2 = dynamics_derivative(advance(s, k1, 0.5 * dt), rotors, med, vp);
  const StateDerivative k3 = dynamics_derivative(advance(s, k2, 0.5 * dt), rotors, med, vp);
  const StateDerivative k4 = dynamics_derivative(advance(s, k3, dt), rotors, med, vp);

  const double h6 = dt / 6.0;
  VehicleState out = s;
  out.x = s.x + h6 * (k1.x_dot + 2.0 * k2.x_dot + 2.0 * k3.x_dot + k4.x_dot);
  out.v = s.v + h6 * (k1.v_dot + 2.0 * k2.v_dot + 2.0 * k3.v_dot + k4.v_dot);
  out.w = s.w + h6 * (k1.w_dot + 2.0 * k2.w_dot + 2.0 * k3.w_dot + k4.w_dot);
  out.q = (s.q + (k1.q_dot + k2.q_dot * 2.0 + k3.q_dot * 2.0 + k4.q_dot) * h6).normalized();
  out.energy = s.energy + k1.power * dt;
  out.t = s.t + dt;
  if (!finite(out)) throw NumericFailure("step_rk4: non-finite state");
  return out;
}

}  // namespace amphi
