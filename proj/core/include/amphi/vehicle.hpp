#pragma once

#include <array>

#include "amphi/grid.hpp"
#include "amphi/quaternion.hpp"

namespace amphi {

/// Gravity magnitude. The inertial frame is x, y horizontal and z pointing
/// down, so gravity is +kGravity along z. World height is h = -z.
inline constexpr double kGravity = 9.81;

inline Vec3 gravity_vector() { return Vec3(0.0, 0.0, kGravity); }

/// World (x, y, h-up) <-> inertial (x, y, z-down).
inline Vec3 world_to_inertial(const Vec3& p) { return Vec3(p.x(), p.y(), -p.z()); }
inline Vec3 inertial_to_world(const Vec3& p) { return Vec3(p.x(), p.y(), -p.z()); }

struct VehicleParams {
  Vec3 inertia{0.0165, 0.0324, 0.0385};  ///< diagonal Jxx, Jyy, Jzz, kg m^2
  double mass = 3.865;                   ///< kg
  double arm_length = 0.200;             ///< m
  double rotor_radius = 0.1905;          ///< m
  double thrust_coeff = 0.0103;          ///< C_T
  double torque_coeff = 0.00118;         ///< C_Q
  double battery_capacity = 1.2e6;       ///< J

  void validate() const;
};

struct MediumParams {
  Medium medium = Medium::Air;
  double density = 1.225;                 ///< kg/m^3
  double buoyancy = 1.0;                  ///< gravity multiplier b
  Vec3 drag_area{0.01, 0.01, 0.03};       ///< flat-plate areas f1, f2, f3, m^2
  Vec3 attitude_drag{0.001, 0.001, 0.001};  ///< diagonal D_w, N m s
  double motor_efficiency = 0.55;
  double idle_power = 15.0;               ///< W
  double omega_max = 1200.0;              ///< rad/s

  void validate() const;
};

MediumParams default_air();
MediumParams default_water();

struct VehicleState {
  Vec3 x = Vec3::Zero();  ///< inertial position, m
  Vec3 v = Vec3::Zero();  ///< inertial velocity, m/s
  Quat q;                 ///< body -> inertial attitude
  Vec3 w = Vec3::Zero();  ///< body rates p, q, r
  double energy = 0.0;    ///< consumed electrical energy, J
  double t = 0.0;         ///< s
};

/// Rotor layout (X configuration, body x forward, y right, z down):
/// 1 front-left, 2 front-right, 3 rear-right, 4 rear-left. Rotors 1 and 3
/// react with +z body torque, 2 and 4 with -z.
struct RotorSpeeds {
  std::array<double, 4> omega{0.0, 0.0, 0.0, 0.0};
};

/// Collective thrust U0 (N) and body moments U1..U3 (N m).
struct ControlVector {
  double thrust = 0.0;
  Vec3 moments = Vec3::Zero();
};

struct RotorCoefficients {
  double kt = 0.0;  ///< T = kt * Omega^2
  double kq = 0.0;  ///< Q = kq * Omega^2
};

RotorCoefficients rotor_coefficients(const MediumParams& med, const VehicleParams& vp);

struct ThrustTorque {
  double thrust = 0.0;
  double torque = 0.0;
};

/// T = C_T rho A (Omega R)^2, Q = C_Q rho A (Omega R)^2 R with A = pi R^2.
ThrustTorque rotor_thrust_torque(double omega, const MediumParams& med, const VehicleParams& vp);

struct MixResult {
  RotorSpeeds rotors;
  bool saturated = false;
};

/// Inverts the X allocation
///   U0 = sum T_i,  U1 = (L/sqrt2)(T1+T4-T2-T3),
///   U2 = (L/sqrt2)(T1+T2-T3-T4),  U3 = Q1-Q2+Q3-Q4
/// for squared rotor speeds. Out-of-range solutions keep the collective
/// (clamped to the feasible range) and scale the moments down uniformly until
/// every rotor lies in [0, omega_max^2]; `saturated` reports that this happened.
MixResult mix(const ControlVector& u, const MediumParams& med, const VehicleParams& vp);

/// Forward allocation: the control vector a set of rotor speeds produces.
ControlVector unmix(const RotorSpeeds& rotors, const MediumParams& med, const VehicleParams& vp);

/// Sum over rotors of shaft power Q_i Omega_i / eta_m, plus idle electronics.
double electrical_power(const RotorSpeeds& rotors, const MediumParams& med, const VehicleParams& vp);

struct StateDerivative {
  Vec3 x_dot = Vec3::Zero();
  Vec3 v_dot = Vec3::Zero();
  Quat q_dot{0.0, Vec3::Zero()};
  Vec3 w_dot = Vec3::Zero();
  double power = 0.0;
};

/// Body-frame quadratic drag -1/2 rho CDA |v_B| o v_B.
Vec3 body_drag(const Vec3& v_body, const MediumParams& med);

/// m v_dot = R T_B + b m g + R F_D(v_B),  J w_dot = U - w x J w - D_w w,
/// q_dot = 1/2 q (x) [0; w]. Drag is evaluated in both media.
StateDerivative dynamics_derivative(const VehicleState& s, const RotorSpeeds& rotors,
                                    const MediumParams& med, const VehicleParams& vp);

/// Classical RK4 with rotor speeds held over the step; the quaternion is
/// renormalized afterwards. Energy grows by P * dt, which is the exact
/// integral of the held power. Throws NumericFailure on a non-finite result.
VehicleState step_rk4(const VehicleState& s, const RotorSpeeds& rotors, const MediumParams& med,
                      const VehicleParams& vp, double dt);

}  // namespace amphi
