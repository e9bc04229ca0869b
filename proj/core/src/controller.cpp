#include "amphi/controller.hpp"

#include <algorithm>
#include <cmath>

#include "amphi/errors.hpp"

namespace amphi {
namespace {

void check_gain(const Vec3& k, const char* what) {
  for (int i = 0; i < 3; ++i) {
    if (!(k[i] > 0.0) || !std::isfinite(k[i])) {
      throw InvalidArgument(std::string("controller gain must be positive: ") + what);
    }
  }
}

Vec3 pd_acceleration(const VehicleState& s, const KinematicState& des, const Gains& g) {
  return des.a + g.kp.cwiseProduct(des.x - s.x) + g.kd.cwiseProduct(des.v - s.v);
}

// Rotor thrust only pushes along -z_B, so a demand pointing below the horizon
// would flip the airframe. Keep some lift and cap the tilt instead.
Vec3 limit_tilt(const Vec3& f, double weight) {
  constexpr double kMaxTan = 1.7320508075688772;  // tan 60 deg
  constexpr double kMinLift = 0.2;
  Vec3 out = f;
  const double lift = std::max(-f.z(), kMinLift * weight);
  out.z() = -lift;
  const double horiz = std::hypot(f.x(), f.y());
  if (horiz > kMaxTan * lift) {
    out.x() *= kMaxTan * lift / horiz;
    out.y() *= kMaxTan * lift / horiz;
  }
  return out;
}

}  // namespace

void ControllerGains::validate() const {
  check_gain(air.position.kp, "air position kp");
  check_gain(air.position.kd, "air position kd");
  check_gain(air.attitude.kp, "air attitude kp");
  check_gain(air.attitude.kd, "air attitude kd");
  check_gain(water.position.kp, "water position kp");
  check_gain(water.position.kd, "water position kd");
  check_gain(water.attitude.kp, "water attitude kp");
  check_gain(water.attitude.kd, "water attitude kd");
}

PositionalController::PositionalController(double dt) : dt_(dt) {
  if (!(dt > 0.0)) throw InvalidArgument("controller period must be positive");
}

void PositionalController::reset() { prev_force_.reset(); }

DesiredAttitude PositionalController::air(const VehicleState& s, const KinematicState& des,
                                          const Gains& g, const VehicleParams& vp) {
  const Vec3 rdd = pd_acceleration(s, des, g);
  return finish(limit_tilt(vp.mass * (rdd - gravity_vector()), vp.mass * gravity_vector().norm()));
}

DesiredAttitude PositionalController::water(const VehicleState& s, const KinematicState& des,
                                            const Gains& g, const MediumParams& med,
                                            const VehicleParams& vp) {
  const Vec3 rdd = pd_acceleration(s, des, g);
  const Vec3 drag = quat_rotate(s.q, body_drag(quat_rotate_inverse(s.q, s.v), med));
  return finish(vp.mass * rdd - med.buoyancy * vp.mass * gravity_vector() - drag);
}

DesiredAttitude PositionalController::finish(const Vec3& force) {
  DesiredAttitude out;
  out.force = force;
  const double mag = force.norm();
  if (mag < kMinForce) {
    out.q_d = prev_q_;
    out.thrust = 0.0;
    prev_force_.reset();
    return out;
  }
  const Vec3 dir = force / mag;
  // Body thrust points along -z_B.
  out.q_d = quat_multiply(quat_from_two_vectors(Vec3(0.0, 0.0, -1.0), dir), quat_from_yaw(0.0));
  out.thrust = mag;

  Vec3 force_dot = Vec3::Zero();
  if (prev_force_) force_dot = (force - *prev_force_) / dt_;
  // d/dt (F / |F|)
  const Vec3 dir_dot = (force_dot - dir * dir.dot(force_dot)) / mag;
  const Vec3 w_inertial = dir.cross(dir_dot);
  out.w_d = quat_rotate_inverse(out.q_d, w_inertial);

  prev_force_ = force;
  prev_q_ = out.q_d;
  return out;
}

Quat attitude_error(const Quat& q_desired, const Quat& q_measured) {
  Quat e = quat_multiply(quat_conjugate(q_desired), q_measured);
  if (e.w < 0.0) e = -e;
  return e;
}

Vec3 attitude(const VehicleState& s, const DesiredAttitude& des, const Gains& g) {
  const Quat e = attitude_error(des.q_d, s.q);
  const Vec3 w_e = s.w - des.w_d;
  return -g.kp.cwiseProduct(e.v) - g.kd.cwiseProduct(w_e);
}

ControlStack::ControlStack(ControllerGains gains, VehicleParams vp, MediumParams air,
                           MediumParams water, double dt)
    : gains_(std::move(gains)),
      vp_(vp),
      air_(std::move(air)),
      water_(std::move(water)),
      positional_(dt) {
  gains_.validate();
  vp_.validate();
  air_.validate();
  water_.validate();
}

void ControlStack::reset() {
  positional_.reset();
  last_medium_.reset();
}

ControlOutput ControlStack::compute(const VehicleState& s, const KinematicState& des,
                                    Medium medium) {
  if (last_medium_ && *last_medium_ != medium) positional_.reset();
  last_medium_ = medium;

  const MediumGains& g = gains_.for_medium(medium);
  ControlOutput out;
  out.medium = medium;
  out.desired = medium == Medium::Air ? positional_.air(s, des, g.position, vp_)
                                      : positional_.water(s, des, g.position, water_, vp_);
  out.command.thrust = out.desired.thrust;
  out.command.moments = attitude(s, out.desired, g.attitude);
  out.mix = mix(out.command, medium_params(medium), vp_);
  return out;
}

Flight::Flight(ControlStack stack, FlightOptions options, VehicleState initial)
    : stack_(std::move(stack)), options_(options), state_(initial) {
  if (!(options_.dt > 0.0)) throw InvalidArgument("flight step must be positive");
}

Medium Flight::medium_at_position(const Vec3& x_inertial) const {
  if (options_.forced_medium) return *options_.forced_medium;
  return medium_at(-x_inertial.z(), options_.water);
}

void Flight::step(const KinematicState& des) {
  const Medium medium = medium_at_position(state_.x);
  if (last_medium_ && *last_medium_ != medium) ++medium_switches_;
  last_medium_ = medium;

  const ControlOutput out = stack_.compute(state_, des, medium);
  const MediumParams& med = stack_.medium_params(medium);
  const StateDerivative d = dynamics_derivative(state_, out.mix.rotors, med, stack_.vehicle());
  accel_ = d.v_dot;
  saturated_ever_ = saturated_ever_ || out.mix.saturated;

  if (options_.record_trace) {
    TraceSample row;
    row.t = state_.t;
    row.x = state_.x;
    row.v = state_.v;
    row.a = d.v_dot;
    row.q = state_.q;
    row.w = state_.w;
    row.omega = out.mix.rotors.omega;
    row.power = d.power;
    row.energy = state_.energy;
    row.x_d = des.x;
    row.medium = medium;
    row.saturated = out.mix.saturated;
    trace_.push_back(row);
  }
  state_ = step_rk4(state_, out.mix.rotors, med, stack_.vehicle(), options_.dt);
}

}  // namespace amphi
