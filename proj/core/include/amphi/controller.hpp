#pragma once

#include <array>
#include <functional>
#include <optional>
#include <vector>

#include "amphi/trajectory.hpp"
#include "amphi/vehicle.hpp"

namespace amphi {

/// Diagonal PD gains.
struct Gains {
  Vec3 kp = Vec3::Ones();
  Vec3 kd = Vec3::Ones();
};

struct MediumGains {
  Gains position;
  Gains attitude;
};

struct ControllerGains {
  MediumGains air{{Vec3::Constant(6.0), Vec3::Constant(4.0)}, {Vec3::Constant(60.0), Vec3::Constant(3.0)}};
  MediumGains water{{Vec3::Constant(4.0), Vec3::Constant(4.0)}, {Vec3::Constant(80.0), Vec3::Constant(4.0)}};

  [[nodiscard]] const MediumGains& for_medium(Medium m) const {
    return m == Medium::Air ? air : water;
  }
  /// Throws InvalidArgument unless every diagonal entry is positive and finite.
  void validate() const;
};

/// Output of the positional layer. Yaw is fixed at zero.
struct DesiredAttitude {
  Quat q_d;
  Vec3 w_d = Vec3::Zero();  ///< body rates
  double thrust = 0.0;      ///< U0
  Vec3 force = Vec3::Zero();  ///< demanded inertial thrust F_I
  double psi_d = 0.0;
  double psi_dot_d = 0.0;
};

/// Positional controller for one vehicle. Holds the previous F_I for the
/// backward-difference rate estimate and the last attitude for free-fall.
class PositionalController {
 public:
  explicit PositionalController(double dt);

  /// F_I = m (r_dd - g), inertial frame (z down), with tilt capped at 60 deg
  /// and at least 0.2 m g of lift.
  DesiredAttitude air(const VehicleState& s, const KinematicState& des, const Gains& g,
                      const VehicleParams& vp);
  /// F_I = m r_dd - b m g - F_D with the drag rotated into the inertial frame.
  DesiredAttitude water(const VehicleState& s, const KinematicState& des, const Gains& g,
                        const MediumParams& med, const VehicleParams& vp);

  /// Forgets the differentiator history (used on a medium switch).
  void reset();
  [[nodiscard]] double dt() const { return dt_; }

  static constexpr double kMinForce = 1e-9;

 private:
  DesiredAttitude finish(const Vec3& force);

  double dt_;
  std::optional<Vec3> prev_force_;
  Quat prev_q_;
};

/// Quaternion PD law U = -Kp vec(q_e) - Kd (w_m - w_d), q_e = q_d* (x) q_m with
/// the sign chosen so that its scalar part is non-negative.
Vec3 attitude(const VehicleState& s, const DesiredAttitude& des, const Gains& g);

/// Error quaternion with non-negative scalar part.
Quat attitude_error(const Quat& q_desired, const Quat& q_measured);

struct ControlOutput {
  DesiredAttitude desired;
  ControlVector command;
  MixResult mix;
  Medium medium = Medium::Air;
};

/// Positional + attitude layers and the mixer for both media.
class ControlStack {
 public:
  ControlStack(ControllerGains gains, VehicleParams vp, MediumParams air, MediumParams water,
               double dt);

  ControlOutput compute(const VehicleState& s, const KinematicState& des, Medium medium);
  void reset();

  [[nodiscard]] const MediumParams& medium_params(Medium m) const {
    return m == Medium::Air ? air_ : water_;
  }
  [[nodiscard]] const VehicleParams& vehicle() const { return vp_; }
  [[nodiscard]] const ControllerGains& gains() const { return gains_; }
  [[nodiscard]] double dt() const { return positional_.dt(); }

 private:
  ControllerGains gains_;
  VehicleParams vp_;
  MediumParams air_;
  MediumParams water_;
  PositionalController positional_;
  std::optional<Medium> last_medium_;
};

/// One row of an execution trace (inertial frame, z down).
struct TraceSample {
  double t = 0.0;
  Vec3 x = Vec3::Zero();
  Vec3 v = Vec3::Zero();
  Vec3 a = Vec3::Zero();
  Quat q;
  Vec3 w = Vec3::Zero();
  std::array<double, 4> omega{};
  double power = 0.0;
  double energy = 0.0;
  Vec3 x_d = Vec3::Zero();
  Medium medium = Medium::Air;
  bool saturated = false;
};

struct FlightOptions {
  double dt = 0.002;
  WaterSurface water{0.0};               ///< world height of the surface
  std::optional<Medium> forced_medium;   ///< ignore the surface and fly in this medium
  bool record_trace = false;
};

/// Closed-loop simulation: the control stack is evaluated at the current
/// state, rotor speeds are held over one RK4 step.
class Flight {
 public:
  Flight(ControlStack stack, FlightOptions options, VehicleState initial);

  /// Advances one step toward the desired state.
  void step(const KinematicState& des);

  /// Medium at an inertial position.
  [[nodiscard]] Medium medium_at_position(const Vec3& x_inertial) const;

  [[nodiscard]] const VehicleState& state() const { return state_; }
  /// Inertial acceleration at the current state under the last command.
  [[nodiscard]] const Vec3& acceleration() const { return accel_; }
  [[nodiscard]] const std::vector<TraceSample>& trace() const { return trace_; }
  [[nodiscard]] std::vector<TraceSample> take_trace() { return std::move(trace_); }
  [[nodiscard]] const FlightOptions& options() const { return options_; }
  [[nodiscard]] ControlStack& stack() { return stack_; }
  [[nodiscard]] bool saturated_ever() const { return saturated_ever_; }
  [[nodiscard]] int medium_switches() const { return medium_switches_; }

 private:
  ControlStack stack_;
  FlightOptions options_;
  VehicleState state_;
  Vec3 accel_ = Vec3::Zero();
  std::vector<TraceSample> trace_;
  bool saturated_ever_ = false;
  int medium_switches_ = 0;
  std::optional<Medium> last_medium_;
};

}  // namespace amphi
