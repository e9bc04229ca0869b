#pragma once

#include <array>
#include <span>
#include <vector>

#include "amphi/quaternion.hpp"

namespace amphi {

/// Position, velocity and acceleration, one entry per axis.
struct KinematicState {
  Vec3 x = Vec3::Zero();
  Vec3 v = Vec3::Zero();
  Vec3 a = Vec3::Zero();
};

using Poly7 = std::array<double, 8>;

/// Two 7th-order polynomials per axis: s01(t) = sum a_i (t - t0)^i on [t0, t1)
/// and s12(t) = sum b_i (t - t1)^i on [t1, t2]. When the last two nodes
/// coincide (final stop) t2 == t1 and s12 is the constant n1.
struct TrajectorySegment {
  std::array<Poly7, 3> coeffs_01{};
  std::array<Poly7, 3> coeffs_12{};
  double t0 = 0.0;
  double t1 = 0.0;
  double t2 = 0.0;
  KinematicState start;      ///< boundary state at t0
  Vec3 n1 = Vec3::Zero();
  Vec3 n2 = Vec3::Zero();
  Vec3 node_velocity = Vec3::Zero();  ///< prescribed velocity at t1
  bool optimized = true;     ///< false if the arc-length solve fell back
  int iterations = 0;

  [[nodiscard]] bool single_stop() const { return t2 == t1; }
};

struct SplineOptions {
  bool prefilter = true;
  int max_iterations = 100;
  double gradient_tolerance = 1e-8;
};

/// t_{i+1} = t_i + |n_{i+1} - n_i| / v_c. Throws on v_c <= 0 or repeated nodes.
std::vector<double> arrival_times(std::span<const Vec3> nodes, double v_c, double t0);

/// Node velocities: the first is `start_velocity`, the last is zero, interior
/// ones are v_c along the incoming direction. With `prefilter`, any component
/// whose incoming and outgoing unit directions strictly change sign is zeroed.
std::vector<Vec3> node_velocities(std::span<const Vec3> nodes, double v_c,
                                  const Vec3& start_velocity, bool prefilter = true);

/// Per-axis result of the constrained arc-length minimisation. Coefficients are
/// in physical time units (a_i multiplies (t - t0)^i).
struct AxisSolution {
  Poly7 a{};
  Poly7 b{};
  Poly7 a_min_norm{};
  Poly7 b_min_norm{};
  double cost = 0.0;           ///< arc length of the optimised polynomials
  double cost_min_norm = 0.0;  ///< arc length of the minimum-norm particular solution
  bool converged = false;
  int iterations = 0;
};

/// Solves one axis: 3 initial conditions, rest at t2 (position x2), position and
/// velocity x1, v1 matched at t1 from both sides, and acceleration continuity.
/// The free coefficients minimise the sum over both intervals of
/// integral sqrt(1 + xdot^2) dt (20-point Gauss-Legendre per interval) by
/// damped Newton on the null space of the constraints. The minimum-norm
/// reference is taken in time-normalised coordinates. T2 == 0 solves the
/// single-stop variant (rest at x1 on arrival).
AxisSolution solve_axis(double x0, double v0, double a0, double x1, double v1, double x2, double T1,
                        double T2, const SplineOptions& options = {});

/// Arc length of one axis polynomial on [0, T] with the same quadrature.
double axis_arc_length(const Poly7& c, double T);

/// Spline from the current state through n1 to a stop at n2. Node times come
/// from arrival_times over (start.x, n1, n2); n2 == n1 gives a single stop.
/// Throws InvalidArgument when n1 coincides with the start position.
TrajectorySegment build_spline(const KinematicState& start, double t0, const Vec3& n1,
                               const Vec3& n2, double v_c, const SplineOptions& options = {});

/// Desired state at t in [t0, t2]; throws InvalidArgument outside.
KinematicState eval_spline(const TrajectorySegment& seg, double t);

/// Largest violation of the boundary/junction constraints (position, velocity,
/// acceleration), evaluated directly from the stored coefficients.
double constraint_residual(const TrajectorySegment& seg);

struct AxisSample {
  double p = 0.0;
  double v = 0.0;
  double a = 0.0;
};

/// Value and first two derivatives of a polynomial at tau (Horner).
AxisSample eval_poly(const Poly7& c, double tau);

}  // namespace amphi
