#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "amphi/controller.hpp"
#include "amphi/trajectory.hpp"
#include "amphi/vehicle.hpp"

namespace amphi {

/// Per-axis settling corridor for stop-stop maneuvers: |x_k - d_k| must stay
/// within max(fraction |d_k|, floor) for `hold` seconds.
struct SettlingCriterion {
  double fraction = 0.02;
  double floor = 0.02;   ///< m, used when the commanded displacement is small or zero
  double hold = 5.0;     ///< s of uninterrupted containment that counts as settled
  double timeout = 120.0;  ///< s of simulated time
  void validate() const;
};

/// Everything that influences a simulated maneuver, and therefore a cost table.
struct DynamicsParams {
  VehicleParams vehicle;
  MediumParams air = default_air();
  MediumParams water = default_water();
  ControllerGains gains;
  double dt = 0.002;   ///< integration and control period, s
  double v_c = 1.0;    ///< nominal cruise speed, m/s
  SettlingCriterion settling;
  SplineOptions spline;

  void validate() const;
  [[nodiscard]] const MediumParams& medium(Medium m) const {
    return m == Medium::Air ? air : water;
  }
  /// Stable text rendering of every field (%.17g); the hash is taken over it.
  [[nodiscard]] std::string canonical() const;
  [[nodiscard]] std::uint64_t hash() const;
  [[nodiscard]] ControlStack make_stack() const;
};

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view data);

}  // namespace amphi
