#pragma once

#include <string>

#include "amphi/experiment.hpp"

namespace amphi {

// JSON parameter file. Every section and key is optional; missing values keep
// their defaults and unknown keys are rejected. Layout:
//
//   { "experiment": { "n_envs", "seed", "dims": [nx, ny, nh], "resolution",
//                     "margin_fraction", "threads" },
//     "cave":       { "n_bores", "n_min", "n_max", "l_bore", "r_bore",
//                     "noise_scale", "attempts_per_bore" },
//     "mission":    { "max_time", "max_node_arrivals", "tracking_abort",
//                     "arrival_speed", "look_ahead" },
//     "planner":    { "node_fraction", "n_nodes", "r_max_edge", "relaxed_factor",
//                     "k_new", "c_large", "mode", "pricing", "edge_case" },
//     "sensor":     { "angular_resolution_deg", "radius" },
//     "dynamics":   { "dt", "v_c",
//                     "vehicle":  { "inertia": [3], "mass", "arm_length", "rotor_radius",
//                                   "thrust_coeff", "torque_coeff", "battery_capacity" },
//                     "air" / "water": { "density", "buoyancy", "drag_area": [3],
//                                   "attitude_drag": [3], "motor_efficiency",
//                                   "idle_power", "omega_max" },
//                     "gains":    { "air" / "water": { "kp_pos", "kd_pos", "kp_att",
//                                   "kd_att" } (each [3]) },
//                     "settling": { "fraction", "floor", "hold", "timeout" },
//                     "spline":   { "prefilter", "max_iterations", "gradient_tolerance" } } }
//
// The mission battery is the vehicle's battery_capacity.

/// Parses a parameter document; throws InvalidArgument on bad keys or values.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);
/// Full document with every value, formatted with two-space indentation.
std::string dump_config(const ExperimentConfig& config);

}  // namespace amphi
