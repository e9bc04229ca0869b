#include "amphi/params.hpp"

#include <cmath>
#include <cstdio>

#include "amphi/errors.hpp"

namespace amphi {
namespace {

void put(std::string& out, const char* key, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += key;
  out += '=';
  out += buf;
  out += '\n';
}

void put(std::string& out, const char* key, const Vec3& v) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g", v.x(), v.y(), v.z());
  out += key;
  out += '=';
  out += buf;
  out += '\n';
}

void put_medium(std::string& out, const char* prefix, const MediumParams& m) {
  const std::string p(prefix);
  put(out, (p + ".density").c_str(), m.density);
  put(out, (p + ".buoyancy").c_str(), m.buoyancy);
  put(out, (p + ".drag_area").c_str(), m.drag_area);
  put(out, (p + ".attitude_drag").c_str(), m.attitude_drag);
  put(out, (p + ".motor_efficiency").c_str(), m.motor_efficiency);
  put(out, (p + ".idle_power").c_str(), m.idle_power);
  put(out, (p + ".omega_max").c_str(), m.omega_max);
}

void put_gains(std::string& out, const char* prefix, const MediumGains& g) {
  const std::string p(prefix);
  put(out, (p + ".kp_pos").c_str(), g.position.kp);
  put(out, (p + ".kd_pos").c_str(), g.position.kd);
  put(out, (p + ".kp_att").c_str(), g.attitude.kp);
  put(out, (p + ".kd_att").c_str(), g.attitude.kd);
}

}  // namespace

void SettlingCriterion::validate() const {
  if (!(fraction > 0.0 && fraction < 1.0)) throw InvalidArgument("settling fraction must be in (0,1)");
  if (!(floor > 0.0)) throw InvalidArgument("settling floor must be positive");
  if (!(hold > 0.0)) throw InvalidArgument("settling hold must be positive");
  if (!(timeout > hold)) throw InvalidArgument("settling timeout must exceed hold");
}

void DynamicsParams::validate() const {
  vehicle.validate();
  air.validate();
  water.validate();
  gains.validate();
  settling.validate();
  if (air.medium != Medium::Air || water.medium != Medium::Water) {
    throw InvalidArgument("medium parameter blocks are swapped");
  }
  if (!(dt > 0.0 && dt < 0.1)) throw InvalidArgument("dt must be in (0, 0.1)");
  if (!(v_c > 0.0)) throw InvalidArgument("v_c must be positive");
  if (spline.max_iterations < 1) throw InvalidArgument("spline max_iterations must be >= 1");
}

std::string DynamicsParams::canonical() const {
  std::string out;
  put(out, "vehicle.inertia", vehicle.inertia);
  put(out, "vehicle.mass", vehicle.mass);
  put(out, "vehicle.arm_length", vehicle.arm_length);
  put(out, "vehicle.rotor_radius", vehicle.rotor_radius);
  put(out, "vehicle.thrust_coeff", vehicle.thrust_coeff);
  put(out, "vehicle.torque_coeff", vehicle.torque_coeff);
  put_medium(out, "air", air);
  put_medium(out, "water", water);
  put_gains(out, "gains.air", gains.air);
  put_gains(out, "gains.water", gains.water);
  put(out, "dt", dt);
  put(out, "v_c", v_c);
  put(out, "settling.fraction", settling.fraction);
  put(out, "settling.floor", settling.floor);
  put(out, "settling.hold", settling.hold);
  put(out, "settling.timeout", settling.timeout);
  put(out, "spline.prefilter", spline.prefilter ? 1.0 : 0.0);
  put(out, "spline.max_iterations", spline.max_iterations);
  put(out, "spline.gradient_tolerance", spline.gradient_tolerance);
  return out;
}

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const char c : data) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t DynamicsParams::hash() const { return fnv1a64(canonical()); }

ControlStack DynamicsParams::make_stack() const {
  return ControlStack(gains, vehicle, air, water, dt);
}

}  // namespace amphi
