#include "amphi/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "amphi/errors.hpp"

namespace amphi {
namespace {

using nlohmann::json;

// Reads the keys of one object and rejects any it did not ask for.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw InvalidArgument(path_ + ": expected an object");
  }
  ~Section() noexcept(false) {
    if (std::uncaught_exceptions() > 0) return;
    for (const auto& [key, _] : j_.items()) {
      if (!seen_.count(key)) throw InvalidArgument(path_ + ": unknown key '" + key + "'");
    }
  }
  Section(const Section&) = delete;
  Section& operator=(const Section&) = delete;

  template <typename T>
  void read(const char* key, T& out) {
    seen_.insert(key);
    if (!j_.contains(key)) return;
    try {
      out = j_.at(key).get<T>();
    } catch (const json::exception& e) {
      throw InvalidArgument(path_ + "." + key + ": " + e.what());
    }
  }
  void read(const char* key, Vec3& out) {
    std::vector<double> v;
    read(key, v);
    if (!j_.contains(key)) return;
    if (v.size() != 3) throw InvalidArgument(path_ + "." + key + ": expected 3 numbers");
    out = Vec3(v[0], v[1], v[2]);
  }
  bool has(const char* key) {
    seen_.insert(key);
    return j_.contains(key);
  }
  [[nodiscard]] const json& at(const char* key) const { return j_.at(key); }
  [[nodiscard]] std::string child(const char* key) const { return path_ + "." + key; }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

json vec(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

void read_medium(Section& parent, const char* key, MediumParams& m) {
  if (!parent.has(key)) return;
  Section s(parent.at(key), parent.child(key));
  s.read("density", m.density);
  s.read("buoyancy", m.buoyancy);
  s.read("drag_area", m.drag_area);
  s.read("attitude_drag", m.attitude_drag);
  s.read("motor_efficiency", m.motor_efficiency);
  s.read("idle_power", m.idle_power);
  s.read("omega_max", m.omega_max);
}

json write_medium(const MediumParams& m) {
  return {{"density", m.density},
          {"buoyancy", m.buoyancy},
          {"drag_area", vec(m.drag_area)},
          {"attitude_drag", vec(m.attitude_drag)},
          {"motor_efficiency", m.motor_efficiency},
          {"idle_power", m.idle_power},
          {"omega_max", m.omega_max}};
}

void read_gains(Section& parent, const char* key, MediumGains& g) {
  if (!parent.has(key)) return;
  Section s(parent.at(key), parent.child(key));
  s.read("kp_pos", g.position.kp);
  s.read("kd_pos", g.position.kd);
  s.read("kp_att", g.attitude.kp);
  s.read("kd_att", g.attitude.kd);
}

json write_gains(const MediumGains& g) {
  return {{"kp_pos", vec(g.position.kp)},
          {"kd_pos", vec(g.position.kd)},
          {"kp_att", vec(g.attitude.kp)},
          {"kd_att", vec(g.attitude.kd)}};
}

void read_dynamics(Section& parent, DynamicsParams& d) {
  if (!parent.has("dynamics")) return;
  Section s(parent.at("dynamics"), "dynamics");
  s.read("dt", d.dt);
  s.read("v_c", d.v_c);
  if (s.has("vehicle")) {
    Section v(s.at("vehicle"), "dynamics.vehicle");
    v.read("inertia", d.vehicle.inertia);
    v.read("mass", d.vehicle.mass);
    v.read("arm_length", d.vehicle.arm_length);
    v.read("rotor_radius", d.vehicle.rotor_radius);
    v.read("thrust_coeff", d.vehicle.thrust_coeff);
    v.read("torque_coeff", d.vehicle.torque_coeff);
    v.read("battery_capacity", d.vehicle.battery_capacity);
  }
  read_medium(s, "air", d.air);
  read_medium(s, "water", d.water);
  if (s.has("gains")) {
    Section g(s.at("gains"), "dynamics.gains");
    read_gains(g, "air", d.gains.air);
    read_gains(g, "water", d.gains.water);
  }
  if (s.has("settling")) {
    Section st(s.at("settling"), "dynamics.settling");
    st.read("fraction", d.settling.fraction);
    st.read("floor", d.settling.floor);
    st.read("hold", d.settling.hold);
    st.read("timeout", d.settling.timeout);
  }
  if (s.has("spline")) {
    Section sp(s.at("spline"), "dynamics.spline");
    sp.read("prefilter", d.spline.prefilter);
    sp.read("max_iterations", d.spline.max_iterations);
    sp.read("gradient_tolerance", d.spline.gradient_tolerance);
  }
}

template <typename Enum, typename Parse>
void read_enum(Section& s, const char* key, Enum& out, Parse parse) {
  std::string text;
  if (!s.has(key)) return;
  s.read(key, text);
  out = parse(text);
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("config: ") + e.what());
  }
  ExperimentConfig c;
  {
    Section root(doc, "config");
    if (root.has("experiment")) {
      Section s(root.at("experiment"), "experiment");
      s.read("n_envs", c.n_envs);
      s.read("seed", c.seed);
      std::vector<int> dims;
      s.read("dims", dims);
      if (!dims.empty()) {
        if (dims.size() != 3) throw InvalidArgument("experiment.dims: expected 3 integers");
        c.dims = {dims[0], dims[1], dims[2]};
      }
      s.read("resolution", c.resolution);
      s.read("margin_fraction", c.margin_fraction);
      s.read("threads", c.threads);
    }
    if (root.has("cave")) {
      Section s(root.at("cave"), "cave");
      s.read("n_bores", c.cave.n_bores);
      s.read("n_min", c.cave.n_min);
      s.read("n_max", c.cave.n_max);
      s.read("l_bore", c.cave.l_bore);
      s.read("r_bore", c.cave.r_bore);
      s.read("noise_scale", c.cave.noise_scale);
      s.read("attempts_per_bore", c.cave.attempts_per_bore);
    }
    MissionConfig& m = c.mission;
    if (root.has("mission")) {
      Section s(root.at("mission"), "mission");
      s.read("max_time", m.max_time);
      s.read("max_node_arrivals", m.max_node_arrivals);
      s.read("tracking_abort", m.tracking_abort);
      s.read("arrival_speed", m.arrival_speed);
      s.read("look_ahead", m.look_ahead);
    }
    if (root.has("planner")) {
      Section s(root.at("planner"), "planner");
      s.read("node_fraction", m.planner.node_fraction);
      s.read("n_nodes", m.planner.n_nodes);
      s.read("r_max_edge", m.planner.r_max_edge);
      s.read("relaxed_factor", m.planner.relaxed_factor);
      s.read("k_new", m.planner.k_new);
      s.read("c_large", m.planner.c_large);
      read_enum(s, "mode", m.planner.mode, parse_planner_mode);
      read_enum(s, "pricing", m.planner.pricing, parse_pricing);
      read_enum(s, "edge_case", m.planner.edge_case, parse_edge_case);
    }
    if (root.has("sensor")) {
      Section s(root.at("sensor"), "sensor");
      s.read("angular_resolution_deg", m.sensor.angular_resolution_deg);
      s.read("radius", m.sensor.radius);
    }
    read_dynamics(root, m.dynamics);
  }
  c.mission.battery = c.mission.dynamics.vehicle.battery_capacity;
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string dump_config(const ExperimentConfig& c) {
  const MissionConfig& m = c.mission;
  const DynamicsParams& d = m.dynamics;
  json doc;
  doc["experiment"] = {{"n_envs", c.n_envs},
                       {"seed", c.seed},
                       {"dims", {c.dims.nx, c.dims.ny, c.dims.nh}},
                       {"resolution", c.resolution},
                       {"margin_fraction", c.margin_fraction},
                       {"threads", c.threads}};
  doc["cave"] = {{"n_bores", c.cave.n_bores},         {"n_min", c.cave.n_min},
                 {"n_max", c.cave.n_max},             {"l_bore", c.cave.l_bore},
                 {"r_bore", c.cave.r_bore},           {"noise_scale", c.cave.noise_scale},
                 {"attempts_per_bore", c.cave.attempts_per_bore}};
  doc["mission"] = {{"max_time", m.max_time},
                    {"max_node_arrivals", m.max_node_arrivals},
                    {"tracking_abort", m.tracking_abort},
                    {"arrival_speed", m.arrival_speed},
                    {"look_ahead", m.look_ahead}};
  doc["planner"] = {{"node_fraction", m.planner.node_fraction},
                    {"n_nodes", m.planner.n_nodes},
                    {"r_max_edge", m.planner.r_max_edge},
                    {"relaxed_factor", m.planner.relaxed_factor},
                    {"k_new", m.planner.k_new},
                    {"c_large", m.planner.c_large},
                    {"mode", to_string(m.planner.mode)},
                    {"pricing", to_string(m.planner.pricing)},
                    {"edge_case", to_string(m.planner.edge_case)}};
  doc["sensor"] = {{"angular_resolution_deg", m.sensor.angular_resolution_deg},
                   {"radius", m.sensor.radius}};
  doc["dynamics"] = {
      {"dt", d.dt},
      {"v_c", d.v_c},
      {"vehicle",
       {{"inertia", vec(d.vehicle.inertia)},
        {"mass", d.vehicle.mass},
        {"arm_length", d.vehicle.arm_length},
        {"rotor_radius", d.vehicle.rotor_radius},
        {"thrust_coeff", d.vehicle.thrust_coeff},
        {"torque_coeff", d.vehicle.torque_coeff},
        {"battery_capacity", d.vehicle.battery_capacity}}},
      {"air", write_medium(d.air)},
      {"water", write_medium(d.water)},
      {"gains", {{"air", write_gains(d.gains.air)}, {"water", write_gains(d.gains.water)}}},
      {"settling",
       {{"fraction", d.settling.fraction},
        {"floor", d.settling.floor},
        {"hold", d.settling.hold},
        {"timeout", d.settling.timeout}}},
      {"spline",
       {{"prefilter", d.spline.prefilter},
        {"max_iterations", d.spline.max_iterations},
        {"gradient_tolerance", d.spline.gradient_tolerance}}}};
  return doc.dump(2) + "\n";
}

}  // namespace amphi
