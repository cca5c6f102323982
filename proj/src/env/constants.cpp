#include "gpc/env/constants.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

#include "gpc/errors.hpp"

namespace gpc::env {

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(
    PendulumConstants, gravity, mass, length, dt, substeps, max_torque, max_speed, time_limit,
    cost_angle, cost_velocity, cost_torque, init_angle, init_speed, ref_energy_gain,
    ref_switch_cos, ref_kp, ref_kd)

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(
    CartPoleConstants, gravity, cart_mass, pole_mass, half_length, dt, force_limit,
    position_limit, angle_limit, time_limit, init_range, ref_k_position, ref_k_velocity,
    ref_k_angle, ref_k_rate)

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(
    LanderConstants, gravity, dt, substeps, time_limit, main_accel, side_accel, side_torque,
    leg_x, hull_half_width, hull_height, contact_stiffness, contact_damping, friction,
    crash_speed, x_limit, start_height, init_position, init_velocity, init_angle, rest_steps,
    rest_speed, main_fuel_cost, side_fuel_cost, ref_angle_x, ref_angle_vx, ref_angle_limit,
    ref_hover_x, ref_angle_kp, ref_angle_kd, ref_hover_kp, ref_hover_kd, ref_gain)

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(EnvConstants, version, pendulum, cartpole, lander)

EnvConstants constants_from_json_text(const std::string& text) {
  EnvConstants c;
  try {
    nlohmann::json::parse(text).get_to(c);
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("malformed environment constants: ") + e.what());
  }
  if (c.version != kConstantsVersion)
    throw UsageError("environment constants version " + std::to_string(c.version) +
                     " is not supported (expected " + std::to_string(kConstantsVersion) + ")");
  if (c.pendulum.substeps < 1 || c.lander.substeps < 1)
    throw UsageError("substeps must be >= 1");
  return c;
}

EnvConstants load_constants(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open environment constants file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return constants_from_json_text(ss.str());
}

std::string constants_to_json_text(const EnvConstants& c) { return nlohmann::json(c).dump(2); }

}  // namespace gpc::env
