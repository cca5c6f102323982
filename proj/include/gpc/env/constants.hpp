#pragma once

#include <string>

namespace gpc::env {

inline constexpr int kConstantsVersion = 1;

struct PendulumConstants {
  double gravity = 10.0;
  double mass = 1.0;
  double length = 1.0;
  double dt = 0.05;
  int substeps = 20;
  double max_torque = 2.0;
  double max_speed = 8.0;
  int time_limit = 200;
  double cost_angle = 1.0;
  double cost_velocity = 0.1;
  double cost_torque = 0.001;
  double init_angle = 3.141592653589793;  // theta ~ U[-init_angle, init_angle]
  double init_speed = 1.0;
  // Reference controller: energy pumping far from upright, PD near it.
  double ref_energy_gain = 0.5;
  double ref_switch_cos = 0.85;
  double ref_kp = 10.0;
  double ref_kd = 2.0;
};

struct CartPoleConstants {
  double gravity = 9.8;
  double cart_mass = 1.0;
  double pole_mass = 0.1;
  double half_length = 0.5;
  double dt = 0.02;
  double force_limit = 10.0;
  double position_limit = 2.4;
  double angle_limit = 0.2617993877991494;  // pi / 12
  int time_limit = 2500;
  double init_range = 0.05;
  // Reference: u = k_p p + k_v pdot + k_a theta + k_w thetadot.
  double ref_k_position = 1.0;
  double ref_k_velocity = 2.0;
  double ref_k_angle = 25.0;
  double ref_k_rate = 4.0;
};

// Planar rigid body in observation units: pad at the origin, flat ground at
// y = 0, legs as stiff point contacts.
struct LanderConstants {
  double gravity = 1.0;
  double dt = 0.04;
  int substeps = 10;
  int time_limit = 1000;
  double main_accel = 2.5;      // at full throttle
  double side_accel = 0.5;      // lateral, at full throttle
  double side_torque = 2.0;     // angular acceleration at full throttle
  double leg_x = 0.08;          // leg tips at (+-leg_x, 0) in the body frame
  double hull_half_width = 0.07;
  double hull_height = 0.04;    // hull corners at (+-w, h) and (+-w, 2h)
  double contact_stiffness = 400.0;
  double contact_damping = 30.0;
  double friction = 0.8;
  double crash_speed = 0.6;     // vertical touchdown speed that breaks the legs
  double x_limit = 1.0;
  double start_height = 1.4;
  double init_position = 0.2;
  double init_velocity = 0.3;
  double init_angle = 0.05;
  int rest_steps = 20;
  double rest_speed = 0.05;
  double main_fuel_cost = 0.3;
  double side_fuel_cost = 0.03;
  // Reference: PD on attitude and altitude.
  double ref_angle_x = 0.5;
  double ref_angle_vx = 1.0;
  double ref_angle_limit = 0.4;
  double ref_hover_x = 0.55;
  double ref_angle_kp = 0.5;
  double ref_angle_kd = 1.0;
  double ref_hover_kp = 0.5;
  double ref_hover_kd = 0.5;
  double ref_gain = 20.0;
};

struct EnvConstants {
  int version = kConstantsVersion;
  PendulumConstants pendulum;
  CartPoleConstants cartpole;
  LanderConstants lander;
};

// Reads the versioned constants file; absent keys keep their defaults.
EnvConstants load_constants(const std::string& path);
EnvConstants constants_from_json_text(const std::string& text);
std::string constants_to_json_text(const EnvConstants& c);

}  // namespace gpc::env
