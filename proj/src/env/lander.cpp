#include "gpc/env/lander.hpp"

#include <algorithm>
#include <cmath>

#include "gpc/rng.hpp"

namespace gpc::env {

namespace {

constexpr double kInertia = 0.01;

struct Vec2 {
  double x, y;
};

// Body-frame offset rotated into the world frame.
Vec2 rotate(double angle, double bx, double by) {
  const double c = std::cos(angle), s = std::sin(angle);
  return {c * bx - s * by, s * bx + c * by};
}

}  // namespace

Lander::Lander(LanderConstants c)
    : Environment({"lander", 8, models::ActionBounds::symmetric(2, 1.0), c.time_limit}), c_(c) {}

Eigen::VectorXd Lander::reset(std::uint64_t seed) {
  Rng rng(seed);
  b_ = {};
  b_.x = uniform(rng, -c_.init_position, c_.init_position);
  b_.y = c_.start_height;
  b_.vx = uniform(rng, -c_.init_velocity, c_.init_velocity);
  b_.vy = uniform(rng, -c_.init_velocity, 0.0);
  b_.angle = uniform(rng, -c_.init_angle, c_.init_angle);
  b_.omega = uniform(rng, -c_.init_angle, c_.init_angle);
  set_body(b_);
  return observation();
}

void Lander::set_body(const Body& b) {
  b_ = b;
  crashed_ = landed_ = false;
  rest_count_ = 0;
  last_main_ = last_side_ = 0.0;
  update_contacts();
  prev_shaping_ = shaping();
  begin_episode();
}

Eigen::VectorXd Lander::observation() const {
  Eigen::VectorXd o(8);
  o << b_.x, b_.y, b_.vx, b_.vy, b_.angle, b_.omega, contact_[0] ? 1.0 : 0.0,
      contact_[1] ? 1.0 : 0.0;
  return o;
}

double Lander::shaping() const {
  return -100.0 * std::hypot(b_.x, b_.y) - 100.0 * std::hypot(b_.vx, b_.vy) -
         100.0 * std::abs(b_.angle) + 10.0 * contact_[0] + 10.0 * contact_[1];
}

void Lander::update_contacts() {
  for (int i = 0; i < 2; ++i) {
    const Vec2 r = rotate(b_.angle, i == 0 ? -c_.leg_x : c_.leg_x, 0.0);
    contact_[i] = b_.y + r.y <= 0.0;
  }
}

Environment::Outcome Lander::advance(const Eigen::VectorXd& action) {
  double main = 0.0, side = 0.0;
  if (action[0] > 0.0) main = 0.5 + 0.5 * std::clamp(action[0], 0.0, 1.0);
  if (std::abs(action[1]) > 0.5) side = std::copysign(std::clamp(std::abs(action[1]), 0.5, 1.0), action[1]);
  last_main_ = main;
  last_side_ = side;

  const double h = c_.dt / c_.substeps;
  bool hard_touchdown = false;
  const bool touching[2] = {contact_[0], contact_[1]};
  for (int k = 0; k < c_.substeps; ++k) {
    const Vec2 up = rotate(b_.angle, 0.0, 1.0);
    const Vec2 right = rotate(b_.angle, 1.0, 0.0);
    double ax = c_.main_accel * main * up.x + c_.side_accel * side * right.x;
    double ay = c_.main_accel * main * up.y + c_.side_accel * side * right.y - c_.gravity;
    double alpha = -c_.side_torque * side;
    for (int i = 0; i < 2; ++i) {
      const Vec2 r = rotate(b_.angle, i == 0 ? -c_.leg_x : c_.leg_x, 0.0);
      const double tip_y = b_.y + r.y;
      if (tip_y > 0.0) continue;
      const double tvx = b_.vx - b_.omega * r.y;
      const double tvy = b_.vy + b_.omega * r.x;
      if (!touching[i] && tvy < -c_.crash_speed) hard_touchdown = true;
      const double fn = std::max(0.0, -c_.contact_stiffness * tip_y - c_.contact_damping * tvy);
      const double ft = -c_.friction * fn * std::tanh(tvx / 0.01);
      ax += ft;
      ay += fn;
      alpha += (r.x * fn - r.y * ft) / kInertia;
    }
    b_.vx += h * ax;
    b_.vy += h * ay;
    b_.omega += h * alpha;
    b_.x += h * b_.vx;
    b_.y += h * b_.vy;
    b_.angle += h * b_.omega;
    update_contacts();
  }

  bool hull_hit = false;
  for (double sx : {-c_.hull_half_width, c_.hull_half_width})
    for (double sy : {c_.hull_height, 2.0 * c_.hull_height})
      if (b_.y + rotate(b_.angle, sx, sy).y < 0.0) hull_hit = true;

  const double s = shaping();
  double reward = s - prev_shaping_;
  prev_shaping_ = s;
  reward -= c_.main_fuel_cost * main + c_.side_fuel_cost * std::abs(side);

  if (hull_hit || hard_touchdown || std::abs(b_.x) > c_.x_limit) {
    crashed_ = true;
    return {-100.0, true};
  }
  const bool resting = contact_[0] && contact_[1] && std::hypot(b_.vx, b_.vy) < c_.rest_speed &&
                       std::abs(b_.omega) < c_.rest_speed;
  rest_count_ = resting ? rest_count_ + 1 : 0;
  if (rest_count_ >= c_.rest_steps) {
    landed_ = true;
    return {100.0, true};
  }
  return {reward, false};
}

Eigen::VectorXd Lander::reference_action(const Eigen::VectorXd& o) const {
  const double angle_target = std::clamp(c_.ref_angle_x * o[0] + c_.ref_angle_vx * o[2],
                                         -c_.ref_angle_limit, c_.ref_angle_limit);
  const double hover_target = c_.ref_hover_x * std::abs(o[0]);
  double angle_todo = (angle_target - o[4]) * c_.ref_angle_kp - o[5] * c_.ref_angle_kd;
  double hover_todo = (hover_target - o[1]) * c_.ref_hover_kp - o[3] * c_.ref_hover_kd;
  if (o[6] > 0.5 || o[7] > 0.5) {
    angle_todo = 0.0;
    hover_todo = -o[3] * c_.ref_hover_kd;
  }
  Eigen::VectorXd a(2);
  a << std::clamp(hover_todo * c_.ref_gain - 1.0, -1.0, 1.0),
      std::clamp(-angle_todo * c_.ref_gain, -1.0, 1.0);
  return a;
}

std::vector<Shape> Lander::render() const {
  // World y in [0, 1.6] maps to [-0.9, 0.7]; x unscaled.
  auto to_scene = [&](double bx, double by) -> std::array<double, 2> {
    const Vec2 r = rotate(b_.angle, bx, by);
    return {b_.x + r.x, b_.y + r.y - 0.9};
  };
  const double w = c_.hull_half_width, hh = c_.hull_height;
  std::vector<Shape> out;
  out.push_back({"polyline", "ground", {{-1.0, -0.9}, {1.0, -0.9}}, 0.0});
  out.push_back({"polyline", "pad", {{-0.2, -0.9}, {0.2, -0.9}}, 0.0});
  out.push_back({"polygon", "hull",
                 {to_scene(-w, hh), to_scene(w, hh), to_scene(w, 3.0 * hh), to_scene(-w, 3.0 * hh)},
                 0.0});
  out.push_back({"polyline", "leg", {to_scene(-0.5 * w, hh), to_scene(-c_.leg_x, 0.0)}, 0.0});
  out.push_back({"polyline", "leg", {to_scene(0.5 * w, hh), to_scene(c_.leg_x, 0.0)}, 0.0});
  if (last_main_ > 0.0)
    out.push_back({"polygon", "flame",
                   {to_scene(-0.3 * w, hh), to_scene(0.3 * w, hh),
                    to_scene(0.0, hh - 0.1 * last_main_)},
                   0.0});
  if (last_side_ != 0.0) {
    const double sx = last_side_ > 0 ? -w : w;
    const double dir = last_side_ > 0 ? -1.0 : 1.0;
    out.push_back({"polyline", "flame",
                   {to_scene(sx, 2.5 * hh), to_scene(sx + dir * 0.05 * std::abs(last_side_), 2.5 * hh)},
                   0.0});
  }
  return out;
}

}  // namespace gpc::env
