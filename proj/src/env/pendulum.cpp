#include "gpc/env/pendulum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gpc/rng.hpp"

namespace gpc::env {

namespace {

double wrap_angle(double a) {
  return std::remainder(a, 2.0 * std::numbers::pi);
}

}  // namespace

Pendulum::Pendulum(PendulumConstants c)
    : Environment({"pendulum", 3, models::ActionBounds::symmetric(1, c.max_torque), c.time_limit}),
      c_(c) {}

Eigen::VectorXd Pendulum::reset(std::uint64_t seed) {
  Rng rng(seed);
  theta_ = uniform(rng, -c_.init_angle, c_.init_angle);
  theta_dot_ = uniform(rng, -c_.init_speed, c_.init_speed);
  last_torque_ = 0.0;
  begin_episode();
  return observation();
}

void Pendulum::set_state(double theta, double theta_dot) {
  theta_ = theta;
  theta_dot_ = theta_dot;
  begin_episode();
}

Eigen::VectorXd Pendulum::observation() const {
  return Eigen::Vector3d(std::cos(theta_), std::sin(theta_), theta_dot_);
}

double Pendulum::energy() const {
  return 0.5 * theta_dot_ * theta_dot_ + 1.5 * c_.gravity / c_.length * std::cos(theta_);
}

Environment::Outcome Pendulum::advance(const Eigen::VectorXd& action) {
  const double u = action[0];
  const double th = wrap_angle(theta_);
  const double cost = c_.cost_angle * th * th + c_.cost_velocity * theta_dot_ * theta_dot_ +
                      c_.cost_torque * u * u;
  const double h = c_.dt / c_.substeps;
  const double a_grav = 1.5 * c_.gravity / c_.length;
  const double a_ctrl = 3.0 / (c_.mass * c_.length * c_.length);
  for (int i = 0; i < c_.substeps; ++i) {
    theta_dot_ += h * (a_grav * std::sin(theta_) + a_ctrl * u);
    theta_dot_ = std::clamp(theta_dot_, -c_.max_speed, c_.max_speed);
    theta_ += h * theta_dot_;
  }
  theta_ = wrap_angle(theta_);
  last_torque_ = u;
  return {-cost, false};
}

Eigen::VectorXd Pendulum::reference_action(const Eigen::VectorXd& obs) const {
  const double th = std::atan2(obs[1], obs[0]);
  const double w = obs[2];
  double u;
  if (obs[0] > c_.ref_switch_cos) {
    u = -(c_.ref_kp * th + c_.ref_kd * w);
  } else {
    const double target = 1.5 * c_.gravity / c_.length;
    const double e = 0.5 * w * w + target * obs[0];
    u = c_.ref_energy_gain * (target - e) * (w >= 0.0 ? 1.0 : -1.0);
  }
  return Eigen::VectorXd::Constant(1, std::clamp(u, -c_.max_torque, c_.max_torque));
}

std::vector<Shape> Pendulum::render() const {
  const double r = 0.8;
  const double tx = r * std::sin(theta_), ty = r * std::cos(theta_);
  std::vector<Shape> out;
  out.push_back({"polyline", "pole", {{0.0, 0.0}, {tx, ty}}, 0.0});
  out.push_back({"circle", "pivot", {{0.0, 0.0}}, 0.04});
  out.push_back({"circle", "bob", {{tx, ty}}, 0.06});
  if (last_torque_ != 0.0) {
    // Torque indicator: arc length proportional to |u|.
    Shape arc{"polyline", "torque", {}, 0.0};
    const double span = 1.2 * last_torque_ / c_.max_torque;
    for (int i = 0; i <= 8; ++i) {
      const double a = span * i / 8.0;
      arc.points.push_back({0.2 * std::sin(-a), 0.2 * std::cos(-a)});
    }
    out.push_back(std::move(arc));
  }
  return out;
}

}  // namespace gpc::env
