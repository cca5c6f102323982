#include "gpc/env/cartpole.hpp"

#include <algorithm>
#include <cmath>

#include "gpc/rng.hpp"

namespace gpc::env {

CartPole::CartPole(CartPoleConstants c)
    : Environment({"cartpole", 4, models::ActionBounds::symmetric(1, c.force_limit), c.time_limit}),
      c_(c) {}

Eigen::VectorXd CartPole::reset(std::uint64_t seed) {
  Rng rng(seed);
  for (int i = 0; i < 4; ++i) x_[i] = uniform(rng, -c_.init_range, c_.init_range);
  begin_episode();
  return observation();
}

void CartPole::set_state(const Eigen::Vector4d& state) {
  x_ = state;
  begin_episode();
}

Eigen::VectorXd CartPole::observation() const { return x_; }

bool CartPole::out_of_bounds() const {
  return std::abs(x_[0]) > c_.position_limit || std::abs(x_[2]) > c_.angle_limit;
}

Environment::Outcome CartPole::advance(const Eigen::VectorXd& action) {
  const double force = action[0];
  const double total = c_.cart_mass + c_.pole_mass;
  const double pml = c_.pole_mass * c_.half_length;
  const double ct = std::cos(x_[2]), st = std::sin(x_[2]);
  const double temp = (force + pml * x_[3] * x_[3] * st) / total;
  const double theta_acc =
      (c_.gravity * st - ct * temp) / (c_.half_length * (4.0 / 3.0 - c_.pole_mass * ct * ct / total));
  const double x_acc = temp - pml * theta_acc * ct / total;
  x_[1] += c_.dt * x_acc;
  x_[0] += c_.dt * x_[1];
  x_[3] += c_.dt * theta_acc;
  x_[2] += c_.dt * x_[3];
  return {1.0, out_of_bounds()};
}

Eigen::VectorXd CartPole::reference_action(const Eigen::VectorXd& obs) const {
  const double u = c_.ref_k_position * obs[0] + c_.ref_k_velocity * obs[1] +
                   c_.ref_k_angle * obs[2] + c_.ref_k_rate * obs[3];
  return Eigen::VectorXd::Constant(1, std::clamp(u, -c_.force_limit, c_.force_limit));
}

std::vector<Shape> CartPole::render() const {
  const double sx = 0.9 / c_.position_limit;
  const double cx = x_[0] * sx, cy = -0.3;
  const double hw = 0.12, hh = 0.05;
  const double len = 2.0 * c_.half_length * 0.9;
  std::vector<Shape> out;
  out.push_back({"polyline", "track", {{-0.95, cy - hh}, {0.95, cy - hh}}, 0.0});
  out.push_back({"polygon", "cart",
                 {{cx - hw, cy - hh}, {cx + hw, cy - hh}, {cx + hw, cy + hh}, {cx - hw, cy + hh}},
                 0.0});
  out.push_back({"polyline", "pole",
                 {{cx, cy + hh}, {cx + len * std::sin(x_[2]), cy + hh + len * std::cos(x_[2])}},
                 0.0});
  return out;
}

}  // namespace gpc::env
