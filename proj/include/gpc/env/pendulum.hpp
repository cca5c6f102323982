#pragma once

#include "gpc/env/environment.hpp"

namespace gpc::env {

// Torque-limited pendulum; theta = 0 is upright. Observation
// [cos theta, sin theta, theta_dot].
class Pendulum : public Environment {
 public:
  explicit Pendulum(PendulumConstants c = {});

  Eigen::VectorXd reset(std::uint64_t seed) override;
  Eigen::VectorXd observation() const override;
  Eigen::VectorXd reference_action(const Eigen::VectorXd& obs) const override;
  std::vector<Shape> render() const override;

  // Direct state access for tests and fixtures.
  void set_state(double theta, double theta_dot);
  double theta() const { return theta_; }
  double theta_dot() const { return theta_dot_; }
  // Mechanical energy per unit inertia, zero potential at the pivot height.
  double energy() const;

  const PendulumConstants& constants() const { return c_; }

 protected:
  Outcome advance(const Eigen::VectorXd& action) override;

 private:
  PendulumConstants c_;
  double theta_ = 0.0;
  double theta_dot_ = 0.0;
  double last_torque_ = 0.0;
};

}  // namespace gpc::env
