#pragma once

#include "gpc/env/environment.hpp"

namespace gpc::env {

// Cart with a hinged pole; action is the horizontal force in newtons.
// Observation [p, p_dot, theta, theta_dot], theta = 0 upright.
class CartPole : public Environment {
 public:
  explicit CartPole(CartPoleConstants c = {});

  Eigen::VectorXd reset(std::uint64_t seed) override;
  Eigen::VectorXd observation() const override;
  Eigen::VectorXd reference_action(const Eigen::VectorXd& obs) const override;
  std::vector<Shape> render() const override;

  void set_state(const Eigen::Vector4d& state);
  const CartPoleConstants& constants() const { return c_; }

 protected:
  Outcome advance(const Eigen::VectorXd& action) override;

 private:
  bool out_of_bounds() const;

  CartPoleConstants c_;
  Eigen::Vector4d x_ = Eigen::Vector4d::Zero();
};

}  // namespace gpc::env
