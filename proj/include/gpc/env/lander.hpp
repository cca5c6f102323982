#pragma once

#include "gpc/env/environment.hpp"

namespace gpc::env {

// Observation [x, y, vx, vy, angle, angular_rate, left_contact,
// right_contact]. Actions [main, side] in [-1, 1]: main fires at 50-100%
// throttle when positive, side fires when |side| > 0.5 (sign picks the
// direction).
class Lander : public Environment {
 public:
  explicit Lander(LanderConstants c = {});

  Eigen::VectorXd reset(std::uint64_t seed) override;
  Eigen::VectorXd observation() const override;
  Eigen::VectorXd reference_action(const Eigen::VectorXd& obs) const override;
  std::vector<Shape> render() const override;

  struct Body {
    double x = 0, y = 0, vx = 0, vy = 0, angle = 0, omega = 0;
  };
  void set_body(const Body& b);
  const Body& body() const { return b_; }
  bool crashed() const { return crashed_; }
  bool landed() const { return landed_; }
  const LanderConstants& constants() const { return c_; }

 protected:
  Outcome advance(const Eigen::VectorXd& action) override;

 private:
  double shaping() const;
  void update_contacts();

  LanderConstants c_;
  Body b_;
  bool contact_[2] = {false, false};
  double prev_shaping_ = 0.0;
  int rest_count_ = 0;
  bool crashed_ = false;
  bool landed_ = false;
  double last_main_ = 0.0;
  double last_side_ = 0.0;
};

}  // namespace gpc::env
