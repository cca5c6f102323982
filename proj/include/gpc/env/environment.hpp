#pragma once

#include <Eigen/Core>

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "gpc/env/constants.hpp"
#include "gpc/models/action_bounds.hpp"

namespace gpc::env {

struct EnvSpec {
  std::string name;
  Eigen::Index observation_dim = 0;
  models::ActionBounds action_bounds;
  int time_limit = 0;
};

struct Transition {
  std::uint64_t step = 0;  // index of the step that produced this transition
  Eigen::VectorXd observation;
  Eigen::VectorXd action;  // as applied, after clamping
  double reward = 0.0;
  bool done = false;
  bool truncated = false;  // done because of the time limit
  bool clamped = false;    // the requested action was outside the bounds
};

// Normalized 2-D drawing primitive; the scene spans [-1, 1] x [-1, 1].
struct Shape {
  std::string kind;  // polygon | polyline | circle
  std::string role;  // e.g. pole, cart, hull, leg, pad, ground, flame
  std::vector<std::array<double, 2>> points;
  double radius = 0.0;
};

class Environment {
 public:
  virtual ~Environment() = default;

  const EnvSpec& spec() const { return spec_; }
  virtual Eigen::VectorXd reset(std::uint64_t seed) = 0;

  // Throws UsageError when the episode is already done.
  Transition step(const Eigen::VectorXd& action);

  virtual Eigen::VectorXd observation() const = 0;
  virtual Eigen::VectorXd reference_action(const Eigen::VectorXd& obs) const = 0;
  virtual std::vector<Shape> render() const = 0;

  bool done() const { return done_; }
  int steps() const { return steps_; }

 protected:
  explicit Environment(EnvSpec spec) : spec_(std::move(spec)) {}

  struct Outcome {
    double reward = 0.0;
    bool terminal = false;
  };
  virtual Outcome advance(const Eigen::VectorXd& action) = 0;
  void begin_episode() {
    done_ = false;
    steps_ = 0;
  }

 private:
  EnvSpec spec_;
  bool done_ = true;
  int steps_ = 0;
};

std::vector<std::string> environment_names();
std::unique_ptr<Environment> make_environment(const std::string& name,
                                              const EnvConstants& constants = {});

}  // namespace gpc::env
