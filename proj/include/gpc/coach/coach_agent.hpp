#pragma once

#include <Eigen/Core>

#include "gpc/agent/learner.hpp"
#include "gpc/coach/rbf_features.hpp"
#include "gpc/models/action_bounds.hpp"

namespace gpc::coach {

struct CoachConfig {
  RbfFeatureSpace features;
  double error_magnitude = 0.1;  // e
  double human_rate = 0.5;       // beta
  double constant_rate = 0.05;   // c_c
  models::ActionBounds bounds;

  void validate() const;
};

// COACH with linear policy theta^T phi and linear human model psi^T phi,
// one column per action dimension. No credit assigner.
class CoachAgent : public agent::Learner {
 public:
  explicit CoachAgent(CoachConfig cfg);

  std::string algorithm() const override { return "COACH"; }
  Eigen::Index state_dim() const override { return cfg_.features.input_dim(); }
  Eigen::Index action_dim() const override { return cfg_.bounds.dim(); }

  agent::ActionQuery act(const Eigen::VectorXd& state) override;
  Eigen::VectorXd active_learning_signal(const agent::ActionQuery& q) const override;
  agent::StepRecord update(const agent::ActionQuery& q,
                           const std::optional<FeedbackSignal>& h) override;

  std::size_t policy_size() const override { return 0; }
  std::size_t human_size() const override { return 0; }
  void write_snapshot(std::ostream& os) const override;

  const Eigen::MatrixXd& theta() const { return theta_; }
  const Eigen::MatrixXd& psi() const { return psi_; }
  const CoachConfig& config() const { return cfg_; }

 private:
  CoachConfig cfg_;
  Eigen::MatrixXd theta_;  // features x action_dim
  Eigen::MatrixXd psi_;
  std::uint64_t next_step_ = 0;
};

}  // namespace gpc::coach
