#pragma once

#include <Eigen/Core>

#include <optional>

#include "gpc/agent/learner.hpp"
#include "gpc/gp/kernel.hpp"
#include "gpc/models/human_model.hpp"
#include "gpc/models/policy_model.hpp"

namespace gpc::agent {

struct GpcConfig {
  gp::KernelSpec policy_kernel;
  gp::KernelSpec human_kernel;
  gp::ScalingMode scaling_mode = gp::ScalingMode::CustomStatic;
  // Custom-static weights w; ignored in normalized mode.
  Eigen::VectorXd policy_weights;
  Eigen::VectorXd human_weights;
  double scaling_floor = 1e-6;
  double constant_rate = 0.01;  // c_r
  double al_gain = 0.0;         // c_a
  // When set, replaces the adaptive rate with this fixed rate (ablation).
  std::optional<double> static_rate;
  models::ActionBounds bounds;
  std::optional<std::size_t> human_capacity;

  // Throws UsageError listing every violated constraint.
  void validate() const;
};

// Gaussian-process corrective-feedback learner: policy P over states,
// human model H over state-action pairs, adaptive learning rate and
// replacement sparsification of P's dictionary.
class GpcAgent : public Learner {
 public:
  explicit GpcAgent(GpcConfig cfg);

  std::string algorithm() const override;
  Eigen::Index state_dim() const override { return policy_.gp().input_dim(); }
  Eigen::Index action_dim() const override { return policy_.bounds().dim(); }

  ActionQuery act(const Eigen::VectorXd& state) override;
  Eigen::VectorXd active_learning_signal(const ActionQuery& q) const override;
  StepRecord update(const ActionQuery& q, const std::optional<FeedbackSignal>& h) override;

  // r_d = sigma_p,d + sigma_h,d + c_r, or the static rate when configured.
  Eigen::VectorXd learning_rate(const Eigen::VectorXd& sigma_p,
                                const Eigen::VectorXd& sigma_h) const;

  std::size_t policy_size() const override { return policy_.size(); }
  std::size_t human_size() const override { return human_.size(); }
  void write_snapshot(std::ostream& os) const override;

  const models::PolicyModel& policy() const { return policy_; }
  const models::HumanModel& human() const { return human_; }
  const GpcConfig& config() const { return cfg_; }
  const models::SparsificationConfig& sparsification() const { return sparsify_; }

  // Restores both models (replay, session resume).
  void restore(models::PolicyModel policy, models::HumanModel human);

 private:
  GpcConfig cfg_;
  models::PolicyModel policy_;
  models::HumanModel human_;
  models::SparsificationConfig sparsify_;
  std::uint64_t next_step_ = 0;
};

}  // namespace gpc::agent
