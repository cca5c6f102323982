#pragma once

#include <Eigen/Core>

#include "gpc/gp/gp_model.hpp"
#include "gpc/models/action_bounds.hpp"

namespace gpc::models {

// Replace-vs-append threshold for the policy dictionary, in target-std units.
struct SparsificationConfig {
  double threshold = 0.0;

  // Half the policy kernel's signal standard deviation.
  static SparsificationConfig for_kernel(const gp::KernelSpec& policy_kernel);
};

struct PolicyOutput {
  Eigen::VectorXd action;  // clamped
  Eigen::VectorXd std;     // posterior std, per action dimension
};

enum class StoreOutcome { Appended, Replaced };

// P: state -> action. Inputs are states only; stored targets are the
// unclamped corrected actions, clamping happens at execution.
class PolicyModel {
 public:
  PolicyModel() = default;
  PolicyModel(gp::KernelSpec kernel, gp::ScalingMatrix scaling, ActionBounds bounds);

  PolicyOutput act(const Eigen::VectorXd& state) const;

  // sigma_p must be the std reported by act() at `state` in the same step.
  // Mean of sigma_p below the threshold: overwrite the most covariant entry.
  // Otherwise append.
  StoreOutcome sparsify_and_store(const Eigen::VectorXd& state, const Eigen::VectorXd& new_action,
                                  const Eigen::VectorXd& sigma_p, const SparsificationConfig& cfg);

  const gp::GpModel& gp() const { return gp_; }
  gp::GpModel& gp() { return gp_; }
  const ActionBounds& bounds() const { return bounds_; }
  std::size_t size() const { return gp_.size(); }

 private:
  gp::GpModel gp_;
  ActionBounds bounds_;
};

}  // namespace gpc::models
