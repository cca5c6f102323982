#include "gpc/models/policy_model.hpp"

#include "gpc/errors.hpp"

namespace gpc::models {

SparsificationConfig SparsificationConfig::for_kernel(const gp::KernelSpec& policy_kernel) {
  return {0.5 * policy_kernel.signal_std()};
}

PolicyModel::PolicyModel(gp::KernelSpec kernel, gp::ScalingMatrix scaling, ActionBounds bounds)
    : gp_(std::move(kernel), std::move(scaling), bounds.dim()), bounds_(std::move(bounds)) {
  bounds_.validate();
}

PolicyOutput PolicyModel::act(const Eigen::VectorXd& state) const {
  auto p = gp_.predict(state);
  return {bounds_.clamp(p.mean), std::move(p.std)};
}

StoreOutcome PolicyModel::sparsify_and_store(const Eigen::VectorXd& state,
                                             const Eigen::VectorXd& new_action,
                                             const Eigen::VectorXd& sigma_p,
                                             const SparsificationConfig& cfg) {
  if (sigma_p.size() != bounds_.dim())
    throw UsageError("sigma_p dimension does not match the action dimension");
  // One decision for all outputs keeps the shared input dictionary aligned.
  if (!gp_.dictionary().empty() && sigma_p.mean() < cfg.threshold) {
    gp_.replace(gp_.max_covariance_index(state), state, new_action);
    return StoreOutcome::Replaced;
  }
  gp_.append(state, new_action);
  return StoreOutcome::Appended;
}

}  // namespace gpc::models
