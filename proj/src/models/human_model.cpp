#include "gpc/models/human_model.hpp"

#include "gpc/errors.hpp"

namespace gpc::models {

HumanModel::HumanModel(gp::KernelSpec kernel, gp::ScalingMatrix scaling, Eigen::Index action_dim,
                       std::optional<std::size_t> capacity)
    : gp_(std::move(kernel), std::move(scaling), action_dim), capacity_(capacity) {
  if (capacity_ && *capacity_ == 0) throw UsageError("human model capacity must be positive");
}

Eigen::VectorXd HumanModel::concat(const Eigen::VectorXd& state, const Eigen::VectorXd& action) {
  Eigen::VectorXd z(state.size() + action.size());
  z << state, action;
  return z;
}

HumanEstimate HumanModel::estimate(const Eigen::VectorXd& z) const {
  auto p = gp_.predict(z);
  // Feedback lives in [-1, 1]; GP interpolation may overshoot slightly.
  return {p.mean.cwiseMax(-1.0).cwiseMin(1.0), std::move(p.std)};
}

void HumanModel::store(const Eigen::VectorXd& z, const FeedbackSignal& h) {
  h.validate(gp_.output_dim());
  gp::TargetMask mask = 0;
  for (Eigen::Index d = 0; d < h.dims.size(); ++d)
    if (h.dims[d] != 0.0) mask |= gp::TargetMask{1} << d;
  if (mask == 0) return;
  if (capacity_ && gp_.size() >= *capacity_) gp_.erase_front();
  gp_.append(z, h.dims, mask);
}

}  // namespace gpc::models
