#pragma once

#include <Eigen/Core>

#include <optional>

#include "gpc/feedback.hpp"
#include "gpc/gp/gp_model.hpp"

namespace gpc::models {

struct HumanEstimate {
  Eigen::VectorXd mean;  // in [-1, 1]
  Eigen::VectorXd std;
};

// H: (state, action) -> expected feedback. Zero feedback entries are not
// stored for their output dimension.
class HumanModel {
 public:
  HumanModel() = default;
  HumanModel(gp::KernelSpec kernel, gp::ScalingMatrix scaling, Eigen::Index action_dim,
             std::optional<std::size_t> capacity = std::nullopt);

  static Eigen::VectorXd concat(const Eigen::VectorXd& state, const Eigen::VectorXd& action);

  HumanEstimate estimate(const Eigen::VectorXd& z) const;

  // Appends (z, h) with zero dimensions masked out; evicts the oldest pair
  // first when a FIFO capacity is configured and reached. All-zero h is a
  // no-op.
  void store(const Eigen::VectorXd& z, const FeedbackSignal& h);

  const gp::GpModel& gp() const { return gp_; }
  gp::GpModel& gp() { return gp_; }
  std::optional<std::size_t> capacity() const { return capacity_; }
  std::size_t size() const { return gp_.size(); }

 private:
  gp::GpModel gp_;
  std::optional<std::size_t> capacity_;
};

}  // namespace gpc::models
