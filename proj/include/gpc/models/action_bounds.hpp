#pragma once

#include <Eigen/Core>

namespace gpc::models {

struct ActionBounds {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;

  static ActionBounds symmetric(Eigen::Index dim, double limit);

  Eigen::Index dim() const { return lower.size(); }
  Eigen::VectorXd clamp(const Eigen::VectorXd& a) const;
  bool contains(const Eigen::VectorXd& a) const;
  void validate() const;
};

}  // namespace gpc::models
