#pragma once

#include <Eigen/Core>

#include <string>
#include <vector>

namespace gpc::coach {

// Evenly spaced Gaussian centers per input dimension; the feature set is the
// product grid. Width along a dimension equals its grid spacing.
struct RbfFeatureSpace {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
  std::vector<int> counts;

  Eigen::Index input_dim() const { return lower.size(); }
  Eigen::Index feature_count() const;
  Eigen::VectorXd widths() const;
  Eigen::VectorXd centers(Eigen::Index dim) const;

  void validate() const;

  // Grids large enough to be impractical to tune (the 8-D lander case).
  std::vector<std::string> warnings() const;
};

// Normalized activations (sum to 1). Computed in log space so states far
// outside the grid still get a well-defined, nearest-dominated vector.
Eigen::VectorXd rbf_features(const RbfFeatureSpace& space, const Eigen::VectorXd& s);

}  // namespace gpc::coach
