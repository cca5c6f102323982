#include "gpc/models/action_bounds.hpp"

#include "gpc/errors.hpp"

namespace gpc::models {

ActionBounds ActionBounds::symmetric(Eigen::Index dim, double limit) {
  return {Eigen::VectorXd::Constant(dim, -limit), Eigen::VectorXd::Constant(dim, limit)};
}

Eigen::VectorXd ActionBounds::clamp(const Eigen::VectorXd& a) const {
  return a.cwiseMax(lower).cwiseMin(upper);
}

bool ActionBounds::contains(const Eigen::VectorXd& a) const {
  return a.size() == dim() && (a.array() >= lower.array()).all() &&
         (a.array() <= upper.array()).all();
}

void ActionBounds::validate() const {
  if (lower.size() == 0 || lower.size() != upper.size())
    throw UsageError("action bounds need matching non-empty lower/upper vectors");
  if (!(lower.array() <= upper.array()).all()) throw UsageError("action bounds lower > upper");
  if (!lower.allFinite() || !upper.allFinite()) throw UsageError("action bounds must be finite");
}

}  // namespace gpc::models
