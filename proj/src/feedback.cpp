#include "gpc/feedback.hpp"

#include <string>

#include "gpc/errors.hpp"

namespace gpc {

void FeedbackSignal::validate(Eigen::Index action_dim) const {
  if (dims.size() != action_dim)
    throw UsageError("feedback has " + std::to_string(dims.size()) + " dims, expected " +
                     std::to_string(action_dim));
  for (Eigen::Index d = 0; d < dims.size(); ++d) {
    const double v = dims[d];
    if (v != -1.0 && v != 0.0 && v != 1.0)
      throw UsageError("feedback value " + std::to_string(v) + " outside {-1, 0, +1}");
  }
}

std::optional<FeedbackSignal> normalize_feedback(std::optional<FeedbackSignal> h) {
  if (h && h->all_zero()) return std::nullopt;
  return h;
}

}  // namespace gpc
