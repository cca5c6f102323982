#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <optional>

namespace gpc {

// Corrective advice: one entry per action dimension, each in {-1, 0, +1}.
struct FeedbackSignal {
  Eigen::VectorXd dims;
  std::uint64_t step = 0;

  bool all_zero() const { return (dims.array() == 0.0).all(); }

  // Throws UsageError on wrong length or values outside {-1, 0, +1}.
  void validate(Eigen::Index action_dim) const;
};

// Collapses an all-zero signal to "no feedback".
std::optional<FeedbackSignal> normalize_feedback(std::optional<FeedbackSignal> h);

}  // namespace gpc
