#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "gpc/feedback.hpp"

namespace gpc::agent {

// What the learner did at one step, captured at action time. Passing it back
// to update() guarantees the uncertainty used is the one from this step.
struct ActionQuery {
  std::uint64_t step = 0;
  Eigen::VectorXd state;
  Eigen::VectorXd action;   // executed (clamped)
  Eigen::VectorXd sigma_p;  // policy std per dimension; empty for COACH
};

struct StepRecord {
  std::uint64_t step = 0;
  Eigen::VectorXd state;
  Eigen::VectorXd action;
  Eigen::VectorXd sigma_p;
  std::optional<Eigen::VectorXd> feedback;
  Eigen::VectorXd learning_rate;     // empty unless feedback was applied
  Eigen::VectorXd corrected_action;  // empty unless feedback was applied
  Eigen::VectorXd delta;             // active-learning signal, empty if not computed
  std::size_t policy_size = 0;
  std::size_t human_size = 0;
};

// Common surface of the GPC agent and the COACH baseline.
class Learner {
 public:
  virtual ~Learner() = default;

  virtual std::string algorithm() const = 0;
  virtual Eigen::Index state_dim() const = 0;
  virtual Eigen::Index action_dim() const = 0;

  virtual ActionQuery act(const Eigen::VectorXd& state) = 0;

  // Per-dimension feedback-request signal (>= 0); never mutates.
  virtual Eigen::VectorXd active_learning_signal(const ActionQuery& q) const = 0;

  // Applies feedback (if any, non-zero) for the step described by q.
  virtual StepRecord update(const ActionQuery& q, const std::optional<FeedbackSignal>& h) = 0;

  StepRecord step(const Eigen::VectorXd& state, const std::optional<FeedbackSignal>& h) {
    return update(act(state), h);
  }

  virtual std::size_t policy_size() const = 0;
  virtual std::size_t human_size() const = 0;

  // Full model state as text; equal strings mean bit-identical models.
  virtual void write_snapshot(std::ostream& os) const = 0;
  std::string snapshot() const;
};

}  // namespace gpc::agent
