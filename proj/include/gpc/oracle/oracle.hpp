#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <optional>

#include "gpc/feedback.hpp"
#include "gpc/rng.hpp"

namespace gpc::oracle {

struct OracleConfig {
  double feedback_rate = 0.05;  // gamma, per step
  double error_rate = 0.0;      // probability of flipping an emitted sign
  double deadband = 0.0;        // delta, action units
  bool al_mode = false;         // rate from the learner's signal instead of gamma
  double gamma_c = 0.01;        // floor added to the signal in AL mode
  std::uint64_t seed = 0;

  // Throws UsageError listing every violated constraint.
  void validate() const;
};

struct OracleDecision {
  std::optional<FeedbackSignal> feedback;
  bool eligible = false;     // some dimension outside the deadband
  double probability = 0.0;  // emission probability used (eligible steps only)
  int flips = 0;
};

// Simulated teacher comparing executed actions against a reference.
// One uniform draw per step decides emission, so the random stream does not
// depend on how often the deadband is hit.
class Oracle {
 public:
  explicit Oracle(OracleConfig cfg);

  // `signal` is evaluated only on eligible steps in AL mode. With D > 1 the
  // emission probability is clamp(mean(signal) + gamma_c, 0, 1).
  OracleDecision decide(const Eigen::VectorXd& action, const Eigen::VectorXd& reference,
                        const std::function<Eigen::VectorXd()>& signal = {},
                        std::uint64_t step = 0);

  // Replaces the static rate (matched-rate ablation cases); disables AL.
  void set_rate(double gamma);

  const OracleConfig& config() const { return cfg_; }

 private:
  OracleConfig cfg_;
  Rng rng_;
};

}  // namespace gpc::oracle
