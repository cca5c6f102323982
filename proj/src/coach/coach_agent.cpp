#include "gpc/coach/coach_agent.hpp"

#include <cmath>
#include <ostream>

#include "gpc/errors.hpp"
#include "gpc/io/format.hpp"

namespace gpc::coach {

void CoachConfig::validate() const {
  features.validate();
  bounds.validate();
  if (!(error_magnitude > 0.0) || !std::isfinite(error_magnitude))
    throw UsageError("COACH error magnitude e must be > 0");
  if (!(human_rate > 0.0 && human_rate <= 1.0)) throw UsageError("COACH beta must be in (0, 1]");
  if (!(constant_rate > 0.0)) throw UsageError("COACH c_c must be > 0");
}

CoachAgent::CoachAgent(CoachConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.validate();
  theta_ = Eigen::MatrixXd::Zero(cfg_.features.feature_count(), cfg_.bounds.dim());
  psi_ = theta_;
}

agent::ActionQuery CoachAgent::act(const Eigen::VectorXd& state) {
  const Eigen::VectorXd phi = rbf_features(cfg_.features, state);
  return {next_step_++, state, cfg_.bounds.clamp(theta_.transpose() * phi), Eigen::VectorXd()};
}

Eigen::VectorXd CoachAgent::active_learning_signal(const agent::ActionQuery&) const {
  return Eigen::VectorXd::Zero(action_dim());
}

agent::StepRecord CoachAgent::update(const agent::ActionQuery& q,
                                     const std::optional<FeedbackSignal>& h) {
  agent::StepRecord rec;
  rec.step = q.step;
  rec.state = q.state;
  rec.action = q.action;
  if (h) {
    h->validate(action_dim());
    rec.feedback = h->dims;
  }
  if (!h || h->all_zero()) return rec;

  const Eigen::VectorXd phi = rbf_features(cfg_.features, q.state);
  rec.learning_rate = Eigen::VectorXd::Zero(action_dim());
  for (Eigen::Index d = 0; d < action_dim(); ++d) {
    const double hd = h->dims[d];
    if (hd == 0.0) continue;
    const double human = psi_.col(d).dot(phi);
    psi_.col(d) += cfg_.human_rate * (hd - human) * phi;
    const double alpha = std::abs(human) + cfg_.constant_rate;
    theta_.col(d) += alpha * hd * cfg_.error_magnitude * phi;
    rec.learning_rate[d] = alpha;
  }
  rec.corrected_action = theta_.transpose() * phi;
  return rec;
}

void CoachAgent::write_snapshot(std::ostream& os) const {
  os << "#coach-snapshot v1\n";
  os << "#features " << theta_.rows() << " actions " << theta_.cols() << '\n';
  for (Eigen::Index i = 0; i < theta_.rows(); ++i) {
    os << io::format_vector(theta_.row(i).transpose()) << '\t'
       << io::format_vector(psi_.row(i).transpose()) << '\n';
  }
}

}  // namespace gpc::coach
