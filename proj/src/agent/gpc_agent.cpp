#include "gpc/agent/gpc_agent.hpp"

#include <ostream>
#include <sstream>

#include "gpc/errors.hpp"
#include "gpc/models/snapshot.hpp"

namespace gpc::agent {

namespace {

gp::ScalingMatrix make_scaling(gp::ScalingMode mode, const Eigen::VectorXd& weights,
                               Eigen::Index dim, double floor) {
  if (mode == gp::ScalingMode::NormalizedOnline) return gp::ScalingMatrix::normalized(dim, floor);
  return gp::ScalingMatrix::custom(weights.size() == 0 ? Eigen::VectorXd::Ones(dim) : weights,
                                   floor);
}

}  // namespace

void GpcConfig::validate() const {
  std::ostringstream err;
  auto check = [&](auto&& fn, const char* what) {
    try {
      fn();
    } catch (const std::exception& e) {
      err << what << ": " << e.what() << "; ";
    }
  };
  check([&] { policy_kernel.validate(); }, "policy_kernel");
  check([&] { human_kernel.validate(); }, "human_kernel");
  check([&] { bounds.validate(); }, "bounds");
  if (!(constant_rate > 0.0)) err << "constant_rate (c_r) must be > 0; ";
  if (!(al_gain >= 0.0)) err << "al_gain (c_a) must be >= 0; ";
  if (static_rate && !(*static_rate > 0.0)) err << "static_rate must be > 0; ";
  if (human_kernel.dim() != policy_kernel.dim() + bounds.dim())
    err << "human kernel dimension must equal state dim + action dim; ";
  if (scaling_mode == gp::ScalingMode::CustomStatic) {
    if (policy_weights.size() != 0 && policy_weights.size() != policy_kernel.dim())
      err << "policy_weights length must equal the state dimension; ";
    if (human_weights.size() != 0 && human_weights.size() != human_kernel.dim())
      err << "human_weights length must equal state + action dimension; ";
  }
  if (human_capacity && *human_capacity == 0) err << "human_capacity must be positive; ";
  if (!err.str().empty()) throw UsageError("invalid GPC config: " + err.str());
}

GpcAgent::GpcAgent(GpcConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.validate();
  policy_ = models::PolicyModel(
      cfg_.policy_kernel,
      make_scaling(cfg_.scaling_mode, cfg_.policy_weights, cfg_.policy_kernel.dim(), cfg_.scaling_floor),
      cfg_.bounds);
  human_ = models::HumanModel(
      cfg_.human_kernel,
      make_scaling(cfg_.scaling_mode, cfg_.human_weights, cfg_.human_kernel.dim(), cfg_.scaling_floor),
      cfg_.bounds.dim(), cfg_.human_capacity);
  sparsify_ = models::SparsificationConfig::for_kernel(cfg_.policy_kernel);
}

std::string GpcAgent::algorithm() const {
  return cfg_.scaling_mode == gp::ScalingMode::CustomStatic ? "GPC-CS" : "GPC-NS";
}

ActionQuery GpcAgent::act(const Eigen::VectorXd& state) {
  auto out = policy_.act(state);
  return {next_step_++, state, std::move(out.action), std::move(out.std)};
}

Eigen::VectorXd GpcAgent::active_learning_signal(const ActionQuery& q) const {
  if (cfg_.al_gain == 0.0) return Eigen::VectorXd::Zero(action_dim());
  return cfg_.al_gain * human_.estimate(models::HumanModel::concat(q.state, q.action)).std;
}

Eigen::VectorXd GpcAgent::learning_rate(const Eigen::VectorXd& sigma_p,
                                        const Eigen::VectorXd& sigma_h) const {
  if (cfg_.static_rate) return Eigen::VectorXd::Constant(sigma_p.size(), *cfg_.static_rate);
  return (sigma_p + sigma_h).array() + cfg_.constant_rate;
}

StepRecord GpcAgent::update(const ActionQuery& q, const std::optional<FeedbackSignal>& h) {
  StepRecord rec;
  rec.step = q.step;
  rec.state = q.state;
  rec.action = q.action;
  rec.sigma_p = q.sigma_p;
  if (h) {
    h->validate(action_dim());
    rec.feedback = h->dims;
  }
  if (!h || h->all_zero()) {
    rec.policy_size = policy_.size();
    rec.human_size = human_.size();
    return rec;
  }
  if (q.sigma_p.size() != action_dim() || q.state.size() != state_dim())
    throw UsageError("action query does not belong to this agent");

  const Eigen::VectorXd z = models::HumanModel::concat(q.state, q.action);
  const auto estimate = human_.estimate(z);
  const Eigen::VectorXd rate = learning_rate(q.sigma_p, estimate.std);

  Eigen::VectorXd corrected = q.action;
  for (Eigen::Index d = 0; d < action_dim(); ++d)
    if (h->dims[d] != 0.0) corrected[d] += rate[d] * h->dims[d];

  policy_.sparsify_and_store(q.state, corrected, q.sigma_p, sparsify_);
  human_.store(z, *h);
  if (cfg_.scaling_mode == gp::ScalingMode::NormalizedOnline) {
    policy_.gp().update_normalized_scaling();
    human_.gp().update_normalized_scaling();
  }

  rec.learning_rate = rate;
  rec.corrected_action = corrected;
  rec.policy_size = policy_.size();
  rec.human_size = human_.size();
  return rec;
}

void GpcAgent::write_snapshot(std::ostream& os) const {
  models::write_snapshot(os, models::snapshot_of(policy_));
  models::write_snapshot(os, models::snapshot_of(human_));
}

void GpcAgent::restore(models::PolicyModel policy, models::HumanModel human) {
  policy_ = std::move(policy);
  human_ = std::move(human);
}

}  // namespace gpc::agent
