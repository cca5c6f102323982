#include "gpc/oracle/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gpc/errors.hpp"

namespace gpc::oracle {

void OracleConfig::validate() const {
  std::ostringstream err;
  auto prob = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (!prob(feedback_rate)) err << "feedback_rate must be in [0, 1]; ";
  if (!prob(error_rate)) err << "error_rate must be in [0, 1]; ";
  if (!(deadband >= 0.0)) err << "deadband must be >= 0; ";
  if (!(gamma_c >= 0.0)) err << "gamma_c must be >= 0; ";
  if (!err.str().empty()) throw UsageError("invalid oracle config: " + err.str());
}

Oracle::Oracle(OracleConfig cfg) : cfg_(cfg), rng_(cfg.seed) { cfg_.validate(); }

void Oracle::set_rate(double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw UsageError("oracle rate must be in [0, 1]");
  cfg_.feedback_rate = gamma;
  cfg_.al_mode = false;
}

OracleDecision Oracle::decide(const Eigen::VectorXd& action, const Eigen::VectorXd& reference,
                              const std::function<Eigen::VectorXd()>& signal,
                              std::uint64_t step) {
  if (action.size() != reference.size())
    throw UsageError("oracle: action and reference dimensions differ");
  const double u = uniform01(rng_);

  Eigen::VectorXd h = Eigen::VectorXd::Zero(action.size());
  for (Eigen::Index d = 0; d < action.size(); ++d) {
    const double gap = reference[d] - action[d];
    if (std::abs(gap) > cfg_.deadband) h[d] = gap > 0.0 ? 1.0 : -1.0;
  }
  OracleDecision out;
  out.eligible = !h.isZero();
  if (!out.eligible) return out;

  if (cfg_.al_mode) {
    if (!signal) throw UsageError("oracle in AL mode needs the learner's signal");
    const Eigen::VectorXd delta = signal();
    out.probability = std::clamp(delta.mean() + cfg_.gamma_c, 0.0, 1.0);
  } else {
    out.probability = cfg_.feedback_rate;
  }
  if (!(u < out.probability)) return out;

  for (Eigen::Index d = 0; d < h.size(); ++d) {
    if (h[d] == 0.0) continue;
    if (uniform01(rng_) < cfg_.error_rate) {
      h[d] = -h[d];
      ++out.flips;
    }
  }
  out.feedback = FeedbackSignal{std::move(h), step};
  return out;
}

}  // namespace gpc::oracle
