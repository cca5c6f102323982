#include "gpc/env/environment.hpp"

#include "gpc/env/cartpole.hpp"
#include "gpc/env/lander.hpp"
#include "gpc/env/pendulum.hpp"
#include "gpc/errors.hpp"

namespace gpc::env {

Transition Environment::step(const Eigen::VectorXd& action) {
  if (done_) throw UsageError("step() on a finished episode; call reset() first");
  if (action.size() != spec_.action_bounds.dim())
    throw UsageError("action has the wrong dimension for " + spec_.name);
  if (!action.allFinite()) throw UsageError("non-finite action");
  Transition t;
  t.step = static_cast<std::uint64_t>(steps_);
  t.action = spec_.action_bounds.clamp(action);
  t.clamped = t.action != action;
  const Outcome out = advance(t.action);
  ++steps_;
  t.reward = out.reward;
  t.truncated = !out.terminal && steps_ >= spec_.time_limit;
  t.done = out.terminal || t.truncated;
  done_ = t.done;
  t.observation = observation();
  return t;
}

std::vector<std::string> environment_names() { return {"pendulum", "cartpole", "lander"}; }

std::unique_ptr<Environment> make_environment(const std::string& name,
                                              const EnvConstants& constants) {
  if (name == "pendulum") return std::make_unique<Pendulum>(constants.pendulum);
  if (name == "cartpole" || name == "cart-pole") return std::make_unique<CartPole>(constants.cartpole);
  if (name == "lander") return std::make_unique<Lander>(constants.lander);
  throw UsageError("unknown environment '" + name + "' (pendulum, cartpole, lander)");
}

}  // namespace gpc::env
