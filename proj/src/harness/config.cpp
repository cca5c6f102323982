#include "gpc/harness/config.hpp"

#include <fstream>
#include <sstream>

#include "gpc/agent/gpc_agent.hpp"
#include "gpc/coach/coach_agent.hpp"
#include "gpc/errors.hpp"
#include "gpc/io/json.hpp"

namespace gpc::harness {

namespace {

Eigen::VectorXd v(std::initializer_list<double> xs) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) out[i++] = x;
  return out;
}

GpSettings se(double c, double l, double noise) { return {"se", c, l, 1.5, noise}; }
GpSettings matern(double c, double l, double nu, double noise) { return {"matern", c, l, nu, noise}; }

Json to_json(const GpSettings& g) {
  Json j = {{"kind", g.kind}, {"signal_std", g.signal_std}, {"length_scale", g.length_scale},
            {"noise_std", g.noise_std}};
  if (g.kind != "se") j["smoothness"] = g.smoothness;
  return j;
}

// Collects field errors instead of stopping at the first one.
class Reader {
 public:
  std::ostringstream errors;

  template <class T>
  void get(const Json& j, const char* key, T& out, const std::string& path) {
    if (!j.contains(key)) return;
    try {
      j.at(key).get_to(out);
    } catch (const Json::exception&) {
      errors << path << key << ": wrong type (" << j.at(key).dump() << "); ";
    }
  }

  void get(const Json& j, const char* key, Eigen::VectorXd& out, const std::string& path) {
    if (!j.contains(key)) return;
    try {
      out = io::vector_from_json(j.at(key));
    } catch (const std::exception&) {
      errors << path << key << ": expected a numeric array; ";
    }
  }

  void get(const Json& j, const char* key, GpSettings& g, const std::string& path) {
    if (!j.contains(key)) return;
    const Json& s = j.at(key);
    const std::string p = path + key + ".";
    get(s, "kind", g.kind, p);
    get(s, "signal_std", g.signal_std, p);
    get(s, "length_scale", g.length_scale, p);
    get(s, "smoothness", g.smoothness, p);
    get(s, "noise_std", g.noise_std, p);
  }
};

gp::KernelSpec kernel_of(const GpSettings& g, Eigen::Index dim) {
  if (gp::kernel_kind_from_string(g.kind) == gp::KernelKind::Matern)
    return gp::KernelSpec::matern(g.signal_std, g.length_scale, g.smoothness, dim, g.noise_std);
  return gp::KernelSpec::squared_exponential(g.signal_std, g.length_scale, dim, g.noise_std);
}

}  // namespace

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::GpcCs: return "GPC-CS";
    case Algorithm::GpcNs: return "GPC-NS";
    case Algorithm::Coach: return "COACH";
  }
  return "?";
}

std::string to_string(AblationCase c) {
  switch (c) {
    case AblationCase::None: return "none";
    case AblationCase::I: return "i";
    case AblationCase::II: return "ii";
    case AblationCase::III: return "iii";
    case AblationCase::IV: return "iv";
  }
  return "?";
}

Algorithm algorithm_from_string(const std::string& s) {
  if (s == "GPC-CS" || s == "gpc-cs" || s == "GPC" || s == "gpc") return Algorithm::GpcCs;
  if (s == "GPC-NS" || s == "gpc-ns") return Algorithm::GpcNs;
  if (s == "COACH" || s == "coach") return Algorithm::Coach;
  throw UsageError("unknown algorithm '" + s + "' (GPC-CS, GPC-NS, COACH)");
}

AblationCase ablation_from_string(const std::string& s) {
  if (s == "none" || s.empty()) return AblationCase::None;
  if (s == "i") return AblationCase::I;
  if (s == "ii") return AblationCase::II;
  if (s == "iii") return AblationCase::III;
  if (s == "iv") return AblationCase::IV;
  throw UsageError("unknown ablation case '" + s + "' (none, i, ii, iii, iv)");
}

bool uses_active_learning(AblationCase c) { return c == AblationCase::I || c == AblationCase::II; }
bool uses_static_rate(AblationCase c) { return c == AblationCase::II || c == AblationCase::IV; }
bool uses_matched_rate(AblationCase c) { return c == AblationCase::III || c == AblationCase::IV; }

ExperimentConfig default_config(const std::string& environment, Algorithm algorithm) {
  ExperimentConfig c;
  c.algorithm = algorithm;
  c.environment = environment;
  for (std::uint64_t s = 0; s < 20; ++s) c.seeds.push_back(s);
  const bool ns = algorithm == Algorithm::GpcNs;

  if (environment == "pendulum") {
    if (ns) {
      c.gpc.policy = matern(0.03, 0.5, 1.5, 3e-4);
      c.gpc.human = se(0.45, 0.1, 0.045);
      c.gpc.constant_rate = 0.02;
    } else {
      c.gpc.policy = matern(0.01, 0.7, 0.5, 1e-4);
      c.gpc.human = se(0.7, 0.1, 0.07);
      c.gpc.constant_rate = 0.01;
    }
    c.gpc.policy_weights = v({1, 1, 2});
    c.gpc.human_weights = v({1, 1, 8, 2});
    c.gpc.al_gain = 0.1;
    c.coach = {v({-1, -1, -8}), v({1, 1, 8}), {7, 7, 15}, 20.0, 0.3, 0.3};
    c.oracle.deadband = 0.1;
  } else if (environment == "cartpole") {
    if (ns) {
      c.gpc.policy = matern(1e-3, 0.7, 1.5, 1e-5);
      c.gpc.human = se(0.08, 0.5, 0.008);
      c.gpc.constant_rate = 0.05;
    } else {
      c.gpc.policy = matern(0.01, 0.2, 1.5, 1e-4);
      c.gpc.human = se(0.01, 0.2, 0.001);
      c.gpc.constant_rate = 0.02;
    }
    c.gpc.policy_weights = v({2.4, 2, 0.26, 2});
    c.gpc.human_weights = v({2.4, 2, 0.26, 2, 1});
    c.gpc.al_gain = 3.0;
    c.coach = {v({-2.4, -2, -0.26, -2}), v({2.4, 2, 0.26, 2}), {3, 3, 5, 5}, 0.1, 0.3, 0.1};
    c.oracle.deadband = 0.05;
    c.action_scale = 10.0;
  } else if (environment == "lander") {
    if (ns) {
      c.gpc.policy = matern(1e-3, 0.6, 1.5, 1e-5);
      c.gpc.human = se(0.08, 0.2, 0.008);
      c.gpc.constant_rate = 0.05;
    } else {
      c.gpc.policy = matern(0.01, 0.4, 1.5, 1e-4);
      c.gpc.human = se(0.01, 0.2, 0.001);
      c.gpc.constant_rate = 0.02;
    }
    c.gpc.policy_weights = v({1, 1.4, 1, 1, 0.5, 1, 1, 1});
    c.gpc.human_weights = v({1, 1.4, 1, 1, 0.5, 1, 1, 1, 1, 1});
    c.gpc.al_gain = 1.0;
    c.coach = {v({-1, 0, -1, -1, -0.5, -1, 0, 0}), v({1, 1.4, 1, 1, 0.5, 1, 1, 1}),
               std::vector<int>(8, 3), 0.2, 0.3, 0.1};
    c.oracle.deadband = 0.2;
  } else {
    throw UsageError("unknown environment '" + environment + "' (pendulum, cartpole, lander)");
  }
  return c;
}

Json to_json(const ExperimentConfig& c) {
  Json gpc = {{"policy", to_json(c.gpc.policy)},
              {"human", to_json(c.gpc.human)},
              {"policy_weights", io::to_json(c.gpc.policy_weights)},
              {"human_weights", io::to_json(c.gpc.human_weights)},
              {"constant_rate", c.gpc.constant_rate},
              {"al_gain", c.gpc.al_gain},
              {"scaling_floor", c.gpc.scaling_floor}};
  gpc["human_capacity"] = c.gpc.human_capacity ? Json(*c.gpc.human_capacity) : Json(nullptr);
  Json j = {
      {"run_id", c.run_id},
      {"algorithm", to_string(c.algorithm)},
      {"environment", c.environment},
      {"error_rate", c.error_rate},
      {"ablation_case", to_string(c.ablation)},
      {"episodes", c.episodes},
      {"seeds", c.seeds},
      {"gpc", gpc},
      {"coach",
       {{"lower", io::to_json(c.coach.lower)},
        {"upper", io::to_json(c.coach.upper)},
        {"counts", c.coach.counts},
        {"error_magnitude", c.coach.error_magnitude},
        {"human_rate", c.coach.human_rate},
        {"constant_rate", c.coach.constant_rate}}},
      {"oracle",
       {{"feedback_rate", c.oracle.feedback_rate},
        {"deadband", c.oracle.deadband},
        {"gamma_c", c.oracle.gamma_c}}},
      {"static_learning_rate", c.static_learning_rate},
      {"matched_rates", c.matched_rates},
      {"action_scale", c.action_scale},
      {"constants_file", c.constants_file}};
  j["max_episode_steps"] = c.max_episode_steps ? Json(*c.max_episode_steps) : Json(nullptr);
  return j;
}

namespace {

// Unknown keys are almost always typos; report them rather than ignore them.
void unknown_keys(const Json& given, const Json& schema, const std::string& path, std::ostringstream& err) {
  for (const auto& [key, value] : given.items()) {
    if (!schema.contains(key)) {
      err << path << key << ": unknown key; ";
      continue;
    }
    const Json& s = schema.at(key);
    if (s.is_object() && value.is_object()) unknown_keys(value, s, path + key + ".", err);
  }
}

const Json& config_schema() {
  static const Json schema = [] {
    Json s = to_json(default_config("pendulum", Algorithm::GpcCs));
    s["gpc"]["policy"]["smoothness"] = 0.0;
    s["gpc"]["human"]["smoothness"] = 0.0;
    return s;
  }();
  return schema;
}

}  // namespace

ExperimentConfig config_from_json(const Json& j) {
  if (!j.is_object()) throw UsageError("experiment config must be a JSON object");
  std::string env = "pendulum", alg = "GPC-CS", ablation = "none";
  Reader r;
  unknown_keys(j, config_schema(), "", r.errors);
  r.get(j, "environment", env, "");
  r.get(j, "algorithm", alg, "");
  r.get(j, "ablation_case", ablation, "");
  ExperimentConfig c;
  try {
    c = default_config(env, algorithm_from_string(alg));
    c.ablation = ablation_from_string(ablation);
  } catch (const UsageError& e) {
    throw UsageError(std::string("invalid experiment config: ") + e.what());
  }

  r.get(j, "run_id", c.run_id, "");
  r.get(j, "error_rate", c.error_rate, "");
  r.get(j, "episodes", c.episodes, "");
  r.get(j, "seeds", c.seeds, "");
  r.get(j, "static_learning_rate", c.static_learning_rate, "");
  r.get(j, "matched_rates", c.matched_rates, "");
  r.get(j, "action_scale", c.action_scale, "");
  r.get(j, "constants_file", c.constants_file, "");
  if (j.contains("max_episode_steps")) {
    if (j["max_episode_steps"].is_null()) c.max_episode_steps.reset();
    else {
      int m = 0;
      r.get(j, "max_episode_steps", m, "");
      c.max_episode_steps = m;
    }
  }
  if (j.contains("gpc")) {
    const Json& g = j["gpc"];
    r.get(g, "policy", c.gpc.policy, "gpc.");
    r.get(g, "human", c.gpc.human, "gpc.");
    r.get(g, "policy_weights", c.gpc.policy_weights, "gpc.");
    r.get(g, "human_weights", c.gpc.human_weights, "gpc.");
    r.get(g, "constant_rate", c.gpc.constant_rate, "gpc.");
    r.get(g, "al_gain", c.gpc.al_gain, "gpc.");
    r.get(g, "scaling_floor", c.gpc.scaling_floor, "gpc.");
    if (g.contains("human_capacity")) {
      if (g["human_capacity"].is_null()) c.gpc.human_capacity.reset();
      else {
        std::size_t cap = 0;
        r.get(g, "human_capacity", cap, "gpc.");
        c.gpc.human_capacity = cap;
      }
    }
  }
  if (j.contains("coach")) {
    const Json& k = j["coach"];
    r.get(k, "lower", c.coach.lower, "coach.");
    r.get(k, "upper", c.coach.upper, "coach.");
    r.get(k, "counts", c.coach.counts, "coach.");
    r.get(k, "error_magnitude", c.coach.error_magnitude, "coach.");
    r.get(k, "human_rate", c.coach.human_rate, "coach.");
    r.get(k, "constant_rate", c.coach.constant_rate, "coach.");
  }
  if (j.contains("oracle")) {
    const Json& o = j["oracle"];
    r.get(o, "feedback_rate", c.oracle.feedback_rate, "oracle.");
    r.get(o, "deadband", c.oracle.deadband, "oracle.");
    r.get(o, "gamma_c", c.oracle.gamma_c, "oracle.");
  }
  if (!r.errors.str().empty()) throw UsageError("invalid experiment config: " + r.errors.str());
  return c;
}

void apply_override(Json& j, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    throw UsageError("override must look like key.path=value: '" + assignment + "'");
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  Json value;
  try {
    value = Json::parse(text);
  } catch (const Json::exception&) {
    value = text;
  }
  Json* node = &j;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot - start);
    if (part.empty()) throw UsageError("empty key segment in override '" + assignment + "'");
    if (!node->is_object()) *node = Json::object();
    if (dot == std::string::npos) {
      (*node)[part] = value;
      return;
    }
    node = &(*node)[part];
    start = dot + 1;
  }
}

ExperimentConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
  Json j = Json::object();
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open config file: " + path);
    try {
      j = Json::parse(in);
    } catch (const Json::exception& e) {
      throw UsageError("config file " + path + " is not valid JSON: " + e.what());
    }
  }
  for (const auto& o : overrides) apply_override(j, o);
  auto cfg = config_from_json(j);
  validate(cfg);
  return cfg;
}

void validate(const ExperimentConfig& c) {
  std::ostringstream err;
  env::EnvSpec spec;
  try {
    spec = env::make_environment(c.environment, constants_for(c))->spec();
  } catch (const std::exception& e) {
    err << e.what() << "; ";
  }
  if (!(c.error_rate >= 0.0 && c.error_rate <= 1.0)) err << "error_rate must be in [0, 1]; ";
  if (c.episodes < 0) err << "episodes must be >= 0; ";
  if (c.seeds.empty()) err << "seeds must not be empty; ";
  if (!(c.oracle.feedback_rate >= 0.0 && c.oracle.feedback_rate <= 1.0))
    err << "oracle.feedback_rate must be in [0, 1]; ";
  if (!(c.oracle.deadband >= 0.0)) err << "oracle.deadband must be >= 0; ";
  if (!(c.oracle.gamma_c >= 0.0)) err << "oracle.gamma_c must be >= 0; ";
  if (!(c.action_scale > 0.0)) err << "action_scale must be > 0; ";
  if (c.max_episode_steps && *c.max_episode_steps <= 0) err << "max_episode_steps must be > 0; ";
  if (c.ablation != AblationCase::None) {
    if (c.algorithm == Algorithm::Coach) err << "ablation cases apply to GPC only; ";
    if (uses_static_rate(c.ablation) && !(c.static_learning_rate > 0.0))
      err << "static_learning_rate must be > 0; ";
    if (uses_matched_rate(c.ablation)) {
      if (static_cast<int>(c.matched_rates.size()) < c.episodes)
        err << "cases iii/iv need one matched rate per episode (" << c.episodes << "), got "
            << c.matched_rates.size() << "; ";
      for (double r : c.matched_rates)
        if (!(r >= 0.0 && r <= 1.0)) {
          err << "matched_rates must lie in [0, 1]; ";
          break;
        }
    }
  }
  if (spec.observation_dim > 0) {
    try {
      make_learner(c, spec);
    } catch (const UsageError& e) {
      err << e.what() << "; ";
    }
  }
  if (!err.str().empty()) throw UsageError("invalid experiment config: " + err.str());
}

env::EnvConstants constants_for(const ExperimentConfig& cfg) {
  return cfg.constants_file.empty() ? env::EnvConstants{} : env::load_constants(cfg.constants_file);
}

std::unique_ptr<agent::Learner> make_learner(const ExperimentConfig& c, const env::EnvSpec& spec) {
  // The agent works in scaled units: env bounds / action_scale.
  models::ActionBounds bounds{spec.action_bounds.lower / c.action_scale,
                              spec.action_bounds.upper / c.action_scale};
  if (c.algorithm == Algorithm::Coach) {
    coach::CoachConfig k;
    k.features = {c.coach.lower, c.coach.upper, c.coach.counts};
    k.error_magnitude = c.coach.error_magnitude;
    k.human_rate = c.coach.human_rate;
    k.constant_rate = c.coach.constant_rate;
    k.bounds = bounds;
    return std::make_unique<coach::CoachAgent>(k);
  }
  const Eigen::Index ds = spec.observation_dim, da = bounds.dim();
  agent::GpcConfig g;
  g.policy_kernel = kernel_of(c.gpc.policy, ds);
  g.human_kernel = kernel_of(c.gpc.human, ds + da);
  g.scaling_mode = c.algorithm == Algorithm::GpcNs ? gp::ScalingMode::NormalizedOnline
                                                   : gp::ScalingMode::CustomStatic;
  g.policy_weights = c.gpc.policy_weights;
  g.human_weights = c.gpc.human_weights;
  g.scaling_floor = c.gpc.scaling_floor;
  g.constant_rate = c.gpc.constant_rate;
  g.al_gain = c.gpc.al_gain;
  if (uses_static_rate(c.ablation)) g.static_rate = c.static_learning_rate;
  g.bounds = bounds;
  g.human_capacity = c.gpc.human_capacity;
  return std::make_unique<agent::GpcAgent>(g);
}

}  // namespace gpc::harness
