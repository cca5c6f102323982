#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <json.hpp>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gpc/agent/learner.hpp"
#include "gpc/env/environment.hpp"

namespace gpc::harness {

using Json = nlohmann::json;

enum class Algorithm { GpcCs, GpcNs, Coach };
enum class AblationCase { None, I, II, III, IV };

std::string to_string(Algorithm a);
std::string to_string(AblationCase c);
Algorithm algorithm_from_string(const std::string& s);
AblationCase ablation_from_string(const std::string& s);

// Feedback-rate source and learning-rate form per ablation case.
bool uses_active_learning(AblationCase c);
bool uses_static_rate(AblationCase c);
bool uses_matched_rate(AblationCase c);

struct GpSettings {
  std::string kind = "se";
  double signal_std = 1.0;  // c_h / c_p
  double length_scale = 1.0;
  double smoothness = 1.5;
  double noise_std = 0.01;
};

struct GpcSettings {
  GpSettings policy;
  GpSettings human;
  Eigen::VectorXd policy_weights;  // custom-static scaling; state dims
  Eigen::VectorXd human_weights;   // state dims followed by action dims
  double constant_rate = 0.01;     // c_r
  double al_gain = 0.0;            // c_a
  std::optional<std::size_t> human_capacity;
  double scaling_floor = 1e-6;
};

struct CoachSettings {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
  std::vector<int> counts;
  double error_magnitude = 0.1;  // e
  double human_rate = 0.5;       // beta
  double constant_rate = 0.05;   // c_c
};

struct OracleSettings {
  double feedback_rate = 0.05;  // gamma
  double deadband = 0.0;        // delta, agent action units
  double gamma_c = 0.01;
};

struct ExperimentConfig {
  std::string run_id;
  Algorithm algorithm = Algorithm::GpcCs;
  std::string environment = "pendulum";
  double error_rate = 0.0;
  AblationCase ablation = AblationCase::None;
  int episodes = 40;
  std::vector<std::uint64_t> seeds;
  GpcSettings gpc;
  CoachSettings coach;
  OracleSettings oracle;
  double static_learning_rate = 0.4;  // r_c
  std::vector<double> matched_rates;  // per-episode gamma for cases iii/iv
  // Agent actions are multiplied by this before reaching the environment.
  double action_scale = 1.0;
  std::optional<int> max_episode_steps;
  std::string constants_file;  // empty: built-in environment constants
};

// Table 2 hyperparameters plus the fixture values chosen for this
// implementation (weights, noise, deadband, COACH grids).
ExperimentConfig default_config(const std::string& environment, Algorithm algorithm);

Json to_json(const ExperimentConfig& cfg);
// Starts from default_config(environment, algorithm) named in `j` and
// overlays every key present. Throws UsageError naming every bad field.
ExperimentConfig config_from_json(const Json& j);

// "a.b.c=value"; value parsed as JSON when possible, else taken as a string.
void apply_override(Json& j, const std::string& assignment);

// File (optional, may be empty) + overrides -> validated config.
ExperimentConfig load_config(const std::string& path, const std::vector<std::string>& overrides);

// Throws UsageError enumerating every violated constraint.
void validate(const ExperimentConfig& cfg);

env::EnvConstants constants_for(const ExperimentConfig& cfg);
std::unique_ptr<agent::Learner> make_learner(const ExperimentConfig& cfg,
                                             const env::EnvSpec& spec);

}  // namespace gpc::harness
