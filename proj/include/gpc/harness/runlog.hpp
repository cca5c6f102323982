#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gpc/harness/config.hpp"

namespace gpc::harness {

inline constexpr int kRunLogVersion = 1;

struct EpisodeRow {
  std::string run_id;
  std::string algorithm;
  std::string environment;
  double error_rate = 0.0;
  std::string ablation_case = "none";
  std::uint64_t seed = 0;
  int episode = 0;
  double episode_return = 0.0;
  int steps = 0;
  int feedback_count = 0;
  int eligible_steps = 0;                   // steps outside the oracle deadband
  std::optional<double> emission_rate;      // mean emission probability, eligible steps
  std::optional<double> learning_rate_mean; // over feedback instances
  std::size_t policy_size = 0;
  std::size_t human_size = 0;
  std::optional<double> wall_time;          // seconds; only with timing enabled
};

struct RunLog {
  Json config;
  std::vector<EpisodeRow> rows;
};

void write_runlog(std::ostream& os, const RunLog& log);
RunLog read_runlog(std::istream& is);

}  // namespace gpc::harness
