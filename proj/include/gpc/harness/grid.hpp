#pragma once

#include <functional>
#include <string>
#include <vector>

#include "gpc/harness/experiment.hpp"

namespace gpc::harness {

// Algorithm x environment x error rate, every cell with its default config.
std::vector<ExperimentConfig> default_suite(const std::vector<std::string>& overrides = {});

// Cart-Pole base for the active-learning / ablation cases: gamma_c = 0.01,
// c_r = 0.01, r_c = 0.4, 10% erroneous feedback.
ExperimentConfig ablation_base(const std::vector<std::string>& overrides = {});

struct GridCell {
  std::string run_id;
  ExperimentConfig config;
  ExperimentResult result;
};

struct AblationResult {
  ExperimentConfig config[4];  // cases i..iv as run
  ExperimentResult result[4];
};

// Two passes: i and ii first, then iii and iv at the per-episode emission
// rates measured in i and ii respectively. Step and snapshot directories get
// one subdirectory per case.
AblationResult run_ablation(const ExperimentConfig& base, const RunOptions& opts = {},
                            const std::function<void(const GridCell&)>& done = {});

// Runs the suite plus the four ablation cases. Each finished cell is handed
// to `done` (for writing) before the next starts.
void run_grid(const std::vector<std::string>& overrides, const RunOptions& opts,
              const std::function<void(const GridCell&)>& done);

std::string cell_id(const ExperimentConfig& cfg);

}  // namespace gpc::harness
