#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "gpc/agent/learner.hpp"
#include "gpc/harness/config.hpp"
#include "gpc/harness/runlog.hpp"

namespace gpc::harness {

struct SessionResult {
  std::uint64_t seed = 0;
  std::vector<EpisodeRow> rows;
  // Mean r_k across action dimensions, one entry per feedback instance.
  std::vector<double> feedback_learning_rates;
  std::string snapshot;
};

// One seed: environment, learner and oracle built from cfg, run for the
// episode budget. Fully determined by (cfg, seed).
SessionResult run_session(const ExperimentConfig& cfg, std::uint64_t seed,
                          std::ostream* steps = nullptr, bool timing = false);

struct RunOptions {
  int jobs = 1;
  bool timing = false;
  std::string step_dir;      // per-seed step streams when non-empty
  std::string snapshot_dir;  // per-seed final snapshots when non-empty
};

struct ExperimentResult {
  RunLog log;
  std::vector<SessionResult> sessions;  // in cfg.seeds order
};

// Seeds run in parallel; results are merged in seed-list order, so output is
// independent of the job count.
ExperimentResult run_experiment(const ExperimentConfig& cfg, const RunOptions& opts = {});

// Per-episode mean emission probability across seeds (gamma_ep.avg); an
// episode where no seed had an eligible step gets gamma_c.
std::vector<double> matched_rates_from(const RunLog& log, int episodes, double fallback);

struct ReplayResult {
  std::unique_ptr<agent::Learner> learner;
  std::size_t steps = 0;
  std::size_t feedbacks = 0;
  // Rows whose recomputed action differs from the logged one.
  std::size_t action_mismatches = 0;
};

// Re-executes a logged StepRecord stream: logged states and feedback, fresh
// learner built from the stream's config header.
ReplayResult replay_session(std::istream& steps);

}  // namespace gpc::harness
