#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "gpc/harness/runlog.hpp"

namespace gpc::harness {

// Trailing window; the first window-1 entries average what is available.
std::vector<double> walking_mean(const std::vector<double>& xs, int window);

struct Stat {
  double mean = 0.0;
  double std = 0.0;  // sample std across seeds; 0 for a single seed
  int count = 0;
};

struct SummaryRow {
  std::string algorithm;
  std::string environment;
  double error_rate = 0.0;
  std::string ablation_case;
  int episode = 0;
  Stat episode_return;
  Stat learning_rate;  // seeds without feedback in this episode are skipped
  Stat feedback_rate;  // feedback_count / steps
  double return_walk = 0.0;
  double learning_rate_walk = 0.0;
  double feedback_rate_walk = 0.0;
};

// Groups by (algorithm, environment, error rate, ablation case), then by
// episode. Throws UsageError on an empty log.
std::vector<SummaryRow> summarize(const std::vector<EpisodeRow>& rows, int window = 3);

void write_summary(std::ostream& os, const std::vector<SummaryRow>& rows);

}  // namespace gpc::harness
