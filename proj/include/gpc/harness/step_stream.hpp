#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "gpc/agent/learner.hpp"
#include "gpc/harness/config.hpp"

namespace gpc::harness {

inline constexpr int kStepStreamVersion = 1;

struct StepRow {
  int episode = 0;
  agent::StepRecord record;
  std::string source = "none";  // oracle | human | none
  double reward = 0.0;
  bool done = false;
};

// Session StepRecord stream:
//   #gpc-steps v1
//   #{"config": <ExperimentConfig>, "seed": n, ...}
//   episode  step  state  action  sigma_p  feedback  learning_rate
//   corrected_action  delta  policy_size  human_size  source  reward  done
// Vectors are ';'-joined, absent values are NA.
class StepStreamWriter {
 public:
  StepStreamWriter(std::ostream& os, const Json& header);
  void write(const StepRow& row);

 private:
  std::ostream& os_;
};

struct StepStream {
  Json header;
  std::vector<StepRow> rows;
};

// Throws UsageError on a missing magic line or a version mismatch.
StepStream read_step_stream(std::istream& is);

}  // namespace gpc::harness
