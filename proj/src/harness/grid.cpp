#include "gpc/harness/grid.hpp"

#include <filesystem>
#include <sstream>

namespace gpc::harness {

std::string cell_id(const ExperimentConfig& cfg) {
  std::ostringstream os;
  os << cfg.environment << "_" << to_string(cfg.algorithm) << "_err"
     << static_cast<int>(cfg.error_rate * 100.0 + 0.5);
  if (cfg.ablation != AblationCase::None) os << "_case-" << to_string(cfg.ablation);
  return os.str();
}

std::vector<ExperimentConfig> default_suite(const std::vector<std::string>& overrides) {
  std::vector<ExperimentConfig> out;
  for (const char* env : {"pendulum", "cartpole", "lander"})
    for (const char* alg : {"GPC-CS", "GPC-NS", "COACH"})
      for (const char* err : {"0", "0.1", "0.2"}) {
        std::vector<std::string> o = {std::string("environment=") + env,
                                      std::string("algorithm=") + alg,
                                      std::string("error_rate=") + err};
        o.insert(o.end(), overrides.begin(), overrides.end());
        auto cfg = load_config("", o);
        if (cfg.run_id.empty()) cfg.run_id = cell_id(cfg);
        out.push_back(std::move(cfg));
      }
  return out;
}

ExperimentConfig ablation_base(const std::vector<std::string>& overrides) {
  std::vector<std::string> o = {"environment=cartpole", "algorithm=GPC-NS", "error_rate=0.1",
                                "gpc.constant_rate=0.01", "oracle.gamma_c=0.01",
                                "static_learning_rate=0.4"};
  o.insert(o.end(), overrides.begin(), overrides.end());
  return load_config("", o);
}

namespace {

RunOptions cell_options(RunOptions opts, const std::string& id) {
  if (!opts.step_dir.empty()) opts.step_dir = (std::filesystem::path(opts.step_dir) / id).string();
  if (!opts.snapshot_dir.empty()) opts.snapshot_dir = (std::filesystem::path(opts.snapshot_dir) / id).string();
  return opts;
}

}  // namespace

AblationResult run_ablation(const ExperimentConfig& base, const RunOptions& opts,
                            const std::function<void(const GridCell&)>& done) {
  AblationResult out;
  for (int k = 0; k < 4; ++k) {
    auto& cfg = out.config[k];
    cfg = base;
    cfg.ablation = static_cast<AblationCase>(static_cast<int>(AblationCase::I) + k);
    cfg.run_id = cell_id(cfg);
    if (k >= 2) cfg.matched_rates = matched_rates_from(out.result[k - 2].log, base.episodes, base.oracle.gamma_c);
    const RunOptions o = cell_options(opts, cfg.run_id);
    out.result[k] = run_experiment(cfg, o);
    if (done) done(GridCell{cfg.run_id, cfg, out.result[k]});
  }
  return out;
}

void run_grid(const std::vector<std::string>& overrides, const RunOptions& opts,
              const std::function<void(const GridCell&)>& done) {
  for (auto& cfg : default_suite(overrides)) {
    const RunOptions o = cell_options(opts, cfg.run_id);
    done(GridCell{cfg.run_id, cfg, run_experiment(cfg, o)});
  }
  run_ablation(ablation_base(overrides), opts, done);
}

}  // namespace gpc::harness
