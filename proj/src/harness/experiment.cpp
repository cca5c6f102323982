#include "gpc/harness/experiment.hpp"

#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <thread>

#include "gpc/errors.hpp"
#include "gpc/harness/step_stream.hpp"
#include "gpc/oracle/oracle.hpp"
#include "gpc/rng.hpp"

namespace gpc::harness {

namespace {

constexpr std::uint64_t kOracleStream = 0x0AC1E;

Json session_header(const ExperimentConfig& cfg, std::uint64_t seed) {
  return {{"config", to_json(cfg)}, {"seed", seed}};
}

}  // namespace

SessionResult run_session(const ExperimentConfig& cfg, std::uint64_t seed, std::ostream* steps,
                          bool timing) {
  auto env = env::make_environment(cfg.environment, constants_for(cfg));
  auto learner = make_learner(cfg, env->spec());

  oracle::OracleConfig oc;
  oc.feedback_rate = cfg.oracle.feedback_rate;
  oc.error_rate = cfg.error_rate;
  oc.deadband = cfg.oracle.deadband;
  oc.al_mode = uses_active_learning(cfg.ablation);
  oc.gamma_c = cfg.oracle.gamma_c;
  oc.seed = derive_seed(seed, kOracleStream);
  oracle::Oracle teacher(oc);

  std::unique_ptr<StepStreamWriter> writer;
  if (steps) writer = std::make_unique<StepStreamWriter>(*steps, session_header(cfg, seed));

  SessionResult out;
  out.seed = seed;
  for (int ep = 0; ep < cfg.episodes; ++ep) {
    const auto t0 = std::chrono::steady_clock::now();
    if (uses_matched_rate(cfg.ablation)) teacher.set_rate(cfg.matched_rates[static_cast<std::size_t>(ep)]);
    Eigen::VectorXd obs = env->reset(derive_seed(seed, static_cast<std::uint64_t>(ep)));

    EpisodeRow row;
    row.run_id = cfg.run_id;
    row.algorithm = to_string(cfg.algorithm);
    row.environment = cfg.environment;
    row.error_rate = cfg.error_rate;
    row.ablation_case = to_string(cfg.ablation);
    row.seed = seed;
    row.episode = ep;
    double prob_sum = 0.0, lr_sum = 0.0;

    while (!env->done() && (!cfg.max_episode_steps || row.steps < *cfg.max_episode_steps)) {
      agent::ActionQuery q = learner->act(obs);
      const Eigen::VectorXd reference = env->reference_action(obs) / cfg.action_scale;
      Eigen::VectorXd delta;
      const auto decision = teacher.decide(
          q.action, reference,
          [&] {
            delta = learner->active_learning_signal(q);
            return delta;
          },
          q.step);
      agent::StepRecord rec = learner->update(q, decision.feedback);
      rec.delta = delta;
      const env::Transition t = env->step(q.action * cfg.action_scale);

      row.episode_return += t.reward;
      ++row.steps;
      if (decision.eligible) {
        ++row.eligible_steps;
        prob_sum += decision.probability;
      }
      if (rec.learning_rate.size() > 0) {
        ++row.feedback_count;
        const double r = rec.learning_rate.mean();
        lr_sum += r;
        out.feedback_learning_rates.push_back(r);
      }
      if (writer) writer->write({ep, rec, decision.feedback ? "oracle" : "none", t.reward, t.done});
      obs = t.observation;
    }
    if (row.eligible_steps > 0) row.emission_rate = prob_sum / row.eligible_steps;
    if (row.feedback_count > 0) row.learning_rate_mean = lr_sum / row.feedback_count;
    row.policy_size = learner->policy_size();
    row.human_size = learner->human_size();
    if (timing)
      row.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.rows.push_back(row);
  }
  out.snapshot = learner->snapshot();
  return out;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, const RunOptions& opts) {
  validate(cfg);
  if (!opts.step_dir.empty()) std::filesystem::create_directories(opts.step_dir);
  if (!opts.snapshot_dir.empty()) std::filesystem::create_directories(opts.snapshot_dir);

  ExperimentResult result;
  result.log.config = to_json(cfg);
  result.sessions.resize(cfg.seeds.size());
  std::vector<std::exception_ptr> errors(cfg.seeds.size());
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t i = next++; i < cfg.seeds.size(); i = next++) {
      const std::uint64_t seed = cfg.seeds[i];
      try {
        std::ofstream steps;
        if (!opts.step_dir.empty()) {
          const auto path = std::filesystem::path(opts.step_dir) / ("seed-" + std::to_string(seed) + ".steps.tsv");
          steps.open(path);
          if (!steps) throw UsageError("cannot write " + path.string());
        }
        result.sessions[i] = run_session(cfg, seed, steps.is_open() ? &steps : nullptr, opts.timing);
        if (!opts.snapshot_dir.empty()) {
          std::ofstream snap(std::filesystem::path(opts.snapshot_dir) /
                             ("seed-" + std::to_string(seed) + ".snapshot"));
          snap << result.sessions[i].snapshot;
        }
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int jobs = std::max(1, std::min<int>(opts.jobs, static_cast<int>(cfg.seeds.size())));
  std::vector<std::thread> pool;
  for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  for (const auto& s : result.sessions)
    result.log.rows.insert(result.log.rows.end(), s.rows.begin(), s.rows.end());
  return result;
}

std::vector<double> matched_rates_from(const RunLog& log, int episodes, double fallback) {
  std::map<int, std::pair<double, int>> acc;
  for (const auto& r : log.rows) {
    if (!r.emission_rate) continue;
    auto& [sum, n] = acc[r.episode];
    sum += *r.emission_rate;
    ++n;
  }
  std::vector<double> out(static_cast<std::size_t>(episodes), fallback);
  for (const auto& [ep, sn] : acc)
    if (ep < episodes) out[static_cast<std::size_t>(ep)] = sn.first / sn.second;
  return out;
}

ReplayResult replay_session(std::istream& in) {
  StepStream stream = read_step_stream(in);
  if (!stream.header.contains("config"))
    throw UsageError("step stream header has no 'config' entry");
  const ExperimentConfig cfg = config_from_json(stream.header.at("config"));
  auto env = env::make_environment(cfg.environment, constants_for(cfg));

  ReplayResult out;
  out.learner = make_learner(cfg, env->spec());
  for (const auto& row : stream.rows) {
    agent::ActionQuery q = out.learner->act(row.record.state);
    if (q.action != row.record.action) ++out.action_mismatches;
    std::optional<FeedbackSignal> h;
    if (row.record.feedback) h = FeedbackSignal{*row.record.feedback, row.record.step};
    const auto rec = out.learner->update(q, h);
    if (rec.learning_rate.size() > 0) ++out.feedbacks;
    ++out.steps;
  }
  return out;
}

}  // namespace gpc::harness
