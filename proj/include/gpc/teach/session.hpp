#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <deque>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include "gpc/agent/learner.hpp"
#include "gpc/env/environment.hpp"
#include "gpc/harness/config.hpp"
#include "gpc/harness/step_stream.hpp"

namespace gpc::teach {

using Json = nlohmann::json;

inline constexpr int kProtocolVersion = 1;

struct SessionSettings {
  harness::ExperimentConfig experiment;
  std::uint64_t seed = 0;
  std::string session_id = "session";
  double step_rate = 20.0;      // steps per second, [1, 60]
  int feedback_window = 1;      // steps; 1 = only feedback sent since the last update
  int snapshot_every = 0;       // steps between periodic snapshots; 0 = final only
  std::string snapshot_dir;     // empty: no artifacts on disk
  std::size_t queue_capacity = 64;
  bool start_paused = false;
};

// Handshake session_config -> settings. Keys step_rate, feedback_window,
// session_id, seed, snapshot_every and start_paused are session fields;
// everything else is merged over `base` as an experiment config overlay.
// Throws UsageError.
SessionSettings settings_from_json(const Json& session_config, const Json& base,
                                   const std::string& snapshot_dir);

// Why a queued feedback never reached the agent.
enum class DropReason { Superseded, Stale, EpisodeDone, Reset, Overflow, Ended };
std::string to_string(DropReason r);

struct SessionStats {
  std::uint64_t steps = 0;
  std::uint64_t feedback_received = 0;
  std::uint64_t feedback_applied = 0;
  std::map<DropReason, std::uint64_t> dropped;
  std::uint64_t deadline_misses = 0;
  std::uint64_t snapshots = 0;

  std::uint64_t dropped_total() const;
  Json to_json() const;
};

// One teaching session, transport-agnostic and single-threaded. handle()
// answers every client message; tick() runs one environment step. The
// network layer owns the clock and decides when to call tick().
class TeachSession {
 public:
  explicit TeachSession(SessionSettings settings);
  ~TeachSession();

  const SessionSettings& settings() const { return settings_; }
  const env::EnvSpec& spec() const { return env_->spec(); }
  const SessionStats& stats() const { return stats_; }
  const agent::Learner& learner() const { return *learner_; }
  bool paused() const { return paused_; }
  bool ended() const { return ended_; }
  double step_rate() const { return rate_; }

  // Reply for the handshake: protocol version, session id, action layout.
  Json welcome() const;

  // Parses and applies one client message (feedback or control). Returns the
  // Ack or Error to send back. Besides pause/resume/reset/set_rate/end_session
  // there is "step": one tick while paused, for lockstep clients.
  Json handle(const Json& msg);

  // True when the transport should call tick() now (running, or a single
  // step was requested while paused).
  bool wants_tick() const;

  // Runs one step and returns its StateUpdate. After a done step the next
  // tick only resets the environment (phase "reset"); feedback arriving in
  // between is dropped as episode_done.
  Json tick();

  // Final snapshot and session_end message; idempotent.
  Json end();

  void record_deadline_miss() { ++stats_.deadline_misses; }

 private:
  struct Pending {
    Eigen::VectorXd dims;
    std::uint64_t received_after;  // number of steps run when it arrived
  };

  void start_episode();
  void drop_queue(DropReason why);
  std::optional<Eigen::VectorXd> take_feedback();
  void write_snapshot(const std::string& tag);
  Json state_update(const env::Transition& t, const agent::StepRecord& rec, bool applied) const;

  SessionSettings settings_;
  std::unique_ptr<env::Environment> env_;
  std::unique_ptr<agent::Learner> learner_;
  std::unique_ptr<std::ofstream> step_file_;
  std::unique_ptr<harness::StepStreamWriter> writer_;
  std::deque<Pending> queue_;
  SessionStats stats_;
  Eigen::VectorXd obs_;
  int episode_ = -1;
  int episode_steps_ = 0;
  bool episode_over_ = true;
  bool paused_ = false;
  bool single_step_ = false;
  bool ended_ = false;
  double rate_ = 20.0;
  Json end_message_;
};

Json error_message(const std::string& code, const std::string& detail);

Json shapes_to_json(const std::vector<env::Shape>& shapes);

}  // namespace gpc::teach
