#include "gpc/teach/session.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

#include "gpc/errors.hpp"
#include "gpc/io/json.hpp"
#include "gpc/rng.hpp"

namespace gpc::teach {

namespace fs = std::filesystem;

namespace {

const char* const kSessionKeys[] = {"step_rate", "feedback_window", "session_id", "seed",
                                    "snapshot_every", "start_paused"};

bool valid_rate(double r) { return std::isfinite(r) && r >= 1.0 && r <= 60.0; }

Json ack(const char* what, const Json& msg) {
  Json a = {{"type", "ack"}, {"ack", what}};
  if (msg.is_object() && msg.contains("id")) a["id"] = msg["id"];
  return a;
}

Json error_for(const std::string& code, const std::string& detail, const Json& msg) {
  Json e = error_message(code, detail);
  if (msg.is_object() && msg.contains("id")) e["id"] = msg["id"];
  return e;
}

// Each entry must be an integer in {-1, 0, 1}.
std::optional<Eigen::VectorXd> parse_dims(const Json& dims, Eigen::Index n) {
  if (!dims.is_array() || static_cast<Eigen::Index>(dims.size()) != n) return std::nullopt;
  Eigen::VectorXd h(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Json& v = dims[static_cast<std::size_t>(i)];
    if (!v.is_number()) return std::nullopt;
    const double x = v.get<double>();
    if (x != -1.0 && x != 0.0 && x != 1.0) return std::nullopt;
    h[i] = x;
  }
  return h;
}

}  // namespace

Json error_message(const std::string& code, const std::string& detail) {
  return {{"type", "error"}, {"code", code}, {"detail", detail}};
}

Json shapes_to_json(const std::vector<env::Shape>& shapes) {
  Json out = Json::array();
  for (const auto& s : shapes) {
    Json j = {{"kind", s.kind}, {"role", s.role}, {"points", s.points}};
    if (s.kind == "circle") j["radius"] = s.radius;
    out.push_back(std::move(j));
  }
  return out;
}

std::string to_string(DropReason r) {
  switch (r) {
    case DropReason::Superseded: return "superseded";
    case DropReason::Stale: return "stale";
    case DropReason::EpisodeDone: return "episode_done";
    case DropReason::Reset: return "reset";
    case DropReason::Overflow: return "overflow";
    case DropReason::Ended: return "ended";
  }
  return "unknown";
}

std::uint64_t SessionStats::dropped_total() const {
  std::uint64_t n = 0;
  for (const auto& [r, c] : dropped) n += c;
  return n;
}

Json SessionStats::to_json() const {
  Json d = Json::object();
  for (const auto& [r, c] : dropped) d[to_string(r)] = c;
  return {{"steps", steps},
          {"feedback_received", feedback_received},
          {"feedback_applied", feedback_applied},
          {"dropped", d},
          {"dropped_total", dropped_total()},
          {"deadline_misses", deadline_misses},
          {"snapshots", snapshots}};
}

SessionSettings settings_from_json(const Json& session_config, const Json& base,
                                   const std::string& snapshot_dir) {
  if (!session_config.is_object()) throw UsageError("session_config must be an object");
  SessionSettings s;
  s.snapshot_dir = snapshot_dir;
  Json overlay = session_config;
  std::string errors;
  try {
    if (overlay.contains("step_rate")) s.step_rate = overlay["step_rate"].get<double>();
    if (overlay.contains("feedback_window")) s.feedback_window = overlay["feedback_window"].get<int>();
    if (overlay.contains("session_id")) s.session_id = overlay["session_id"].get<std::string>();
    if (overlay.contains("seed")) s.seed = overlay["seed"].get<std::uint64_t>();
    if (overlay.contains("snapshot_every")) s.snapshot_every = overlay["snapshot_every"].get<int>();
    if (overlay.contains("start_paused")) s.start_paused = overlay["start_paused"].get<bool>();
  } catch (const Json::exception& e) {
    throw UsageError(std::string("session_config: ") + e.what());
  }
  for (const char* k : kSessionKeys) overlay.erase(k);

  if (!valid_rate(s.step_rate)) errors += "step_rate must be in [1, 60]; ";
  if (s.feedback_window < 1) errors += "feedback_window must be >= 1; ";
  if (s.snapshot_every < 0) errors += "snapshot_every must be >= 0; ";
  if (s.session_id.empty() || s.session_id.find_first_of("/\\") != std::string::npos)
    errors += "session_id must be a non-empty file name; ";
  if (!errors.empty()) throw UsageError("session_config: " + errors);

  Json merged = base.is_object() ? base : Json::object();
  merged.merge_patch(overlay);
  s.experiment = harness::config_from_json(merged);
  // Sessions run until ended; the episode budget and seed list are unused.
  s.experiment.seeds = {s.seed};
  harness::validate(s.experiment);
  return s;
}

TeachSession::TeachSession(SessionSettings settings)
    : settings_(std::move(settings)), paused_(settings_.start_paused), rate_(settings_.step_rate) {
  if (!valid_rate(rate_)) throw UsageError("step_rate must be in [1, 60]");
  env_ = env::make_environment(settings_.experiment.environment, harness::constants_for(settings_.experiment));
  learner_ = harness::make_learner(settings_.experiment, env_->spec());
  if (!settings_.snapshot_dir.empty()) {
    fs::create_directories(settings_.snapshot_dir);
    const auto path = fs::path(settings_.snapshot_dir) / (settings_.session_id + ".steps.tsv");
    step_file_ = std::make_unique<std::ofstream>(path);
    if (!*step_file_) throw UsageError("cannot write " + path.string());
    writer_ = std::make_unique<harness::StepStreamWriter>(
        *step_file_, Json{{"config", harness::to_json(settings_.experiment)},
                          {"seed", settings_.seed},
                          {"session", settings_.session_id},
                          {"protocol_version", kProtocolVersion}});
  }
}

TeachSession::~TeachSession() = default;

Json TeachSession::welcome() const {
  const auto& b = spec().action_bounds;
  return {{"type", "ack"},
          {"ack", "handshake"},
          {"protocol_version", kProtocolVersion},
          {"session", settings_.session_id},
          {"environment", spec().name},
          {"algorithm", harness::to_string(settings_.experiment.algorithm)},
          {"observation_dim", spec().observation_dim},
          {"action_lower", io::to_json(b.lower)},
          {"action_upper", io::to_json(b.upper)},
          {"step_rate", rate_},
          {"feedback_window", settings_.feedback_window},
          {"paused", paused_}};
}

bool TeachSession::wants_tick() const { return !ended_ && (!paused_ || single_step_); }

void TeachSession::drop_queue(DropReason why) {
  stats_.dropped[why] += queue_.size();
  queue_.clear();
}

Json TeachSession::handle(const Json& msg) {
  if (!msg.is_object() || !msg.contains("type") || !msg["type"].is_string())
    return error_for("bad_message", "expected an object with a string 'type'", msg);
  const std::string type = msg["type"].get<std::string>();
  if (ended_) return error_for("ended", "session has ended", msg);

  if (type == "feedback") {
    const auto h = parse_dims(msg.value("dims", Json()), spec().action_bounds.dim());
    if (!h)
      return error_for("bad_feedback",
                       "'dims' must hold " + std::to_string(spec().action_bounds.dim()) +
                           " entries from {-1, 0, 1}",
                       msg);
    ++stats_.feedback_received;
    Json a = ack("feedback", msg);
    if (episode_over_) {
      ++stats_.dropped[DropReason::EpisodeDone];
      a["dropped"] = to_string(DropReason::EpisodeDone);
      return a;
    }
    if (queue_.size() >= settings_.queue_capacity) {
      queue_.pop_front();
      ++stats_.dropped[DropReason::Overflow];
    }
    queue_.push_back({*h, stats_.steps});
    a["queued"] = queue_.size();
    return a;
  }

  if (type == "control") {
    const std::string cmd = msg.value("command", std::string());
    if (cmd == "pause") {
      paused_ = true;
    } else if (cmd == "resume") {
      paused_ = false;
      single_step_ = false;
    } else if (cmd == "step") {
      if (!paused_) return error_for("not_paused", "'step' is only valid while paused", msg);
      single_step_ = true;
    } else if (cmd == "reset") {
      drop_queue(DropReason::Reset);
      episode_over_ = true;
    } else if (cmd == "set_rate") {
      const Json& r = msg.value("rate", Json());
      if (!r.is_number() || !valid_rate(r.get<double>()))
        return error_for("bad_rate", "'rate' must be a number in [1, 60]", msg);
      rate_ = r.get<double>();
    } else if (cmd == "end_session") {
      end();
    } else {
      return error_for("bad_control", "unknown command '" + cmd + "'", msg);
    }
    Json a = ack("control", msg);
    a["command"] = cmd;
    a["paused"] = paused_;
    a["step_rate"] = rate_;
    return a;
  }

  if (type == "handshake") return error_for("already_started", "handshake already completed", msg);
  return error_for("unknown_type", "unknown message type '" + type + "'", msg);
}

void TeachSession::start_episode() {
  ++episode_;
  episode_steps_ = 0;
  episode_over_ = false;
  obs_ = env_->reset(derive_seed(settings_.seed, static_cast<std::uint64_t>(episode_)));
}

std::optional<Eigen::VectorXd> TeachSession::take_feedback() {
  std::optional<Eigen::VectorXd> h;
  while (!queue_.empty()) {
    Pending p = std::move(queue_.back());
    queue_.pop_back();
    const bool fresh = stats_.steps - p.received_after < static_cast<std::uint64_t>(settings_.feedback_window);
    if (!fresh)
      ++stats_.dropped[DropReason::Stale];
    else if (h)
      ++stats_.dropped[DropReason::Superseded];
    else
      h = std::move(p.dims);
  }
  return h;
}

void TeachSession::write_snapshot(const std::string& tag) {
  ++stats_.snapshots;
  if (settings_.snapshot_dir.empty()) return;
  std::ofstream os(fs::path(settings_.snapshot_dir) / (settings_.session_id + "-" + tag + ".snapshot"));
  learner_->write_snapshot(os);
}

Json TeachSession::state_update(const env::Transition& t, const agent::StepRecord& rec, bool applied) const {
  Json telemetry = {{"policy_size", rec.policy_size},
                    {"human_size", rec.human_size},
                    {"feedback_applied", applied},
                    {"feedback_received", stats_.feedback_received},
                    {"dropped", stats_.dropped_total()}};
  telemetry["learning_rate"] = rec.learning_rate.size() ? io::to_json(rec.learning_rate) : Json(nullptr);
  telemetry["feedback"] = rec.feedback ? io::to_json(*rec.feedback) : Json(nullptr);
  telemetry["sigma_p"] = rec.sigma_p.size() ? io::to_json(rec.sigma_p) : Json(nullptr);
  return {{"type", "state_update"},
          {"phase", "step"},
          {"session", settings_.session_id},
          {"episode", episode_},
          {"step", episode_steps_ - 1},
          {"global_step", stats_.steps - 1},
          {"observation", io::to_json(t.observation)},
          {"action", io::to_json(t.action)},
          {"reward", t.reward},
          {"done", episode_over_},
          {"shapes", shapes_to_json(env_->render())},
          {"telemetry", telemetry}};
}

Json TeachSession::tick() {
  if (ended_) throw UsageError("tick after end of session");
  single_step_ = false;

  if (episode_over_) {
    start_episode();
    return {{"type", "state_update"},
            {"phase", "reset"},
            {"session", settings_.session_id},
            {"episode", episode_},
            {"step", -1},
            {"global_step", static_cast<std::int64_t>(stats_.steps) - 1},
            {"observation", io::to_json(obs_)},
            {"action", nullptr},
            {"reward", 0.0},
            {"done", false},
            {"shapes", shapes_to_json(env_->render())},
            {"telemetry", {{"policy_size", learner_->policy_size()}, {"human_size", learner_->human_size()}}}};
  }

  const auto& cfg = settings_.experiment;
  agent::ActionQuery q = learner_->act(obs_);
  std::optional<FeedbackSignal> h;
  if (auto dims = take_feedback()) h = FeedbackSignal{*dims, q.step};
  const agent::StepRecord rec = learner_->update(q, h);
  const bool applied = rec.learning_rate.size() > 0;
  const env::Transition t = env_->step(q.action * cfg.action_scale);
  ++episode_steps_;
  ++stats_.steps;
  if (applied) ++stats_.feedback_applied;
  episode_over_ = t.done || (cfg.max_episode_steps && episode_steps_ >= *cfg.max_episode_steps);
  obs_ = t.observation;

  if (writer_) writer_->write({episode_, rec, h ? "human" : "none", t.reward, t.done});
  if (settings_.snapshot_every > 0 && stats_.steps % static_cast<std::uint64_t>(settings_.snapshot_every) == 0)
    write_snapshot("step" + std::to_string(stats_.steps));
  return state_update(t, rec, applied);
}

Json TeachSession::end() {
  if (ended_) return end_message_;
  drop_queue(DropReason::Ended);
  write_snapshot("final");
  if (step_file_) step_file_->flush();
  ended_ = true;
  end_message_ = {{"type", "session_end"},
                  {"session", settings_.session_id},
                  {"policy_size", learner_->policy_size()},
                  {"human_size", learner_->human_size()},
                  {"stats", stats_.to_json()}};
  return end_message_;
}

}  // namespace gpc::teach
