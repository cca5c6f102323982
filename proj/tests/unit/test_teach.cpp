#include "doctest.h"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "../support/ws_client.hpp"
#include "gpc/errors.hpp"
#include "gpc/harness/experiment.hpp"
#include "gpc/harness/step_stream.hpp"
#include "gpc/io/json.hpp"
#include "gpc/teach/server.hpp"
#include "gpc/teach/session.hpp"

using namespace gpc;
using teach::Json;
using teach::TeachSession;

namespace fs = std::filesystem;

namespace {

teach::SessionSettings settings(const std::string& env = "pendulum", const std::string& alg = "GPC-CS",
                                const Json& extra = Json::object()) {
  Json cfg = {{"environment", env}, {"algorithm", alg}, {"seed", 3}};
  cfg.merge_patch(extra);
  return teach::settings_from_json(cfg, Json::object(), "");
}

Json feedback(std::initializer_list<int> dims) { return {{"type", "feedback"}, {"dims", dims}}; }
Json control(const std::string& cmd) { return {{"type", "control"}, {"command", cmd}}; }

std::string read_file(const fs::path& p) {
  std::ifstream is(p);
  return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("gpc-teach-" + name + "-" + std::to_string(::getpid()));
  fs::remove_all(p);
  return p;
}

// A recorded oracle session: per step, the feedback the oracle gave (if any).
struct Script {
  harness::ExperimentConfig cfg;
  std::uint64_t seed = 0;
  std::vector<std::vector<std::optional<Eigen::VectorXd>>> episodes;
  std::string snapshot;
};

Script record(const std::string& env, const std::string& alg, std::uint64_t seed) {
  Script s;
  s.cfg = harness::load_config("", {"environment=" + env, "algorithm=" + alg, "episodes=3", "max_episode_steps=80",
                                    "seeds=[" + std::to_string(seed) + "]"});
  s.cfg.oracle.feedback_rate = 0.4;
  s.seed = seed;
  std::ostringstream os;
  s.snapshot = harness::run_session(s.cfg, seed, &os).snapshot;
  std::istringstream is(os.str());
  const auto stream = harness::read_step_stream(is);
  for (const auto& row : stream.rows) {
    if (row.episode >= static_cast<int>(s.episodes.size())) s.episodes.emplace_back();
    s.episodes.back().push_back(row.record.feedback);
  }
  return s;
}

Json session_config_for(const Script& s) {
  Json cfg = harness::to_json(s.cfg);
  cfg["seed"] = s.seed;
  cfg["start_paused"] = true;
  cfg["session_id"] = "replay";
  return cfg;
}

Json dims_of(const Eigen::VectorXd& h) {
  Json d = Json::array();
  for (Eigen::Index i = 0; i < h.size(); ++i) d.push_back(static_cast<int>(h[i]));
  return d;
}

}  // namespace

TEST_CASE("session: no feedback means no model mutation") {
  TeachSession s(settings());
  for (int i = 0; i < 150; ++i) s.tick();
  CHECK(s.learner().policy_size() == 0);
  CHECK(s.learner().human_size() == 0);
  CHECK(s.stats().feedback_applied == 0);
}

TEST_CASE("session: one +1 on a 1-D environment adds one pair to each model") {
  TeachSession s(settings());
  s.tick();  // reset phase
  s.tick();
  const auto a = s.handle(feedback({1}));
  CHECK(a["type"] == "ack");
  const auto u = s.tick();
  CHECK(u["telemetry"]["feedback_applied"] == true);
  CHECK(s.learner().policy_size() == 1);
  CHECK(s.learner().human_size() == 1);
}

TEST_CASE("session: two feedbacks within one step, newest wins") {
  TeachSession s(settings("lander", "GPC-NS"));
  s.tick();
  s.handle(feedback({1, 0}));
  s.handle(feedback({0, -1}));
  const auto u = s.tick();
  CHECK(s.stats().feedback_applied == 1);
  CHECK(s.stats().dropped.at(teach::DropReason::Superseded) == 1);
  CHECK(s.stats().dropped_total() == 1);
  CHECK(u["telemetry"]["feedback"] == Json{0, -1});
  CHECK(s.learner().policy_size() == 1);
}

TEST_CASE("session: feedback in the done-state interlude is dropped with its own reason") {
  auto st = settings("pendulum", "GPC-CS", {{"max_episode_steps", 3}});
  TeachSession s(st);
  CHECK(s.handle(feedback({1}))["dropped"] == "episode_done");  // before the first reset
  s.tick();
  for (int i = 0; i < 3; ++i) s.tick();
  const auto a = s.handle(feedback({-1}));
  CHECK(a["type"] == "ack");
  CHECK(a["dropped"] == "episode_done");
  CHECK(s.stats().dropped.at(teach::DropReason::EpisodeDone) == 2);
  const auto r = s.tick();
  CHECK(r["phase"] == "reset");
  CHECK(r["episode"] == 1);
  CHECK(s.learner().policy_size() == 0);
}

TEST_CASE("session: malformed feedback is rejected and nothing is queued") {
  TeachSession s(settings("lander", "GPC-CS"));
  s.tick();
  for (const Json& bad : {feedback({2, 0}), feedback({1}), Json{{"type", "feedback"}, {"dims", {0.5, 0}}},
                          Json{{"type", "feedback"}}, Json{{"type", "feedback"}, {"dims", "up"}}}) {
    const auto e = s.handle(bad);
    CHECK(e["type"] == "error");
    CHECK(e["code"] == "bad_feedback");
  }
  s.tick();
  CHECK(s.stats().feedback_received == 0);
  CHECK(s.learner().policy_size() == 0);
}

TEST_CASE("session: unknown messages get an error and the session continues") {
  TeachSession s(settings());
  const Json id = 42;
  auto e = s.handle({{"type", "dance"}, {"id", id}});
  CHECK(e["code"] == "unknown_type");
  CHECK(e["id"] == 42);
  CHECK(s.handle(Json::array())["code"] == "bad_message");
  CHECK(s.handle({{"type", "control"}, {"command", "jump"}})["code"] == "bad_control");
  CHECK(s.handle({{"type", "handshake"}})["code"] == "already_started");
  CHECK_FALSE(s.ended());
  s.tick();
  s.tick();
  CHECK(s.stats().steps == 1);
}

TEST_CASE("session: pause and resume keep step indices contiguous") {
  TeachSession s(settings());
  s.tick();
  std::vector<int> steps;
  for (int i = 0; i < 5; ++i) steps.push_back(s.tick()["step"].get<int>());
  CHECK(s.handle(control("pause"))["paused"] == true);
  CHECK_FALSE(s.wants_tick());
  CHECK(s.handle(control("resume"))["paused"] == false);
  CHECK(s.wants_tick());
  for (int i = 0; i < 5; ++i) steps.push_back(s.tick()["step"].get<int>());
  for (int i = 0; i < 10; ++i) CHECK(steps[static_cast<std::size_t>(i)] == i);
}

TEST_CASE("session: single steps only while paused") {
  TeachSession s(settings());
  CHECK(s.handle(control("step"))["code"] == "not_paused");
  s.handle(control("pause"));
  CHECK(s.handle(control("step"))["type"] == "ack");
  CHECK(s.wants_tick());
  s.tick();
  CHECK_FALSE(s.wants_tick());
}

TEST_CASE("session: step rate is bounded to [1, 60]") {
  TeachSession s(settings());
  CHECK(s.step_rate() == 20.0);
  CHECK(s.handle({{"type", "control"}, {"command", "set_rate"}, {"rate", 61}})["code"] == "bad_rate");
  CHECK(s.handle({{"type", "control"}, {"command", "set_rate"}, {"rate", 0.5}})["code"] == "bad_rate");
  CHECK(s.handle({{"type", "control"}, {"command", "set_rate"}})["code"] == "bad_rate");
  CHECK(s.handle({{"type", "control"}, {"command", "set_rate"}, {"rate", 60}})["type"] == "ack");
  CHECK(s.step_rate() == 60.0);
  CHECK_THROWS_AS(settings("pendulum", "GPC-CS", {{"step_rate", 0}}), UsageError);
  CHECK_THROWS_AS(settings("pendulum", "GPC-CS", {{"feedback_window", 0}}), UsageError);
  CHECK_THROWS_AS(settings("pendulum", "GPC-CS", {{"session_id", "../x"}}), UsageError);
  CHECK_THROWS_AS(settings("mars"), UsageError);
}

TEST_CASE("session: reset drops queued feedback and starts a new episode") {
  TeachSession s(settings());
  s.tick();
  s.tick();
  s.handle(feedback({1}));
  s.handle(control("reset"));
  CHECK(s.stats().dropped.at(teach::DropReason::Reset) == 1);
  const auto r = s.tick();
  CHECK(r["phase"] == "reset");
  CHECK(r["episode"] == 1);
}

TEST_CASE("session: state updates carry render primitives") {
  TeachSession s(settings("cartpole"));
  const auto r = s.tick();
  REQUIRE(r["shapes"].is_array());
  bool cart = false;
  for (const auto& shape : r["shapes"]) cart = cart || shape["role"] == "cart";
  CHECK(cart);
  const auto u = s.tick();
  CHECK(u["observation"].size() == 4);
  CHECK(u["action"].size() == 1);
}

TEST_CASE("session: lockstep replay of an oracle stream equals the in-process run") {
  for (const char* alg : {"GPC-CS", "GPC-NS", "COACH"}) {
    CAPTURE(alg);
    const Script script = record("pendulum", alg, 7);
    const auto dir = scratch(std::string("core-") + alg);
    TeachSession s(teach::settings_from_json(session_config_for(script), Json::object(), dir.string()));
    for (const auto& ep : script.episodes) {
      CHECK(s.tick()["phase"] == "reset");
      for (const auto& h : ep) {
        if (h) s.handle({{"type", "feedback"}, {"dims", dims_of(*h)}});
        s.tick();
      }
    }
    s.end();
    CHECK(s.learner().snapshot() == script.snapshot);
    CHECK(read_file(dir / "replay-final.snapshot") == script.snapshot);

    // The session's own stream replays to the same model.
    std::ifstream steps(dir / "replay.steps.tsv");
    const auto replay = harness::replay_session(steps);
    CHECK(replay.learner->snapshot() == script.snapshot);
    fs::remove_all(dir);
  }
}

TEST_CASE("session: periodic snapshots") {
  const auto dir = scratch("periodic");
  TeachSession s(teach::settings_from_json({{"snapshot_every", 10}, {"session_id", "p"}}, Json::object(), dir.string()));
  for (int i = 0; i < 26; ++i) s.tick();
  s.end();
  CHECK(fs::exists(dir / "p-step10.snapshot"));
  CHECK(fs::exists(dir / "p-step20.snapshot"));
  CHECK(fs::exists(dir / "p-final.snapshot"));
  CHECK(s.stats().snapshots == 3);
  fs::remove_all(dir);
}

TEST_CASE("server: bind failure is reported") {
  teach::ServerOptions o;
  o.port = 0;
  teach::TeachServer first(o);
  o.port = first.port();
  CHECK_THROWS_AS(teach::TeachServer{o}, UsageError);
  o.address = "not-an-address";
  CHECK_THROWS_AS(teach::TeachServer{o}, UsageError);
}

TEST_CASE("server: handshake, protocol errors and acknowledgements over WebSocket") {
  teach::ServerOptions o;
  o.port = 0;
  teach::TeachServer server(o);
  std::thread t([&] { server.run(); });
  {
    testutil::WsClient c("127.0.0.1", server.port());
    c.send({{"type", "feedback"}, {"dims", {1}}});
    CHECK(c.receive()["code"] == "no_session");
    c.send({{"type", "handshake"}, {"protocol_version", 99}, {"session_config", Json::object()}});
    CHECK(c.receive()["code"] == "bad_version");
    c.send({{"type", "handshake"}, {"protocol_version", 1}, {"session_config", {{"environment", "mars"}}}});
    CHECK(c.receive()["code"] == "bad_config");
    c.send({{"type", "handshake"},
            {"protocol_version", 1},
            {"session_config", {{"environment", "cartpole"}, {"start_paused", true}}}});
    const auto w = c.receive();
    CHECK(w["ack"] == "handshake");
    CHECK(w["protocol_version"] == 1);
    CHECK(w["action_upper"][0] == 10.0);

    c.send_raw("{not json");
    CHECK(c.receive()["code"] == "bad_json");
    c.send({{"type", "wave"}, {"id", "w1"}});
    const auto e = c.receive();
    CHECK(e["code"] == "unknown_type");
    CHECK(e["id"] == "w1");

    c.send(control("step"));
    CHECK(c.receive()["ack"] == "control");
    CHECK(c.receive()["phase"] == "reset");
    c.send(control("step"));
    CHECK(c.receive()["ack"] == "control");
    const auto u = c.receive();
    CHECK(u["type"] == "state_update");
    CHECK(u["step"] == 0);

    c.send(control("end_session"));
    CHECK(c.receive()["ack"] == "control");
    const auto end = c.receive();
    CHECK(end["type"] == "session_end");
    CHECK(end["stats"]["steps"] == 1);
  }
  server.stop();
  t.join();
  CHECK(server.sessions_started() == 1);
}

TEST_CASE("server: scripted client replaying an oracle stream reproduces the in-process model") {
  const Script script = record("cartpole", "GPC-CS", 5);
  const auto dir = scratch("ws");
  teach::ServerOptions o;
  o.port = 0;
  o.snapshot_dir = dir.string();
  teach::TeachServer server(o);
  std::thread t([&] { server.run(); });
  {
    testutil::WsClient c("127.0.0.1", server.port());
    c.send({{"type", "handshake"}, {"protocol_version", 1}, {"session_config", session_config_for(script)}});
    REQUIRE(c.receive()["ack"] == "handshake");
    std::size_t applied = 0, expected = 0;
    for (const auto& ep : script.episodes) {
      c.send(control("step"));
      CHECK(c.receive_until("state_update")["phase"] == "reset");
      for (const auto& h : ep) {
        if (h) {
          c.send({{"type", "feedback"}, {"dims", dims_of(*h)}});
          CHECK(c.receive()["ack"] == "feedback");
          if (h->cwiseAbs().sum() > 0) ++expected;
        }
        c.send(control("step"));
        if (c.receive_until("state_update")["telemetry"]["feedback_applied"] == true) ++applied;
      }
    }
    CHECK(applied == expected);
    c.send(control("end_session"));
    const auto end = c.receive_until("session_end");
    CHECK(end["stats"]["dropped_total"] == 0);
  }
  server.stop();
  t.join();
  CHECK(read_file(dir / "replay-final.snapshot") == script.snapshot);
  std::ifstream steps(dir / "replay.steps.tsv");
  CHECK(harness::replay_session(steps).learner->snapshot() == script.snapshot);
  fs::remove_all(dir);
}

TEST_CASE("server: free-running session keeps the step rate") {
  teach::ServerOptions o;
  o.port = 0;
  teach::TeachServer server(o);
  std::thread t([&] { server.run(); });
  {
    testutil::WsClient c("127.0.0.1", server.port());
    c.send({{"type", "handshake"},
            {"protocol_version", 1},
            {"session_config", {{"environment", "pendulum"}, {"step_rate", 40}}}});
    REQUIRE(c.receive()["ack"] == "handshake");
    const auto t0 = std::chrono::steady_clock::now();
    int updates = 0, fed = 0;
    while (std::chrono::steady_clock::now() - t0 < std::chrono::milliseconds(2000)) {
      const auto m = c.receive();
      if (m["type"] != "state_update") continue;
      ++updates;
      if (m["phase"] == "step" && updates % 4 == 0) {
        c.send(feedback({updates % 8 == 0 ? 1 : -1}));
        ++fed;
      }
    }
    c.send(control("pause"));
    c.send(control("end_session"));
    const auto end = c.receive_until("session_end");
    MESSAGE("updates in 2 s at 40/s: " << updates << ", misses " << end["stats"]["deadline_misses"]);
    CHECK(updates >= 70);
    CHECK(updates <= 90);
    CHECK(end["stats"]["deadline_misses"].get<int>() * 100 <= updates);
    CHECK(end["stats"]["feedback_applied"].get<int>() > 0);
  }
  server.stop();
  t.join();
}
