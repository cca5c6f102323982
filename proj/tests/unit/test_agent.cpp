#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "../support/dense_gp_oracle.hpp"
#include "../support/test_util.hpp"
#include "gpc/agent/gpc_agent.hpp"
#include "gpc/errors.hpp"

using namespace gpc;
using agent::GpcAgent;
using agent::GpcConfig;
using testutil::scalar;
using testutil::vec;

namespace {

GpcConfig pendulum_cs() {
  GpcConfig c;
  c.policy_kernel = gp::KernelSpec::matern(0.01, 0.7, 0.5, 3, 1e-4);
  c.human_kernel = gp::KernelSpec::squared_exponential(0.7, 0.1, 4, 0.07);
  c.scaling_mode = gp::ScalingMode::CustomStatic;
  c.policy_weights = vec({1, 1, 8});
  c.human_weights = vec({1, 1, 8, 2});
  c.constant_rate = 0.01;
  c.bounds = models::ActionBounds::symmetric(1, 2.0);
  return c;
}

GpcConfig pendulum_ns() {
  GpcConfig c = pendulum_cs();
  c.policy_kernel = gp::KernelSpec::matern(0.03, 0.5, 1.5, 3, 3e-4);
  c.human_kernel = gp::KernelSpec::squared_exponential(0.45, 0.1, 4, 0.045);
  c.scaling_mode = gp::ScalingMode::NormalizedOnline;
  c.constant_rate = 0.02;
  return c;
}

FeedbackSignal fb(std::initializer_list<double> xs) { return {vec(xs), 0}; }

}  // namespace

TEST_CASE("agent_step: first feedback on a fresh agent uses the priors") {
  GpcAgent a(pendulum_cs());
  auto rec = a.step(vec({1, 0, 0}), fb({1}));
  REQUIRE(rec.learning_rate.size() == 1);
  CHECK(rec.learning_rate[0] == doctest::Approx(0.72).epsilon(1e-12));
  CHECK(rec.action[0] == 0.0);
  CHECK(rec.corrected_action[0] == doctest::Approx(0.72).epsilon(1e-12));
  CHECK(rec.policy_size == 1);
  CHECK(rec.human_size == 1);
  // Learned: the next action at the same state moves toward a_n.
  CHECK(a.act(vec({1, 0, 0})).action[0] == doctest::Approx(0.72 / (1 + 1e-4)).epsilon(1e-9));
}

TEST_CASE("agent_step: negative feedback mirrors the correction") {
  GpcAgent a(pendulum_cs());
  auto rec = a.step(vec({1, 0, 0}), fb({-1}));
  CHECK(rec.corrected_action[0] == doctest::Approx(-0.72).epsilon(1e-12));
}

TEST_CASE("agent_step: no feedback or all-zero feedback leaves models untouched") {
  GpcAgent a(pendulum_cs());
  a.step(vec({1, 0, 0}), fb({1}));
  const auto before = a.snapshot();
  auto r1 = a.step(vec({0.5, 0.5, 1}), std::nullopt);
  auto r2 = a.step(vec({0.5, 0.5, 1}), fb({0}));
  CHECK(a.snapshot() == before);
  CHECK(r1.learning_rate.size() == 0);
  CHECK(r2.learning_rate.size() == 0);
  CHECK(!r1.feedback);
  CHECK(r2.feedback);
  CHECK(r2.policy_size == 1);
}

TEST_CASE("agent_step: malformed feedback is a usage error") {
  GpcAgent a(pendulum_cs());
  CHECK_THROWS_AS(a.step(vec({1, 0, 0}), fb({0.5})), UsageError);
  CHECK_THROWS_AS(a.step(vec({1, 0, 0}), fb({1, 1})), UsageError);
}

TEST_CASE("agent: a trajectory without feedback never mutates") {
  GpcAgent a(pendulum_ns());
  std::mt19937_64 rng(3);
  for (int k = 0; k < 200; ++k) {
    auto rec = a.step(oracle::random_vector(rng, 3, -8, 8), std::nullopt);
    CHECK(rec.action[0] == 0.0);
  }
  CHECK(a.policy_size() == 0);
  CHECK(a.human_size() == 0);
}

TEST_CASE("agent: per-dimension feedback is independent") {
  GpcConfig c;
  c.policy_kernel = gp::KernelSpec::matern(0.01, 0.4, 1.5, 2, 1e-4);
  c.human_kernel = gp::KernelSpec::squared_exponential(0.01, 0.2, 4, 1e-3);
  c.policy_weights = vec({1, 1});
  c.human_weights = vec({1, 1, 1, 1});
  c.constant_rate = 0.02;
  c.bounds = models::ActionBounds::symmetric(2, 1.0);
  GpcAgent a(c);
  auto rec = a.step(vec({0.1, 0.2}), fb({0, -1}));
  CHECK(rec.corrected_action[0] == 0.0);
  CHECK(rec.corrected_action[1] == doctest::Approx(-(0.01 + 0.01 + 0.02)));
  CHECK(a.human().gp().dictionary().rows_for_output(0).empty());
  CHECK(a.human().gp().dictionary().rows_for_output(1).size() == 1);
}

TEST_CASE("learning_rate: affine form and stagnation floor") {
  GpcAgent a(pendulum_cs());
  CHECK(a.learning_rate(scalar(0), scalar(0))[0] == doctest::Approx(0.01));
  const double r1 = a.learning_rate(scalar(0.1), scalar(0.2))[0];
  const double r2 = a.learning_rate(scalar(0.2), scalar(0.4))[0];
  CHECK(r2 - r1 == doctest::Approx(0.3));
  GpcConfig c = pendulum_cs();
  c.static_rate = 0.4;
  GpcAgent s(c);
  CHECK(s.learning_rate(scalar(0.1), scalar(0.2))[0] == 0.4);
}

TEST_CASE("learning_rate: alternating feedback at one pair settles") {
  GpcAgent a(pendulum_cs());
  const auto s = vec({0.3, 0.1, -0.5});
  std::vector<double> rates;
  for (int k = 0; k < 12; ++k) {
    auto q = a.act(s);
    // Pin the action so every feedback lands at the same (s, a).
    q.action = scalar(0.05);
    rates.push_back(a.update(q, fb({k % 2 ? 1.0 : -1.0})).learning_rate[0]);
  }
  for (std::size_t k = 2; k < rates.size(); ++k) CHECK(rates[k] <= rates[k - 1] + 1e-15);
  CHECK(rates.back() < rates.front());
}

TEST_CASE("active_learning_signal") {
  SUBCASE("c_a = 0 gives zero") {
    GpcAgent a(pendulum_cs());
    auto q = a.act(vec({1, 0, 0}));
    CHECK(a.active_learning_signal(q)[0] == 0.0);
  }
  SUBCASE("empty H gives c_a times the prior std") {
    auto c = pendulum_cs();
    c.al_gain = 0.5;
    GpcAgent a(c);
    auto q = a.act(vec({1, 0, 0}));
    CHECK(a.active_learning_signal(q)[0] == doctest::Approx(0.35));
  }
  SUBCASE("consistent feedback at a pair lowers the signal there") {
    auto c = pendulum_cs();
    c.al_gain = 1.0;
    GpcAgent a(c);
    auto q = a.act(vec({1, 0, 0}));
    q.action = scalar(0.3);
    const double before = a.active_learning_signal(q)[0];
    const auto snap = a.snapshot();
    CHECK(a.snapshot() == snap);
    a.update(q, fb({1}));
    CHECK(a.active_learning_signal(q)[0] < before);
  }
}

TEST_CASE("active learning: visited pairs ask less than unvisited ones") {
  auto c = pendulum_cs();
  c.al_gain = 1.0;
  std::mt19937_64 rng(11);
  int trials = 0, wins = 0;
  for (int t = 0; t < 30; ++t) {
    GpcAgent a(c);
    std::vector<agent::ActionQuery> visited;
    for (int i = 0; i < 5; ++i) {
      auto q = a.act(oracle::random_vector(rng, 3, -1, 1));
      for (int rep = 0; rep < 3; ++rep) {
        auto again = q;
        a.update(again, fb({rep % 2 ? -1.0 : 1.0}));
      }
      visited.push_back(q);
    }
    double seen = 0, fresh = 0;
    for (const auto& q : visited) seen += a.active_learning_signal(q)[0];
    for (int i = 0; i < 5; ++i) {
      auto q = a.act(oracle::random_vector(rng, 3, -1, 1));
      fresh += a.active_learning_signal(q)[0];
    }
    ++trials;
    if (fresh > seen) ++wins;
  }
  CHECK(wins == trials);
}

TEST_CASE("agent: determinism of records and snapshots") {
  auto run = [] {
    GpcAgent a(pendulum_ns());
    std::mt19937_64 rng(99);
    std::bernoulli_distribution coin(0.3);
    std::vector<double> trace;
    for (int k = 0; k < 150; ++k) {
      auto s = oracle::random_vector(rng, 3, -1, 1);
      std::optional<FeedbackSignal> h;
      if (coin(rng)) h = fb({coin(rng) ? 1.0 : -1.0});
      auto rec = a.step(s, h);
      trace.push_back(rec.action[0]);
      trace.push_back(rec.sigma_p[0]);
    }
    return std::make_pair(trace, a.snapshot());
  };
  auto [t1, s1] = run();
  auto [t2, s2] = run();
  CHECK(t1 == t2);
  CHECK(s1 == s2);
}

TEST_CASE("agent: NS matches CS when dictionary stddevs equal the CS weights") {
  // Inputs {c - w, c + w} per axis have population stddev w.
  const auto w = vec({0.4, 1.5, 3.0});
  auto k = gp::KernelSpec::matern(0.03, 0.5, 1.5, 3, 3e-4);
  gp::GpModel ns(k, gp::ScalingMatrix::normalized(3), 1);
  gp::GpModel cs(k, gp::ScalingMatrix::custom(w), 1);
  const auto c = vec({0.1, -0.2, 0.3});
  for (auto [x, y] : {std::pair{Eigen::VectorXd(c - w), 0.4}, std::pair{Eigen::VectorXd(c + w), -0.1}}) {
    ns.append(x, scalar(y));
    cs.append(x, scalar(y));
  }
  ns.update_normalized_scaling();
  std::mt19937_64 rng(5);
  for (int i = 0; i < 30; ++i) {
    auto q = oracle::random_vector(rng, 3, -3, 3);
    auto a = ns.predict(q), b = cs.predict(q);
    CHECK(std::abs(a.mean[0] - b.mean[0]) <= 1e-8);
    CHECK(std::abs(a.std[0] - b.std[0]) <= 1e-8);
  }
}

TEST_CASE("agent: NS cold start uses floor scales and updates after two points") {
  GpcAgent a(pendulum_ns());
  auto rec = a.step(vec({0.2, 0.3, 1.0}), fb({1}));
  CHECK(rec.learning_rate[0] == doctest::Approx(0.03 + 0.45 + 0.02));
  CHECK(a.policy().gp().scaling().values.maxCoeff() == 1e-6);
  a.step(vec({0.4, 0.3, 2.0}), fb({1}));
  CHECK(a.policy().gp().scaling().values[0] == doctest::Approx(0.1));
  CHECK(a.policy().gp().scaling().values[2] == doctest::Approx(0.5));
}

TEST_CASE("GpcConfig validation") {
  auto c = pendulum_cs();
  c.constant_rate = 0.0;
  CHECK_THROWS_AS(GpcAgent{c}, UsageError);
  c = pendulum_cs();
  c.al_gain = -1;
  CHECK_THROWS_AS(GpcAgent{c}, UsageError);
  c = pendulum_cs();
  c.human_kernel = gp::KernelSpec::squared_exponential(0.7, 0.1, 3, 0.07);
  CHECK_THROWS_AS(GpcAgent{c}, UsageError);
}
