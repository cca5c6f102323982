#include "doctest.h"

#include <cmath>

#include "../support/test_util.hpp"
#include "gpc/errors.hpp"
#include "gpc/oracle/oracle.hpp"

using namespace gpc;
using oracle::Oracle;
using oracle::OracleConfig;
using testutil::scalar;
using testutil::vec;

namespace {

OracleConfig cfg(double rate, double err, double deadband = 0.1, std::uint64_t seed = 1) {
  OracleConfig c;
  c.feedback_rate = rate;
  c.error_rate = err;
  c.deadband = deadband;
  c.seed = seed;
  return c;
}

}  // namespace

TEST_CASE("oracle: inside the deadband nothing is emitted") {
  Oracle o(cfg(1.0, 0.0));
  for (int i = 0; i < 100; ++i) {
    CHECK(!o.decide(scalar(0.3), scalar(0.3)).feedback);
    CHECK(!o.decide(scalar(0.3), scalar(0.35)).feedback);
  }
}

TEST_CASE("oracle: sign rule") {
  Oracle o(cfg(1.0, 0.0));
  auto d = o.decide(scalar(-1.0), scalar(0.0));
  REQUIRE(d.feedback);
  CHECK(d.feedback->dims[0] == 1.0);
  d = o.decide(vec({0.5, 0.0}), vec({0.0, 0.05}));
  REQUIRE(d.feedback);
  CHECK(d.feedback->dims[0] == -1.0);
  CHECK(d.feedback->dims[1] == 0.0);
}

TEST_CASE("oracle: emission frequency matches gamma within 1 pp") {
  Oracle o(cfg(0.05, 0.0, 0.0, 42));
  int emitted = 0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) emitted += o.decide(scalar(0.0), scalar(1.0)).feedback.has_value();
  CHECK(std::abs(double(emitted) / n - 0.05) <= 0.01);
}

TEST_CASE("oracle: flip fraction matches the error rate within 1 pp") {
  for (double p : {0.1, 0.2}) {
    Oracle o(cfg(1.0, p, 0.0, 7));
    int flipped = 0;
    for (int i = 0; i < 10000; ++i) {
      auto d = o.decide(scalar(0.0), scalar(1.0));
      flipped += d.feedback->dims[0] < 0.0;
    }
    CHECK(std::abs(flipped / 10000.0 - p) <= 0.01);
  }
}

TEST_CASE("oracle: flips are independent across dimensions and steps") {
  // 2x2 contingency tables, chi-square with 1 dof against the 0.1% critical
  // value 10.83.
  auto chi2 = [](double a, double b, double c, double d) {
    const double n = a + b + c + d;
    const double num = n * std::pow(a * d - b * c, 2);
    return num / ((a + b) * (c + d) * (a + c) * (b + d));
  };
  Oracle o(cfg(1.0, 0.2, 0.0, 11));
  double across[2][2] = {}, lag[2][2] = {};
  int prev = -1;
  for (int i = 0; i < 20000; ++i) {
    auto d = o.decide(vec({0, 0}), vec({1, 1}));
    const int f0 = d.feedback->dims[0] < 0, f1 = d.feedback->dims[1] < 0;
    across[f0][f1] += 1;
    if (prev >= 0) lag[prev][f0] += 1;
    prev = f0;
  }
  CHECK(chi2(across[0][0], across[0][1], across[1][0], across[1][1]) < 10.83);
  CHECK(chi2(lag[0][0], lag[0][1], lag[1][0], lag[1][1]) < 10.83);
}

TEST_CASE("oracle: AL mode clamps the signal plus gamma_c") {
  auto c = cfg(0.05, 0.0, 0.0, 3);
  c.al_mode = true;
  c.gamma_c = 0.01;
  Oracle o(c);
  auto d = o.decide(vec({0, 0}), vec({1, 1}), [] { return Eigen::VectorXd(vec({0.2, 0.4})); });
  CHECK(d.probability == doctest::Approx(0.31));
  d = o.decide(scalar(0), scalar(1), [] { return Eigen::VectorXd(scalar(3.0)); });
  CHECK(d.probability == 1.0);
  CHECK(d.feedback);
  CHECK_THROWS_AS(o.decide(scalar(0), scalar(1)), UsageError);

  int calls = 0;
  o.decide(scalar(0), scalar(0), [&] {
    ++calls;
    return Eigen::VectorXd(scalar(0.1));
  });
  CHECK(calls == 0);
}

TEST_CASE("oracle: same seed and action stream give the same feedback") {
  Oracle a(cfg(0.3, 0.2, 0.05, 9)), b(cfg(0.3, 0.2, 0.05, 9));
  for (int i = 0; i < 2000; ++i) {
    const double x = std::sin(0.1 * i);
    auto da = a.decide(scalar(x), scalar(0.0));
    auto db = b.decide(scalar(x), scalar(0.0));
    CHECK(da.feedback.has_value() == db.feedback.has_value());
    if (da.feedback) CHECK(da.feedback->dims == db.feedback->dims);
  }
}

TEST_CASE("oracle: a converged episode gets no feedback") {
  Oracle o(cfg(1.0, 0.2, 0.1, 5));
  for (int i = 0; i < 500; ++i) {
    const double gap = 0.1 * std::sin(0.3 * i);
    CHECK(!o.decide(scalar(gap), scalar(0.0)).feedback);
  }
}

TEST_CASE("oracle: config validation") {
  CHECK_THROWS_AS(Oracle(cfg(1.5, 0.0)), UsageError);
  CHECK_THROWS_AS(Oracle(cfg(0.5, -0.1)), UsageError);
  CHECK_THROWS_AS(Oracle(cfg(0.5, 0.1, -1.0)), UsageError);
  Oracle o(cfg(0.5, 0.1));
  CHECK_THROWS_AS(o.set_rate(2.0), UsageError);
}
