#include "doctest.h"

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "../support/dense_gp_oracle.hpp"
#include "gpc/errors.hpp"
#include "gpc/gp/kernel.hpp"

using gpc::gp::Kernel;
using gpc::gp::KernelSpec;
using gpc::gp::ScalingMatrix;
using gpc::gp::kernel_eval;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> xs) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

ScalingMatrix unit(Eigen::Index dim) { return ScalingMatrix::custom(Eigen::VectorXd::Ones(dim)); }

}  // namespace

TEST_CASE("squared exponential at zero distance equals the signal variance") {
  auto spec = KernelSpec::squared_exponential(0.7, 0.3, 4, 0.0);
  std::mt19937_64 rng(3);
  for (int t = 0; t < 20; ++t) {
    auto x = oracle::random_vector(rng, 4, -5, 5);
    CHECK(kernel_eval(spec, unit(4), x, x) == doctest::Approx(0.49).epsilon(1e-15));
  }
}

TEST_CASE("matern 1/2 at unit distance is exp(-1)") {
  auto spec = KernelSpec::matern(1.0, 1.0, 0.5, 1, 0.0);
  const double k = kernel_eval(spec, unit(1), vec({0.0}), vec({1.0}));
  CHECK(std::abs(k - std::exp(-1.0)) < 1e-15);
  CHECK(k == doctest::Approx(0.3679).epsilon(1e-4));
  // Bessel-function form just above nu = 1/2 agrees with the closed form.
  CHECK(std::abs(oracle::matern_bessel(0.5 + 1e-6, 1.0, 1.0, 1.0) - k) < 1e-5);
}

TEST_CASE("matern closed forms match the Bessel-function definition") {
  for (double nu : {0.5, 1.5, 2.5}) {
    auto spec = KernelSpec::matern(1.3, 0.8, nu, 1, 0.0);
    for (double r : {0.05, 0.3, 1.0, 2.7, 6.0}) {
      const double k = kernel_eval(spec, unit(1), vec({0.0}), vec({r}));
      CHECK(k == doctest::Approx(oracle::matern_bessel(nu, r, 0.8, 1.69)).epsilon(1e-12));
    }
  }
}

TEST_CASE("pendulum human-model kernel value") {
  // Table 2 pendulum l_h = 0.1 with signal variance 0.7.
  KernelSpec spec = KernelSpec::squared_exponential(std::sqrt(0.7), 0.1, 4, 0.0);
  spec.signal_variance = 0.7;
  const auto x2 = vec({0.3, -0.2, 1.0, 0.5});
  const Eigen::VectorXd x1 = x2 + vec({0.1, 0, 0, 0});
  const double k = kernel_eval(spec, unit(4), x1, x2);
  CHECK(k == doctest::Approx(0.7 * std::exp(-0.5)).epsilon(1e-12));
  CHECK(k == doctest::Approx(0.4246).epsilon(1e-4));
}

TEST_CASE("kernel is exactly symmetric") {
  std::mt19937_64 rng(11);
  for (auto spec : {KernelSpec::squared_exponential(1.1, 0.4, 5, 0.0),
                    KernelSpec::matern(0.9, 0.7, 0.5, 5, 0.0),
                    KernelSpec::matern(0.9, 0.7, 1.5, 5, 0.0),
                    KernelSpec::matern(0.9, 0.7, 2.5, 5, 0.0)}) {
    auto scaling = ScalingMatrix::custom(oracle::random_vector(rng, 5, 0.1, 3.0));
    Kernel k(spec, scaling);
    for (int t = 0; t < 200; ++t) {
      auto a = oracle::random_vector(rng, 5, -3, 3);
      auto b = oracle::random_vector(rng, 5, -3, 3);
      CHECK(k(a, b) == k(b, a));
    }
  }
}

TEST_CASE("gram matrix is positive semidefinite") {
  std::mt19937_64 rng(5);
  for (auto spec : {KernelSpec::squared_exponential(1.0, 0.5, 3, 0.0),
                    KernelSpec::matern(1.0, 0.5, 0.5, 3, 0.0),
                    KernelSpec::matern(1.0, 0.5, 1.5, 3, 0.0)}) {
    Kernel k(spec, unit(3));
    const int n = 50;
    std::vector<Eigen::VectorXd> xs;
    for (int i = 0; i < n; ++i) xs.push_back(oracle::random_vector(rng, 3, -1, 1));
    Eigen::MatrixXd gram(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) gram(i, j) = k(xs[i], xs[j]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
    CHECK(eig.eigenvalues().minCoeff() >= -1e-10 * n);
  }
}

TEST_CASE("custom weights equal pre-dividing the inputs") {
  std::mt19937_64 rng(9);
  auto spec = KernelSpec::matern(1.0, 0.6, 1.5, 3, 0.0);
  for (int t = 0; t < 100; ++t) {
    auto w = oracle::random_vector(rng, 3, 0.2, 5.0);
    auto a = oracle::random_vector(rng, 3, -4, 4);
    auto b = oracle::random_vector(rng, 3, -4, 4);
    const double weighted = Kernel(spec, ScalingMatrix::custom(w))(a, b);
    const Eigen::VectorXd aw = a.cwiseQuotient(w);
    const Eigen::VectorXd bw = b.cwiseQuotient(w);
    const double divided = Kernel(spec, unit(3))(aw, bw);
    CHECK(std::abs(weighted - divided) <= 1e-10);
  }
}

TEST_CASE("kernel contract violations") {
  auto spec = KernelSpec::squared_exponential(1.0, 1.0, 2, 0.0);
  CHECK_THROWS_AS(kernel_eval(spec, unit(2), vec({0, 0}), vec({0, 0, 0})), gpc::UsageError);
  CHECK_THROWS_AS(kernel_eval(spec, unit(3), vec({0, 0}), vec({0, 0})), gpc::UsageError);
  CHECK_THROWS_AS(kernel_eval(spec, unit(2), vec({NAN, 0}), vec({0, 0})), gpc::UsageError);
  CHECK_THROWS_AS(kernel_eval(spec, unit(2), vec({0, INFINITY}), vec({0, 0})), gpc::UsageError);

  auto bad_nu = KernelSpec::matern(1.0, 1.0, 1.0, 1, 0.0);
  CHECK_THROWS_AS(bad_nu.validate(), gpc::UsageError);
  auto bad_len = KernelSpec::squared_exponential(1.0, 0.0, 1, 0.0);
  CHECK_THROWS_AS(bad_len.validate(), gpc::UsageError);
  auto bad_var = KernelSpec::squared_exponential(0.0, 1.0, 1, 0.0);
  CHECK_THROWS_AS(bad_var.validate(), gpc::UsageError);
  auto bad_noise = KernelSpec::squared_exponential(1.0, 1.0, 1, -0.1);
  CHECK_THROWS_AS(bad_noise.validate(), gpc::UsageError);
}
