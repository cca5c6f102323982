#pragma once

// Test-only reference GP: written from the textbook formulas with no code
// shared with the library. Dense LU solves, no Cholesky, no caching.

#include <Eigen/Dense>

#include <cmath>
#include <random>
#include <vector>

namespace oracle {

struct KernelParams {
  bool matern = false;
  double nu = 0.5;
  double signal_variance = 1.0;
  Eigen::VectorXd lengths;  // effective per-axis length-scales
  double noise_std = 0.0;
};

inline double kernel(const KernelParams& p, const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const Eigen::VectorXd diff = (a - b).cwiseQuotient(p.lengths);
  const double r = diff.norm();
  if (!p.matern) return p.signal_variance * std::exp(-0.5 * r * r);
  if (p.nu == 0.5) return p.signal_variance * std::exp(-r);
  if (p.nu == 1.5) return p.signal_variance * (1.0 + std::sqrt(3.0) * r) * std::exp(-std::sqrt(3.0) * r);
  return p.signal_variance * (1.0 + std::sqrt(5.0) * r + 5.0 * r * r / 3.0) *
         std::exp(-std::sqrt(5.0) * r);
}

// General-nu Matern via the modified Bessel function of the second kind.
inline double matern_bessel(double nu, double r, double length, double signal_variance) {
  if (r == 0.0) return signal_variance;
  const double z = std::sqrt(2.0 * nu) * r / length;
  return signal_variance * std::pow(2.0, 1.0 - nu) / std::tgamma(nu) * std::pow(z, nu) *
         std::cyl_bessel_k(nu, z);
}

struct Posterior {
  double mean;
  double std;
};

inline Posterior dense_posterior(const KernelParams& p, const std::vector<Eigen::VectorXd>& xs,
                                 const std::vector<double>& ys, const Eigen::VectorXd& query) {
  const auto n = static_cast<Eigen::Index>(xs.size());
  const double prior = kernel(p, query, query);
  if (n == 0) return {0.0, std::sqrt(prior)};
  Eigen::MatrixXd k(n, n);
  Eigen::VectorXd ks(n), y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) k(i, j) = kernel(p, xs[i], xs[j]);
    k(i, i) += p.noise_std * p.noise_std;
    ks[i] = kernel(p, xs[i], query);
    y[i] = ys[static_cast<std::size_t>(i)];
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(k);
  const double mean = ks.dot(lu.solve(y));
  const double var = prior - ks.dot(lu.solve(ks));
  return {mean, std::sqrt(std::max(var, 0.0))};
}

inline Eigen::VectorXd random_vector(std::mt19937_64& rng, Eigen::Index dim, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  Eigen::VectorXd v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v[i] = u(rng);
  return v;
}

}  // namespace oracle
