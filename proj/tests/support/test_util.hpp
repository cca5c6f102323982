#pragma once

#include <Eigen/Core>

#include <initializer_list>

namespace testutil {

inline Eigen::VectorXd vec(std::initializer_list<double> xs) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

inline Eigen::VectorXd scalar(double y) { return vec({y}); }

}  // namespace testutil
