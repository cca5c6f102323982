#pragma once

#include <Eigen/Core>

#include <optional>
#include <vector>

#include "gpc/gp/dictionary.hpp"
#include "gpc/gp/kernel.hpp"

namespace gpc::gp {

struct Prediction {
  Eigen::VectorXd mean;
  Eigen::VectorXd std;
};

// Exact zero-mean GP regression with one independent GP per output
// dimension over a shared input dictionary. Outputs whose label sets
// coincide share one Cholesky factor of (K + sigma_n^2 I).
//
// Every mutation leaves the factorization consistent with the dictionary,
// kernel and scaling. Single writer; const members are safe to call
// concurrently between mutations.
class GpModel {
 public:
  GpModel() = default;
  GpModel(KernelSpec spec, ScalingMatrix scaling, Eigen::Index output_dim,
          std::optional<std::size_t> capacity = std::nullopt);

  const KernelSpec& kernel_spec() const { return kernel_.spec(); }
  const Kernel& kernel() const { return kernel_; }
  const ScalingMatrix& scaling() const { return scaling_; }
  const Dictionary& dictionary() const { return dict_; }
  Eigen::Index input_dim() const { return dict_.input_dim(); }
  Eigen::Index output_dim() const { return dict_.output_dim(); }
  std::size_t size() const { return dict_.size(); }

  // Largest diagonal jitter any factor needed (0 when none).
  double jitter() const;

  // Full refactorization from the current dictionary.
  void fit();

  Prediction predict(const Eigen::VectorXd& x) const;
  Eigen::VectorXd predict_mean(const Eigen::VectorXd& x) const;

  // Rank-one extension of the affected factors; falls back to a full refit
  // when the Schur complement is not safely positive.
  void append(const Eigen::VectorXd& x, const Eigen::VectorXd& y);
  void append(const Eigen::VectorXd& x, const Eigen::VectorXd& y, TargetMask mask);

  // Overwrite pair `index` and refactorize.
  void replace(std::size_t index, const Eigen::VectorXd& x, const Eigen::VectorXd& y);
  void replace(std::size_t index, const Eigen::VectorXd& x, const Eigen::VectorXd& y,
               TargetMask mask);

  // Drop the oldest pair (FIFO eviction) and refactorize.
  void erase_front();

  // Stored input with maximal kernel value to x; lowest index wins ties.
  std::size_t max_covariance_index(const Eigen::VectorXd& x) const;

  // NormalizedOnline mode only: values[d] = max(population stddev, floor),
  // then refit.
  const ScalingMatrix& update_normalized_scaling();

  void set_scaling(ScalingMatrix scaling);

  // Replace the whole dictionary (snapshot load) and refit.
  void load_dictionary(Dictionary dict);

  // Lower-triangular factor used by `output` (empty when unlabeled).
  const Eigen::MatrixXd& factor_for_output(Eigen::Index output) const;

 private:
  struct Factor {
    std::vector<std::size_t> rows;
    Eigen::MatrixXd lower;
    double jitter = 0.0;
  };

  void check_query(const Eigen::VectorXd& x) const;
  void factorize(Factor& f) const;
  bool try_extend(Factor& f, std::size_t new_row) const;
  void rebuild_groups();
  void refresh_alpha();
  Eigen::VectorXd kernel_column(const Factor& f, const Eigen::VectorXd& x) const;

  Kernel kernel_;
  ScalingMatrix scaling_;
  Dictionary dict_;
  std::vector<Factor> factors_;
  std::vector<std::size_t> factor_of_;   // output -> factor index
  std::vector<Eigen::VectorXd> alpha_;   // per output, aligned with its factor rows
};

}  // namespace gpc::gp
