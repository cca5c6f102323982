#pragma once

#include <Eigen/Core>

#include <string>

namespace gpc::gp {

enum class KernelKind { SquaredExponential, Matern };

std::string to_string(KernelKind kind);
KernelKind kernel_kind_from_string(const std::string& name);

// Stationary covariance function with per-dimension length-scales.
// signal_variance is sigma_s^2; noise_std is the observation noise sigma_n.
// Matern smoothness must be one of 0.5, 1.5, 2.5 (closed forms only).
struct KernelSpec {
  KernelKind kind = KernelKind::SquaredExponential;
  double signal_variance = 1.0;
  Eigen::VectorXd length_scales;
  double smoothness = 1.5;
  double noise_std = 0.0;

  static KernelSpec squared_exponential(double signal_std, double length_scale,
                                        Eigen::Index dim, double noise_std);
  static KernelSpec matern(double signal_std, double length_scale, double nu,
                           Eigen::Index dim, double noise_std);

  Eigen::Index dim() const { return length_scales.size(); }
  double signal_std() const;

  // Throws UsageError on any violated invariant.
  void validate() const;
};

enum class ScalingMode { CustomStatic, NormalizedOnline };

std::string to_string(ScalingMode mode);
ScalingMode scaling_mode_from_string(const std::string& name);

// Diagonal ARD scaling. Effective length-scale along d is
// length_scales[d] * max(values[d], floor).
struct ScalingMatrix {
  ScalingMode mode = ScalingMode::CustomStatic;
  Eigen::VectorXd values;
  double floor = 1e-6;

  static ScalingMatrix custom(Eigen::VectorXd weights, double floor = 1e-6);
  // Cold-start state: every scale sits at the floor until data arrives.
  static ScalingMatrix normalized(Eigen::Index dim, double floor = 1e-6);

  Eigen::Index dim() const { return values.size(); }
  void validate() const;
};

// A kernel bound to a scaling; caches the inverse effective length-scales so
// evaluation is a weighted distance plus one exp.
class Kernel {
 public:
  Kernel() = default;
  Kernel(KernelSpec spec, const ScalingMatrix& scaling);

  const KernelSpec& spec() const { return spec_; }
  const Eigen::VectorXd& inverse_length_scales() const { return inv_length_; }
  Eigen::Index dim() const { return inv_length_.size(); }

  double operator()(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const;

  // Squared distance after dividing each axis by its effective length-scale.
  double scaled_sq_distance(const Eigen::VectorXd& x,
                            const Eigen::VectorXd& y) const;

  // rho(r) with rho(0) == 1, evaluated on the squared scaled distance.
  double correlation(double sq_distance) const;

  double prior_variance() const { return spec_.signal_variance; }
  double noise_variance() const { return spec_.noise_std * spec_.noise_std; }

 private:
  KernelSpec spec_;
  Eigen::VectorXd inv_length_;
};

// Free-function form: checks dimensions and finiteness on every call.
double kernel_eval(const KernelSpec& spec, const ScalingMatrix& scaling,
                   const Eigen::VectorXd& x, const Eigen::VectorXd& y);

bool all_finite(const Eigen::VectorXd& v);

}  // namespace gpc::gp
