#include "gpc/gp/kernel.hpp"

#include <cmath>
#include <sstream>

#include "gpc/errors.hpp"

namespace gpc::gp {

namespace {

bool supported_smoothness(double nu) {
  return nu == 0.5 || nu == 1.5 || nu == 2.5;
}

}  // namespace

std::string to_string(KernelKind kind) {
  return kind == KernelKind::SquaredExponential ? "se" : "matern";
}

KernelKind kernel_kind_from_string(const std::string& name) {
  if (name == "se" || name == "squared_exponential") return KernelKind::SquaredExponential;
  if (name == "matern") return KernelKind::Matern;
  throw UsageError("unknown kernel kind '" + name + "'");
}

std::string to_string(ScalingMode mode) {
  return mode == ScalingMode::CustomStatic ? "custom" : "normalized";
}

ScalingMode scaling_mode_from_string(const std::string& name) {
  if (name == "custom" || name == "cs") return ScalingMode::CustomStatic;
  if (name == "normalized" || name == "ns") return ScalingMode::NormalizedOnline;
  throw UsageError("unknown scaling mode '" + name + "'");
}

bool all_finite(const Eigen::VectorXd& v) { return v.allFinite(); }

KernelSpec KernelSpec::squared_exponential(double signal_std, double length_scale,
                                           Eigen::Index dim, double noise_std) {
  KernelSpec spec;
  spec.kind = KernelKind::SquaredExponential;
  spec.signal_variance = signal_std * signal_std;
  spec.length_scales = Eigen::VectorXd::Constant(dim, length_scale);
  spec.noise_std = noise_std;
  return spec;
}

KernelSpec KernelSpec::matern(double signal_std, double length_scale, double nu,
                              Eigen::Index dim, double noise_std) {
  KernelSpec spec;
  spec.kind = KernelKind::Matern;
  spec.signal_variance = signal_std * signal_std;
  spec.length_scales = Eigen::VectorXd::Constant(dim, length_scale);
  spec.smoothness = nu;
  spec.noise_std = noise_std;
  return spec;
}

double KernelSpec::signal_std() const { return std::sqrt(signal_variance); }

void KernelSpec::validate() const {
  std::ostringstream err;
  if (!(signal_variance > 0.0) || !std::isfinite(signal_variance))
    err << "signal_variance must be positive and finite; ";
  if (length_scales.size() == 0) err << "length_scales must not be empty; ";
  for (Eigen::Index d = 0; d < length_scales.size(); ++d) {
    if (!(length_scales[d] > 0.0) || !std::isfinite(length_scales[d])) {
      err << "length_scales[" << d << "] must be positive; ";
      break;
    }
  }
  if (!(noise_std >= 0.0) || !std::isfinite(noise_std))
    err << "noise_std must be >= 0; ";
  if (kind == KernelKind::Matern && !supported_smoothness(smoothness))
    err << "matern smoothness " << smoothness << " unsupported (use 0.5, 1.5 or 2.5); ";
  if (!err.str().empty()) throw UsageError("invalid kernel: " + err.str());
}

ScalingMatrix ScalingMatrix::custom(Eigen::VectorXd weights, double floor) {
  ScalingMatrix s;
  s.mode = ScalingMode::CustomStatic;
  s.values = std::move(weights);
  s.floor = floor;
  return s;
}

ScalingMatrix ScalingMatrix::normalized(Eigen::Index dim, double floor) {
  ScalingMatrix s;
  s.mode = ScalingMode::NormalizedOnline;
  s.values = Eigen::VectorXd::Constant(dim, floor);
  s.floor = floor;
  return s;
}

void ScalingMatrix::validate() const {
  if (!(floor > 0.0)) throw UsageError("scaling floor must be positive");
  for (Eigen::Index d = 0; d < values.size(); ++d) {
    if (!(values[d] > 0.0) || !std::isfinite(values[d]))
      throw UsageError("scaling value " + std::to_string(d) + " must be positive");
  }
}

Kernel::Kernel(KernelSpec spec, const ScalingMatrix& scaling) : spec_(std::move(spec)) {
  spec_.validate();
  scaling.validate();
  if (scaling.dim() != spec_.dim())
    throw UsageError("scaling dimension " + std::to_string(scaling.dim()) +
                     " != kernel dimension " + std::to_string(spec_.dim()));
  inv_length_.resize(spec_.dim());
  for (Eigen::Index d = 0; d < spec_.dim(); ++d)
    inv_length_[d] = 1.0 / (spec_.length_scales[d] * std::max(scaling.values[d], scaling.floor));
}

double Kernel::scaled_sq_distance(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const {
  double acc = 0.0;
  for (Eigen::Index d = 0; d < inv_length_.size(); ++d) {
    // (x - y)^2 == (y - x)^2 bit for bit, so the kernel is exactly symmetric.
    const double u = (x[d] - y[d]) * inv_length_[d];
    acc += u * u;
  }
  return acc;
}

double Kernel::correlation(double sq_distance) const {
  if (spec_.kind == KernelKind::SquaredExponential) return std::exp(-0.5 * sq_distance);
  const double r = std::sqrt(sq_distance);
  if (spec_.smoothness == 0.5) return std::exp(-r);
  if (spec_.smoothness == 1.5) {
    const double a = std::sqrt(3.0) * r;
    return (1.0 + a) * std::exp(-a);
  }
  const double a = std::sqrt(5.0) * r;
  return (1.0 + a + a * a / 3.0) * std::exp(-a);
}

double Kernel::operator()(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const {
  return spec_.signal_variance * correlation(scaled_sq_distance(x, y));
}

double kernel_eval(const KernelSpec& spec, const ScalingMatrix& scaling,
                   const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  if (x.size() != y.size() || x.size() != spec.dim() || x.size() != scaling.dim())
    throw UsageError("kernel_eval: dimension mismatch");
  if (!all_finite(x) || !all_finite(y)) throw UsageError("kernel_eval: non-finite input");
  return Kernel(spec, scaling)(x, y);
}

}  // namespace gpc::gp
