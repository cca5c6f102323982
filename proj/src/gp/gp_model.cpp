#include "gpc/gp/gp_model.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gpc/errors.hpp"

namespace gpc::gp {

namespace {

constexpr double kFirstJitter = 1e-10;
constexpr double kLastJitter = 1e-6;

}  // namespace

GpModel::GpModel(KernelSpec spec, ScalingMatrix scaling, Eigen::Index output_dim,
                 std::optional<std::size_t> capacity)
    : kernel_(std::move(spec), scaling),
      scaling_(std::move(scaling)),
      dict_(kernel_.dim(), output_dim, capacity) {
  rebuild_groups();
}

double GpModel::jitter() const {
  double j = 0.0;
  for (const auto& f : factors_) j = std::max(j, f.jitter);
  return j;
}

void GpModel::check_query(const Eigen::VectorXd& x) const {
  if (x.size() != input_dim())
    throw UsageError("query dimension " + std::to_string(x.size()) + " != " +
                     std::to_string(input_dim()));
  if (!x.allFinite()) throw UsageError("non-finite query");
}

void GpModel::factorize(Factor& f) const {
  const auto n = static_cast<Eigen::Index>(f.rows.size());
  if (n == 0) {
    f.lower.resize(0, 0);
    f.jitter = 0.0;
    return;
  }
  Eigen::MatrixXd gram(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& xi = dict_.input(f.rows[i]);
    gram(i, i) = kernel_.prior_variance();
    for (Eigen::Index j = 0; j < i; ++j) {
      const double k = kernel_(xi, dict_.input(f.rows[j]));
      gram(i, j) = k;
      gram(j, i) = k;
    }
  }
  gram.diagonal().array() += kernel_.noise_variance();

  const double scale = kernel_.prior_variance();
  double jitter = 0.0;
  while (true) {
    Eigen::MatrixXd work = gram;
    if (jitter > 0.0) work.diagonal().array() += jitter;
    Eigen::LLT<Eigen::MatrixXd> llt(work);
    if (llt.info() == Eigen::Success) {
      f.lower = llt.matrixL();
      f.jitter = jitter;
      return;
    }
    const double next = jitter == 0.0 ? kFirstJitter * scale : jitter * 10.0;
    if (next > kLastJitter * scale * (1.0 + 1e-9)) {
      std::ostringstream msg;
      msg << "Gram matrix not positive definite after jitter " << jitter << " (n=" << n << ")";
      throw NumericalError(msg.str(), jitter);
    }
    jitter = next;
  }
}

Eigen::VectorXd GpModel::kernel_column(const Factor& f, const Eigen::VectorXd& x) const {
  Eigen::VectorXd k(static_cast<Eigen::Index>(f.rows.size()));
  for (std::size_t i = 0; i < f.rows.size(); ++i)
    k[static_cast<Eigen::Index>(i)] = kernel_(dict_.input(f.rows[i]), x);
  return k;
}

bool GpModel::try_extend(Factor& f, std::size_t new_row) const {
  const auto n = static_cast<Eigen::Index>(f.rows.size());
  const auto& x = dict_.input(new_row);
  Eigen::VectorXd k = kernel_column(f, x);
  Eigen::VectorXd l = k;
  if (n > 0) f.lower.triangularView<Eigen::Lower>().solveInPlace(l);
  const double diag = kernel_.prior_variance() + kernel_.noise_variance() + f.jitter;
  const double schur = diag - l.squaredNorm();
  // Require a margin so the extended factor matches a fresh factorization.
  if (!(schur > 1e-12 * kernel_.prior_variance())) return false;
  Eigen::MatrixXd grown = Eigen::MatrixXd::Zero(n + 1, n + 1);
  grown.topLeftCorner(n, n) = f.lower;
  grown.block(n, 0, 1, n) = l.transpose();
  grown(n, n) = std::sqrt(schur);
  f.lower = std::move(grown);
  f.rows.push_back(new_row);
  return true;
}

void GpModel::rebuild_groups() {
  factors_.clear();
  factor_of_.assign(static_cast<std::size_t>(output_dim()), 0);
  for (Eigen::Index d = 0; d < output_dim(); ++d) {
    auto rows = dict_.rows_for_output(d);
    auto it = std::find_if(factors_.begin(), factors_.end(),
                           [&](const Factor& f) { return f.rows == rows; });
    if (it == factors_.end()) {
      Factor f;
      f.rows = std::move(rows);
      factorize(f);
      factors_.push_back(std::move(f));
      factor_of_[static_cast<std::size_t>(d)] = factors_.size() - 1;
    } else {
      factor_of_[static_cast<std::size_t>(d)] =
          static_cast<std::size_t>(std::distance(factors_.begin(), it));
    }
  }
  refresh_alpha();
}

void GpModel::refresh_alpha() {
  alpha_.assign(static_cast<std::size_t>(output_dim()), Eigen::VectorXd());
  for (Eigen::Index d = 0; d < output_dim(); ++d) {
    const auto& f = factors_[factor_of_[static_cast<std::size_t>(d)]];
    Eigen::VectorXd y(static_cast<Eigen::Index>(f.rows.size()));
    for (std::size_t i = 0; i < f.rows.size(); ++i)
      y[static_cast<Eigen::Index>(i)] = dict_.target(f.rows[i])[d];
    if (y.size() > 0) {
      f.lower.triangularView<Eigen::Lower>().solveInPlace(y);
      f.lower.transpose().triangularView<Eigen::Upper>().solveInPlace(y);
    }
    alpha_[static_cast<std::size_t>(d)] = std::move(y);
  }
}

void GpModel::fit() { rebuild_groups(); }

Prediction GpModel::predict(const Eigen::VectorXd& x) const {
  check_query(x);
  Prediction out;
  out.mean = Eigen::VectorXd::Zero(output_dim());
  out.std = Eigen::VectorXd::Zero(output_dim());
  const double prior = kernel_.prior_variance();
  std::vector<Eigen::VectorXd> solved(factors_.size());
  std::vector<Eigen::VectorXd> columns(factors_.size());
  for (std::size_t g = 0; g < factors_.size(); ++g) {
    columns[g] = kernel_column(factors_[g], x);
    solved[g] = columns[g];
    if (solved[g].size() > 0) factors_[g].lower.triangularView<Eigen::Lower>().solveInPlace(solved[g]);
  }
  for (Eigen::Index d = 0; d < output_dim(); ++d) {
    const auto g = factor_of_[static_cast<std::size_t>(d)];
    const auto& alpha = alpha_[static_cast<std::size_t>(d)];
    out.mean[d] = alpha.size() > 0 ? columns[g].dot(alpha) : 0.0;
    const double var = prior - solved[g].squaredNorm();
    out.std[d] = std::sqrt(std::max(var, 0.0));
  }
  return out;
}

Eigen::VectorXd GpModel::predict_mean(const Eigen::VectorXd& x) const {
  check_query(x);
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(output_dim());
  std::vector<Eigen::VectorXd> columns(factors_.size());
  for (Eigen::Index d = 0; d < output_dim(); ++d) {
    const auto g = factor_of_[static_cast<std::size_t>(d)];
    const auto& alpha = alpha_[static_cast<std::size_t>(d)];
    if (alpha.size() == 0) continue;
    if (columns[g].size() == 0) columns[g] = kernel_column(factors_[g], x);
    mean[d] = columns[g].dot(alpha);
  }
  return mean;
}

void GpModel::append(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  append(x, y, full_mask(output_dim()));
}

void GpModel::append(const Eigen::VectorXd& x, const Eigen::VectorXd& y, TargetMask mask) {
  dict_.append(x, y, mask);
  const std::size_t row = dict_.size() - 1;

  // Split each factor's outputs into those labeled by the new row (extend)
  // and the rest (keep), then re-deduplicate.
  std::vector<Factor> next;
  std::vector<std::size_t> next_of(static_cast<std::size_t>(output_dim()));
  bool ok = true;
  for (std::size_t g = 0; g < factors_.size() && ok; ++g) {
    std::vector<Eigen::Index> extend, keep;
    for (Eigen::Index d = 0; d < output_dim(); ++d) {
      if (factor_of_[static_cast<std::size_t>(d)] != g) continue;
      ((mask >> d) & 1u ? extend : keep).push_back(d);
    }
    if (!keep.empty()) {
      next.push_back(factors_[g]);
      for (auto d : keep) next_of[static_cast<std::size_t>(d)] = next.size() - 1;
    }
    if (!extend.empty()) {
      Factor f = factors_[g];
      if (!try_extend(f, row)) {
        ok = false;
        break;
      }
      next.push_back(std::move(f));
      for (auto d : extend) next_of[static_cast<std::size_t>(d)] = next.size() - 1;
    }
  }
  if (!ok) {
    rebuild_groups();
    return;
  }
  factors_ = std::move(next);
  factor_of_ = std::move(next_of);
  refresh_alpha();
}

void GpModel::replace(std::size_t index, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  replace(index, x, y, full_mask(output_dim()));
}

void GpModel::replace(std::size_t index, const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                      TargetMask mask) {
  dict_.replace(index, x, y, mask);
  rebuild_groups();
}

void GpModel::erase_front() {
  dict_.erase_front();
  rebuild_groups();
}

std::size_t GpModel::max_covariance_index(const Eigen::VectorXd& x) const {
  check_query(x);
  if (dict_.empty()) throw UsageError("max_covariance_index on empty dictionary");
  std::size_t best = 0;
  double best_k = kernel_(dict_.input(0), x);
  for (std::size_t i = 1; i < dict_.size(); ++i) {
    const double k = kernel_(dict_.input(i), x);
    if (k > best_k) {
      best_k = k;
      best = i;
    }
  }
  return best;
}

const ScalingMatrix& GpModel::update_normalized_scaling() {
  if (scaling_.mode != ScalingMode::NormalizedOnline)
    throw UsageError("update_normalized_scaling requires NormalizedOnline mode");
  ScalingMatrix next = scaling_;
  next.values = dict_.input_stddev().cwiseMax(scaling_.floor);
  if (next.values != scaling_.values) set_scaling(std::move(next));
  return scaling_;
}

void GpModel::set_scaling(ScalingMatrix scaling) {
  kernel_ = Kernel(kernel_.spec(), scaling);
  scaling_ = std::move(scaling);
  rebuild_groups();
}

void GpModel::load_dictionary(Dictionary dict) {
  if (dict.input_dim() != input_dim() || dict.output_dim() != output_dim())
    throw UsageError("loaded dictionary dimensions do not match the model");
  dict_ = std::move(dict);
  rebuild_groups();
}

const Eigen::MatrixXd& GpModel::factor_for_output(Eigen::Index output) const {
  if (output < 0 || output >= output_dim()) throw UsageError("output index out of range");
  return factors_[factor_of_[static_cast<std::size_t>(output)]].lower;
}

}  // namespace gpc::gp
