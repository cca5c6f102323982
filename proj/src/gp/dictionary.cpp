#include "gpc/gp/dictionary.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "gpc/errors.hpp"
#include "gpc/io/format.hpp"

namespace gpc::gp {

TargetMask full_mask(Eigen::Index output_dim) {
  if (output_dim >= 32) return ~TargetMask{0};
  return (TargetMask{1} << output_dim) - 1u;
}

Dictionary::Dictionary(Eigen::Index input_dim, Eigen::Index output_dim,
                       std::optional<std::size_t> capacity)
    : input_dim_(input_dim), output_dim_(output_dim), capacity_(capacity) {
  if (input_dim <= 0 || output_dim <= 0 || output_dim > 32)
    throw UsageError("dictionary dimensions must be positive (outputs <= 32)");
  if (capacity && *capacity == 0) throw UsageError("dictionary capacity must be positive");
}

std::vector<std::size_t> Dictionary::rows_for_output(Eigen::Index output) const {
  std::vector<std::size_t> rows;
  rows.reserve(size());
  for (std::size_t i = 0; i < size(); ++i)
    if (has_target(i, output)) rows.push_back(i);
  return rows;
}

void Dictionary::check_pair(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                            TargetMask mask) const {
  if (x.size() != input_dim_)
    throw UsageError("input dimension " + std::to_string(x.size()) + " != " +
                     std::to_string(input_dim_));
  if (y.size() != output_dim_)
    throw UsageError("target dimension " + std::to_string(y.size()) + " != " +
                     std::to_string(output_dim_));
  if (!x.allFinite()) throw UsageError("non-finite dictionary input");
  for (Eigen::Index d = 0; d < output_dim_; ++d)
    if (((mask >> d) & 1u) && !std::isfinite(y[d]))
      throw UsageError("non-finite dictionary target");
  if ((mask & ~full_mask(output_dim_)) != 0) throw UsageError("target mask out of range");
}

void Dictionary::append(const Eigen::VectorXd& x, const Eigen::VectorXd& y, TargetMask mask) {
  check_pair(x, y, mask);
  if (capacity_ && size() >= *capacity_)
    throw CapacityError("dictionary at capacity " + std::to_string(*capacity_) +
                        "; evict (replace or FIFO erase_front) before appending");
  inputs_.push_back(x);
  targets_.push_back(y);
  masks_.push_back(mask);
}

void Dictionary::replace(std::size_t index, const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                         TargetMask mask) {
  if (index >= size())
    throw UsageError("dictionary handle " + std::to_string(index) + " out of range (size " +
                     std::to_string(size()) + ")");
  check_pair(x, y, mask);
  inputs_[index] = x;
  targets_[index] = y;
  masks_[index] = mask;
}

void Dictionary::erase_front() {
  if (empty()) throw UsageError("erase_front on empty dictionary");
  inputs_.erase(inputs_.begin());
  targets_.erase(targets_.begin());
  masks_.erase(masks_.begin());
}

Eigen::VectorXd Dictionary::input_stddev() const {
  Eigen::VectorXd sd = Eigen::VectorXd::Zero(input_dim_);
  if (size() < 2) return sd;
  const double n = static_cast<double>(size());
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(input_dim_);
  for (const auto& x : inputs_) mean += x;
  mean /= n;
  for (const auto& x : inputs_) sd += (x - mean).cwiseAbs2();
  return (sd / n).cwiseSqrt();
}

void Dictionary::write_columnar(std::ostream& os, char delimiter) const {
  for (std::size_t i = 0; i < size(); ++i) {
    for (Eigen::Index d = 0; d < input_dim_; ++d) {
      if (d > 0) os << delimiter;
      os << io::format_double(inputs_[i][d]);
    }
    for (Eigen::Index d = 0; d < output_dim_; ++d) {
      os << delimiter;
      if (has_target(i, d))
        os << io::format_double(targets_[i][d]);
      else
        os << "NA";
    }
    os << '\n';
  }
}

Dictionary Dictionary::read_columnar(std::istream& is, Eigen::Index input_dim,
                                     Eigen::Index output_dim, char delimiter) {
  Dictionary dict(input_dim, output_dim);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    const auto fields = io::split(line, delimiter);
    if (static_cast<Eigen::Index>(fields.size()) != input_dim + output_dim)
      throw UsageError("columnar row " + std::to_string(line_no) + ": expected " +
                       std::to_string(input_dim + output_dim) + " fields, got " +
                       std::to_string(fields.size()));
    Eigen::VectorXd x(input_dim);
    Eigen::VectorXd y = Eigen::VectorXd::Zero(output_dim);
    TargetMask mask = 0;
    for (Eigen::Index d = 0; d < input_dim; ++d) x[d] = io::parse_double(fields[d]);
    for (Eigen::Index d = 0; d < output_dim; ++d) {
      const auto& f = fields[input_dim + d];
      if (f == "NA") continue;
      y[d] = io::parse_double(f);
      mask |= TargetMask{1} << d;
    }
    dict.append(x, y, mask);
  }
  return dict;
}

bool Dictionary::operator==(const Dictionary& other) const {
  if (input_dim_ != other.input_dim_ || output_dim_ != other.output_dim_ ||
      size() != other.size())
    return false;
  for (std::size_t i = 0; i < size(); ++i) {
    if (masks_[i] != other.masks_[i]) return false;
    if (inputs_[i] != other.inputs_[i]) return false;
    for (Eigen::Index d = 0; d < output_dim_; ++d)
      if (has_target(i, d) && targets_[i][d] != other.targets_[i][d]) return false;
  }
  return true;
}

}  // namespace gpc::gp
