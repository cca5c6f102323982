#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

namespace gpc::gp {

// Per-output presence bits of a stored target (bit d set => output d has a
// label). Outputs are limited to 32.
using TargetMask = std::uint32_t;

TargetMask full_mask(Eigen::Index output_dim);

// Ordered (input, target) pairs shared by the output GPs of one model.
// Indices stay valid until the next replace/erase_front.
class Dictionary {
 public:
  Dictionary() = default;
  Dictionary(Eigen::Index input_dim, Eigen::Index output_dim,
             std::optional<std::size_t> capacity = std::nullopt);

  std::size_t size() const { return inputs_.size(); }
  bool empty() const { return inputs_.empty(); }
  Eigen::Index input_dim() const { return input_dim_; }
  Eigen::Index output_dim() const { return output_dim_; }
  std::optional<std::size_t> capacity() const { return capacity_; }

  const Eigen::VectorXd& input(std::size_t i) const { return inputs_[i]; }
  const Eigen::VectorXd& target(std::size_t i) const { return targets_[i]; }
  TargetMask mask(std::size_t i) const { return masks_[i]; }
  bool has_target(std::size_t i, Eigen::Index output) const {
    return (masks_[i] >> output) & 1u;
  }

  // Row indices that carry a label for `output`, in dictionary order.
  std::vector<std::size_t> rows_for_output(Eigen::Index output) const;

  // Throws CapacityError when full; callers choose eviction explicitly.
  void append(const Eigen::VectorXd& x, const Eigen::VectorXd& y, TargetMask mask);
  void replace(std::size_t index, const Eigen::VectorXd& x, const Eigen::VectorXd& y,
               TargetMask mask);
  void erase_front();

  // Population standard deviation of the inputs along every dimension.
  Eigen::VectorXd input_stddev() const;

  // Columnar text: one row per pair, input fields then target fields,
  // absent targets written as NA. Doubles use round-trip precision.
  void write_columnar(std::ostream& os, char delimiter = '\t') const;
  static Dictionary read_columnar(std::istream& is, Eigen::Index input_dim,
                                  Eigen::Index output_dim, char delimiter = '\t');

  bool operator==(const Dictionary& other) const;

 private:
  void check_pair(const Eigen::VectorXd& x, const Eigen::VectorXd& y, TargetMask mask) const;

  Eigen::Index input_dim_ = 0;
  Eigen::Index output_dim_ = 0;
  std::optional<std::size_t> capacity_;
  std::vector<Eigen::VectorXd> inputs_;
  std::vector<Eigen::VectorXd> targets_;
  std::vector<TargetMask> masks_;
};

}  // namespace gpc::gp
