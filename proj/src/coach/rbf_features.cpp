#include "gpc/coach/rbf_features.hpp"

#include <cmath>
#include <sstream>

#include "gpc/errors.hpp"

namespace gpc::coach {

namespace {
constexpr Eigen::Index kLargeGrid = 4096;
}

Eigen::Index RbfFeatureSpace::feature_count() const {
  Eigen::Index n = 1;
  for (int c : counts) n *= c;
  return n;
}

Eigen::VectorXd RbfFeatureSpace::widths() const {
  Eigen::VectorXd w(input_dim());
  for (Eigen::Index d = 0; d < input_dim(); ++d) {
    const int c = counts[static_cast<std::size_t>(d)];
    w[d] = c > 1 ? (upper[d] - lower[d]) / (c - 1) : (upper[d] - lower[d]);
    if (w[d] <= 0.0) w[d] = 1.0;
  }
  return w;
}

Eigen::VectorXd RbfFeatureSpace::centers(Eigen::Index dim) const {
  const int c = counts[static_cast<std::size_t>(dim)];
  if (c == 1) return Eigen::VectorXd::Constant(1, 0.5 * (lower[dim] + upper[dim]));
  return Eigen::VectorXd::LinSpaced(c, lower[dim], upper[dim]);
}

void RbfFeatureSpace::validate() const {
  if (input_dim() == 0) throw UsageError("RBF feature space needs at least one dimension");
  if (upper.size() != input_dim() || static_cast<Eigen::Index>(counts.size()) != input_dim())
    throw UsageError("RBF bounds and counts must have one entry per input dimension");
  for (Eigen::Index d = 0; d < input_dim(); ++d) {
    if (!std::isfinite(lower[d]) || !std::isfinite(upper[d]) || lower[d] > upper[d])
      throw UsageError("RBF bounds must be finite with lower <= upper");
    if (counts[static_cast<std::size_t>(d)] < 1) throw UsageError("RBF center counts must be >= 1");
  }
}

std::vector<std::string> RbfFeatureSpace::warnings() const {
  std::vector<std::string> out;
  if (feature_count() > kLargeGrid) {
    std::ostringstream os;
    os << "RBF grid has " << feature_count() << " features over " << input_dim()
       << " dimensions; hand-tuned grids of this size are unlikely to learn";
    out.push_back(os.str());
  }
  return out;
}

Eigen::VectorXd rbf_features(const RbfFeatureSpace& space, const Eigen::VectorXd& s) {
  if (s.size() != space.input_dim()) throw UsageError("state dimension does not match RBF space");
  if (!s.allFinite()) throw UsageError("non-finite state passed to RBF features");
  const Eigen::VectorXd w = space.widths();

  // Per-dimension log activations; the grid activation is their sum.
  std::vector<Eigen::VectorXd> logs;
  for (Eigen::Index d = 0; d < space.input_dim(); ++d) {
    const Eigen::VectorXd c = space.centers(d);
    logs.push_back((-0.5 * ((c.array() - s[d]) / w[d]).square()).matrix());
  }
  const Eigen::Index n = space.feature_count();
  Eigen::VectorXd phi(n);
  std::vector<Eigen::Index> idx(logs.size(), 0);
  for (Eigen::Index j = 0; j < n; ++j) {
    double acc = 0.0;
    for (std::size_t d = 0; d < logs.size(); ++d) acc += logs[d][idx[d]];
    phi[j] = acc;
    // Last dimension varies fastest.
    for (std::size_t d = logs.size(); d-- > 0;) {
      if (++idx[d] < logs[d].size()) break;
      idx[d] = 0;
    }
  }
  phi = (phi.array() - phi.maxCoeff()).exp();
  return phi / phi.sum();
}

}  // namespace gpc::coach
