#include "gpc/agent/learner.hpp"

#include <sstream>

namespace gpc::agent {

std::string Learner::snapshot() const {
  std::ostringstream os;
  write_snapshot(os);
  return os.str();
}

}  // namespace gpc::agent
