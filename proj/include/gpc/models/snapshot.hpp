#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "gpc/gp/dictionary.hpp"
#include "gpc/gp/kernel.hpp"
#include "gpc/models/action_bounds.hpp"

namespace gpc::gp {
class GpModel;
}

namespace gpc::models {

class PolicyModel;
class HumanModel;

inline constexpr int kSnapshotVersion = 1;

// Plain-text model snapshot:
//   #gpc-snapshot v1
//   #{json header: role, kernel, scaling, dims, bounds, capacity}
//   <columnar dictionary rows>
struct Snapshot {
  std::string role;
  gp::KernelSpec kernel;
  gp::ScalingMatrix scaling;
  std::optional<ActionBounds> bounds;
  std::optional<std::size_t> capacity;
  gp::Dictionary dictionary;
};

Snapshot snapshot_of(const PolicyModel& policy);
Snapshot snapshot_of(const HumanModel& human);

void write_snapshot(std::ostream& os, const Snapshot& snap);
Snapshot read_snapshot(std::istream& is);

PolicyModel policy_from_snapshot(const Snapshot& snap);
HumanModel human_from_snapshot(const Snapshot& snap);

}  // namespace gpc::models
