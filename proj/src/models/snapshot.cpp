#include "gpc/models/snapshot.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "gpc/errors.hpp"
#include "gpc/io/json.hpp"
#include "gpc/models/human_model.hpp"
#include "gpc/models/policy_model.hpp"

namespace gpc::models {

namespace {

constexpr const char* kMagic = "#gpc-snapshot v";

Snapshot snapshot_of_gp(const std::string& role, const gp::GpModel& gp) {
  return {role, gp.kernel_spec(), gp.scaling(), std::nullopt, gp.dictionary().capacity(),
          gp.dictionary()};
}

}  // namespace

Snapshot snapshot_of(const PolicyModel& policy) {
  auto snap = snapshot_of_gp("policy", policy.gp());
  snap.bounds = policy.bounds();
  return snap;
}

Snapshot snapshot_of(const HumanModel& human) {
  auto snap = snapshot_of_gp("human", human.gp());
  snap.capacity = human.capacity();
  return snap;
}

void write_snapshot(std::ostream& os, const Snapshot& snap) {
  io::Json header = {{"role", snap.role},
                     {"kernel", io::to_json(snap.kernel)},
                     {"scaling", io::to_json(snap.scaling)},
                     {"input_dim", snap.dictionary.input_dim()},
                     {"output_dim", snap.dictionary.output_dim()},
                     {"size", snap.dictionary.size()}};
  header["bounds"] = snap.bounds ? io::to_json(*snap.bounds) : io::Json(nullptr);
  header["capacity"] = snap.capacity ? io::Json(*snap.capacity) : io::Json(nullptr);
  os << kMagic << kSnapshotVersion << '\n';
  os << '#' << header.dump() << '\n';
  snap.dictionary.write_columnar(os);
}

Snapshot read_snapshot(std::istream& is) {
  std::string magic, header_line;
  if (!std::getline(is, magic) || magic.rfind(kMagic, 0) != 0)
    throw UsageError("not a model snapshot (missing '#gpc-snapshot' line)");
  const auto version = std::stoi(magic.substr(std::string(kMagic).size()));
  if (version != kSnapshotVersion)
    throw UsageError("snapshot version " + std::to_string(version) + " unsupported (expected " +
                     std::to_string(kSnapshotVersion) + ")");
  if (!std::getline(is, header_line) || header_line.empty() || header_line[0] != '#')
    throw UsageError("snapshot header missing");
  io::Json header;
  try {
    header = io::Json::parse(header_line.substr(1));
  } catch (const io::Json::exception& e) {
    throw UsageError(std::string("snapshot header is not valid JSON: ") + e.what());
  }
  Snapshot snap;
  snap.role = header.at("role").get<std::string>();
  snap.kernel = io::kernel_from_json(header.at("kernel"));
  snap.scaling = io::scaling_from_json(header.at("scaling"));
  if (!header.at("bounds").is_null()) snap.bounds = io::bounds_from_json(header.at("bounds"));
  if (!header.at("capacity").is_null()) snap.capacity = header.at("capacity").get<std::size_t>();
  const auto in = header.at("input_dim").get<Eigen::Index>();
  const auto out = header.at("output_dim").get<Eigen::Index>();
  snap.dictionary = gp::Dictionary::read_columnar(is, in, out);
  if (snap.dictionary.size() != header.at("size").get<std::size_t>())
    throw UsageError("snapshot row count does not match its header");
  return snap;
}

PolicyModel policy_from_snapshot(const Snapshot& snap) {
  if (snap.role != "policy" || !snap.bounds) throw UsageError("snapshot is not a policy snapshot");
  PolicyModel policy(snap.kernel, snap.scaling, *snap.bounds);
  policy.gp().load_dictionary(snap.dictionary);
  return policy;
}

HumanModel human_from_snapshot(const Snapshot& snap) {
  if (snap.role != "human") throw UsageError("snapshot is not a human-model snapshot");
  HumanModel human(snap.kernel, snap.scaling, snap.dictionary.output_dim(), snap.capacity);
  human.gp().load_dictionary(snap.dictionary);
  return human;
}

}  // namespace gpc::models
