#include "gpc/env/trajectory.hpp"

#include <istream>
#include <ostream>
#include <string>

#include "gpc/errors.hpp"
#include "gpc/io/format.hpp"

namespace gpc::env {

namespace {
constexpr const char* kMagic = "#gpc-trajectory v1";
constexpr const char* kColumns = "step\tobservation\taction\treward\tdone";
}  // namespace

void write_trajectory(std::ostream& os, const std::vector<Transition>& steps) {
  os << kMagic << '\n' << kColumns << '\n';
  for (const auto& t : steps) {
    os << t.step << '\t' << io::format_vector(t.observation) << '\t' << io::format_vector(t.action)
       << '\t' << io::format_double(t.reward) << '\t' << (t.done ? 1 : 0) << '\n';
  }
}

std::vector<Transition> read_trajectory(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kMagic)
    throw UsageError("not a trajectory dump (missing '" + std::string(kMagic) + "')");
  if (!std::getline(is, line) || line != kColumns) throw UsageError("unexpected trajectory columns");
  std::vector<Transition> out;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto f = io::split(line, '\t');
    if (f.size() != 5) throw UsageError("trajectory row has " + std::to_string(f.size()) + " fields");
    Transition t;
    t.step = static_cast<std::uint64_t>(io::parse_int(f[0]));
    t.observation = io::parse_vector(f[1]);
    t.action = io::parse_vector(f[2]);
    t.reward = io::parse_double(f[3]);
    t.done = f[4] == "1";
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace gpc::env
