#pragma once

#include <iosfwd>
#include <vector>

#include "gpc/env/environment.hpp"

namespace gpc::env {

// One row per step: step, observation, action, reward, done.
void write_trajectory(std::ostream& os, const std::vector<Transition>& steps);
std::vector<Transition> read_trajectory(std::istream& is);

}  // namespace gpc::env
