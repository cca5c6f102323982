#pragma once

#include <Eigen/Core>
#include <json.hpp>

#include "gpc/gp/kernel.hpp"
#include "gpc/models/action_bounds.hpp"

namespace gpc::io {

using Json = nlohmann::json;

Json to_json(const Eigen::VectorXd& v);
Eigen::VectorXd vector_from_json(const Json& j);

Json to_json(const gp::KernelSpec& spec);
gp::KernelSpec kernel_from_json(const Json& j);

Json to_json(const gp::ScalingMatrix& scaling);
gp::ScalingMatrix scaling_from_json(const Json& j);

Json to_json(const models::ActionBounds& bounds);
models::ActionBounds bounds_from_json(const Json& j);

}  // namespace gpc::io
