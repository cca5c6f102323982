#include "gpc/io/json.hpp"

#include "gpc/errors.hpp"

namespace gpc::io {

Json to_json(const Eigen::VectorXd& v) {
  Json arr = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

Eigen::VectorXd vector_from_json(const Json& j) {
  if (!j.is_array()) throw UsageError("expected a numeric array, got " + j.dump());
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw UsageError("expected a number, got " + j[i].dump());
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return v;
}

Json to_json(const gp::KernelSpec& spec) {
  Json j = {{"kind", gp::to_string(spec.kind)},
            {"signal_variance", spec.signal_variance},
            {"length_scales", to_json(spec.length_scales)},
            {"noise_std", spec.noise_std}};
  if (spec.kind == gp::KernelKind::Matern) j["smoothness"] = spec.smoothness;
  return j;
}

gp::KernelSpec kernel_from_json(const Json& j) {
  try {
    gp::KernelSpec spec;
    spec.kind = gp::kernel_kind_from_string(j.at("kind").get<std::string>());
    spec.signal_variance = j.at("signal_variance").get<double>();
    spec.length_scales = vector_from_json(j.at("length_scales"));
    spec.noise_std = j.at("noise_std").get<double>();
    if (spec.kind == gp::KernelKind::Matern) spec.smoothness = j.at("smoothness").get<double>();
    spec.validate();
    return spec;
  } catch (const Json::exception& e) {
    throw UsageError(std::string("malformed kernel spec: ") + e.what());
  }
}

Json to_json(const gp::ScalingMatrix& scaling) {
  return {{"mode", gp::to_string(scaling.mode)},
          {"values", to_json(scaling.values)},
          {"floor", scaling.floor}};
}

gp::ScalingMatrix scaling_from_json(const Json& j) {
  try {
    gp::ScalingMatrix s;
    s.mode = gp::scaling_mode_from_string(j.at("mode").get<std::string>());
    s.values = vector_from_json(j.at("values"));
    s.floor = j.at("floor").get<double>();
    s.validate();
    return s;
  } catch (const Json::exception& e) {
    throw UsageError(std::string("malformed scaling: ") + e.what());
  }
}

Json to_json(const models::ActionBounds& bounds) {
  return {{"lower", to_json(bounds.lower)}, {"upper", to_json(bounds.upper)}};
}

models::ActionBounds bounds_from_json(const Json& j) {
  try {
    models::ActionBounds b{vector_from_json(j.at("lower")), vector_from_json(j.at("upper"))};
    b.validate();
    return b;
  } catch (const Json::exception& e) {
    throw UsageError(std::string("malformed action bounds: ") + e.what());
  }
}

}  // namespace gpc::io
