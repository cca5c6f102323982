#pragma once

#include <Eigen/Core>

#include <string>
#include <string_view>
#include <vector>

namespace gpc::io {

// Shortest text that parses back to the identical double.
std::string format_double(double value);
double parse_double(std::string_view text);
long long parse_int(std::string_view text);

std::vector<std::string> split(std::string_view text, char delimiter);

// Vector fields inside delimited rows use ';' between components.
std::string format_vector(const Eigen::VectorXd& v, char separator = ';');
Eigen::VectorXd parse_vector(std::string_view text, char separator = ';');

}  // namespace gpc::io
