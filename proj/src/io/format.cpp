#include "gpc/io/format.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>

#include "gpc/errors.hpp"

namespace gpc::io {

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
  if (text == "nan") return std::nan("");
  if (text == "inf") return HUGE_VAL;
  if (text == "-inf") return -HUGE_VAL;
  double value = 0.0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size())
    throw UsageError("cannot parse number '" + std::string(text) + "'");
  return value;
}

long long parse_int(std::string_view text) {
  long long value = 0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size())
    throw UsageError("cannot parse integer '" + std::string(text) + "'");
  return value;
}

std::vector<std::string> split(std::string_view text, char delimiter) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(delimiter, start);
    if (pos == std::string_view::npos) {
      out.emplace_back(text.substr(start));
      break;
    }
    out.emplace_back(text.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

std::string format_vector(const Eigen::VectorXd& v, char separator) {
  std::string out;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i > 0) out += separator;
    out += format_double(v[i]);
  }
  return out;
}

Eigen::VectorXd parse_vector(std::string_view text, char separator) {
  if (text.empty()) return Eigen::VectorXd();
  const auto parts = split(text, separator);
  Eigen::VectorXd v(static_cast<Eigen::Index>(parts.size()));
  for (std::size_t i = 0; i < parts.size(); ++i) v[static_cast<Eigen::Index>(i)] = parse_double(parts[i]);
  return v;
}

}  // namespace gpc::io
