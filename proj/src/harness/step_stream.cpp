#include "gpc/harness/step_stream.hpp"

#include <istream>
#include <ostream>

#include "gpc/errors.hpp"
#include "gpc/io/format.hpp"

namespace gpc::harness {

namespace {

constexpr const char* kColumns =
    "episode\tstep\tstate\taction\tsigma_p\tfeedback\tlearning_rate\tcorrected_action\tdelta\t"
    "policy_size\thuman_size\tsource\treward\tdone";
constexpr std::size_t kFieldCount = 14;

std::string opt(const Eigen::VectorXd& v) { return v.size() == 0 ? "NA" : io::format_vector(v); }

Eigen::VectorXd parse_opt(const std::string& s) {
  return s == "NA" ? Eigen::VectorXd() : io::parse_vector(s);
}

}  // namespace

StepStreamWriter::StepStreamWriter(std::ostream& os, const Json& header) : os_(os) {
  os_ << "#gpc-steps v" << kStepStreamVersion << '\n' << '#' << header.dump() << '\n' << kColumns << '\n';
}

void StepStreamWriter::write(const StepRow& row) {
  const auto& r = row.record;
  os_ << row.episode << '\t' << r.step << '\t' << io::format_vector(r.state) << '\t'
      << io::format_vector(r.action) << '\t' << opt(r.sigma_p) << '\t'
      << (r.feedback ? io::format_vector(*r.feedback) : std::string("NA")) << '\t'
      << opt(r.learning_rate) << '\t' << opt(r.corrected_action) << '\t' << opt(r.delta) << '\t'
      << r.policy_size << '\t' << r.human_size << '\t' << row.source << '\t'
      << io::format_double(row.reward) << '\t' << (row.done ? 1 : 0) << '\n';
}

StepStream read_step_stream(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("#gpc-steps v", 0) != 0)
    throw UsageError("not a step stream (missing '#gpc-steps' line)");
  const auto version = io::parse_int(line.substr(12));
  if (version != kStepStreamVersion)
    throw UsageError("step stream schema v" + std::to_string(version) + " is not supported (expected v" +
                     std::to_string(kStepStreamVersion) + ")");
  StepStream out;
  if (!std::getline(is, line) || line.empty() || line[0] != '#')
    throw UsageError("step stream is missing its JSON header line");
  try {
    out.header = Json::parse(line.substr(1));
  } catch (const Json::exception& e) {
    throw UsageError(std::string("step stream header is not valid JSON: ") + e.what());
  }
  if (!std::getline(is, line) || line != kColumns) throw UsageError("unexpected step stream columns");
  std::size_t lineno = 3;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    const auto f = io::split(line, '\t');
    if (f.size() != kFieldCount)
      throw UsageError("step stream line " + std::to_string(lineno) + " has " +
                       std::to_string(f.size()) + " fields, expected " + std::to_string(kFieldCount));
    StepRow row;
    row.episode = static_cast<int>(io::parse_int(f[0]));
    auto& r = row.record;
    r.step = static_cast<std::uint64_t>(io::parse_int(f[1]));
    r.state = io::parse_vector(f[2]);
    r.action = io::parse_vector(f[3]);
    r.sigma_p = parse_opt(f[4]);
    if (f[5] != "NA") r.feedback = io::parse_vector(f[5]);
    r.learning_rate = parse_opt(f[6]);
    r.corrected_action = parse_opt(f[7]);
    r.delta = parse_opt(f[8]);
    r.policy_size = static_cast<std::size_t>(io::parse_int(f[9]));
    r.human_size = static_cast<std::size_t>(io::parse_int(f[10]));
    row.source = f[11];
    row.reward = io::parse_double(f[12]);
    row.done = f[13] == "1";
    out.rows.push_back(std::move(row));
  }
  return out;
}

}  // namespace gpc::harness
