#include "gpc/harness/runlog.hpp"

#include <istream>
#include <ostream>

#include "gpc/errors.hpp"
#include "gpc/io/format.hpp"

namespace gpc::harness {

namespace {

constexpr const char* kColumns =
    "run_id\talgorithm\tenvironment\terror_rate\tablation_case\tseed\tepisode\treturn\tsteps\t"
    "feedback_count\teligible_steps\temission_rate\tlearning_rate_mean\tpolicy_size\thuman_size\t"
    "wall_time";
constexpr std::size_t kFieldCount = 16;

std::string opt(const std::optional<double>& v) { return v ? io::format_double(*v) : "NA"; }
std::optional<double> parse_opt(const std::string& s) {
  if (s == "NA") return std::nullopt;
  return io::parse_double(s);
}

}  // namespace

void write_runlog(std::ostream& os, const RunLog& log) {
  os << "#gpc-runlog v" << kRunLogVersion << '\n' << '#' << log.config.dump() << '\n' << kColumns << '\n';
  for (const auto& r : log.rows) {
    os << (r.run_id.empty() ? "-" : r.run_id) << '\t' << r.algorithm << '\t' << r.environment << '\t'
       << io::format_double(r.error_rate) << '\t' << r.ablation_case << '\t' << r.seed << '\t'
       << r.episode << '\t' << io::format_double(r.episode_return) << '\t' << r.steps << '\t'
       << r.feedback_count << '\t' << r.eligible_steps << '\t' << opt(r.emission_rate) << '\t'
       << opt(r.learning_rate_mean) << '\t' << r.policy_size << '\t' << r.human_size << '\t'
       << opt(r.wall_time) << '\n';
  }
}

RunLog read_runlog(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("#gpc-runlog v", 0) != 0)
    throw UsageError("not a run log (missing '#gpc-runlog' line)");
  const auto version = io::parse_int(line.substr(13));
  if (version != kRunLogVersion)
    throw UsageError("run log schema v" + std::to_string(version) + " is not supported");
  RunLog log;
  if (!std::getline(is, line) || line.empty() || line[0] != '#')
    throw UsageError("run log is missing its JSON header line");
  try {
    log.config = Json::parse(line.substr(1));
  } catch (const Json::exception& e) {
    throw UsageError(std::string("run log header is not valid JSON: ") + e.what());
  }
  if (!std::getline(is, line) || line != kColumns) throw UsageError("unexpected run log columns");
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto f = io::split(line, '\t');
    if (f.size() != kFieldCount)
      throw UsageError("run log row has " + std::to_string(f.size()) + " fields");
    EpisodeRow r;
    r.run_id = f[0] == "-" ? "" : f[0];
    r.algorithm = f[1];
    r.environment = f[2];
    r.error_rate = io::parse_double(f[3]);
    r.ablation_case = f[4];
    r.seed = static_cast<std::uint64_t>(io::parse_int(f[5]));
    r.episode = static_cast<int>(io::parse_int(f[6]));
    r.episode_return = io::parse_double(f[7]);
    r.steps = static_cast<int>(io::parse_int(f[8]));
    r.feedback_count = static_cast<int>(io::parse_int(f[9]));
    r.eligible_steps = static_cast<int>(io::parse_int(f[10]));
    r.emission_rate = parse_opt(f[11]);
    r.learning_rate_mean = parse_opt(f[12]);
    r.policy_size = static_cast<std::size_t>(io::parse_int(f[13]));
    r.human_size = static_cast<std::size_t>(io::parse_int(f[14]));
    r.wall_time = parse_opt(f[15]);
    log.rows.push_back(std::move(r));
  }
  return log;
}

}  // namespace gpc::harness
