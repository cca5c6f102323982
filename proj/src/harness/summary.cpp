#include "gpc/harness/summary.hpp"

#include <cmath>
#include <map>
#include <ostream>
#include <tuple>

#include "gpc/errors.hpp"
#include "gpc/io/format.hpp"

namespace gpc::harness {

namespace {

Stat stat_of(const std::vector<double>& xs) {
  Stat s;
  s.count = static_cast<int>(xs.size());
  if (xs.empty()) return s;
  for (double x : xs) s.mean += x;
  s.mean /= s.count;
  if (s.count > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.std = std::sqrt(ss / (s.count - 1));
  }
  return s;
}

}  // namespace

std::vector<double> walking_mean(const std::vector<double>& xs, int window) {
  if (window < 1) throw UsageError("walking-mean window must be >= 1");
  std::vector<double> out(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const std::size_t lo = i + 1 >= static_cast<std::size_t>(window) ? i + 1 - window : 0;
    double sum = 0.0;
    for (std::size_t j = lo; j <= i; ++j) sum += xs[j];
    out[i] = sum / static_cast<double>(i - lo + 1);
  }
  return out;
}

std::vector<SummaryRow> summarize(const std::vector<EpisodeRow>& rows, int window) {
  if (rows.empty()) throw UsageError("cannot summarize an empty run log");
  using Key = std::tuple<std::string, std::string, double, std::string>;
  struct Cell {
    std::vector<double> ret, lr, fb;
  };
  std::map<Key, std::map<int, Cell>> groups;
  for (const auto& r : rows) {
    auto& cell = groups[{r.algorithm, r.environment, r.error_rate, r.ablation_case}][r.episode];
    cell.ret.push_back(r.episode_return);
    if (r.learning_rate_mean) cell.lr.push_back(*r.learning_rate_mean);
    cell.fb.push_back(r.steps > 0 ? static_cast<double>(r.feedback_count) / r.steps : 0.0);
  }
  std::vector<SummaryRow> out;
  for (const auto& [key, episodes] : groups) {
    std::vector<SummaryRow> block;
    for (const auto& [ep, cell] : episodes) {
      SummaryRow s;
      std::tie(s.algorithm, s.environment, s.error_rate, s.ablation_case) = key;
      s.episode = ep;
      s.episode_return = stat_of(cell.ret);
      s.learning_rate = stat_of(cell.lr);
      s.feedback_rate = stat_of(cell.fb);
      block.push_back(s);
    }
    std::vector<double> ret, lr, fb;
    for (const auto& s : block) {
      ret.push_back(s.episode_return.mean);
      lr.push_back(s.learning_rate.mean);
      fb.push_back(s.feedback_rate.mean);
    }
    const auto wr = walking_mean(ret, window), wl = walking_mean(lr, window),
               wf = walking_mean(fb, window);
    for (std::size_t i = 0; i < block.size(); ++i) {
      block[i].return_walk = wr[i];
      block[i].learning_rate_walk = wl[i];
      block[i].feedback_rate_walk = wf[i];
    }
    out.insert(out.end(), block.begin(), block.end());
  }
  return out;
}

void write_summary(std::ostream& os, const std::vector<SummaryRow>& rows) {
  using io::format_double;
  os << "#gpc-summary v1\n"
     << "algorithm\tenvironment\terror_rate\tablation_case\tepisode\tseeds\treturn_mean\treturn_std\t"
        "return_walk\tlearning_rate_mean\tlearning_rate_std\tlearning_rate_walk\tfeedback_rate_mean\t"
        "feedback_rate_std\tfeedback_rate_walk\n";
  for (const auto& s : rows) {
    os << s.algorithm << '\t' << s.environment << '\t' << format_double(s.error_rate) << '\t'
       << s.ablation_case << '\t' << s.episode << '\t' << s.episode_return.count << '\t'
       << format_double(s.episode_return.mean) << '\t' << format_double(s.episode_return.std) << '\t'
       << format_double(s.return_walk) << '\t' << format_double(s.learning_rate.mean) << '\t'
       << format_double(s.learning_rate.std) << '\t' << format_double(s.learning_rate_walk) << '\t'
       << format_double(s.feedback_rate.mean) << '\t' << format_double(s.feedback_rate.std) << '\t'
       << format_double(s.feedback_rate_walk) << '\n';
  }
}

}  // namespace gpc::harness
