// gpc: batch experiments, summaries and replay for the GPC / COACH learners.
//
// Exit codes: 0 success, 1 usage error, 2 numerical failure.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "gpc/errors.hpp"
#include "gpc/harness/config.hpp"
#include "gpc/harness/experiment.hpp"
#include "gpc/harness/grid.hpp"
#include "gpc/harness/runlog.hpp"
#include "gpc/harness/summary.hpp"
#include "gpc/io/format.hpp"

namespace fs = std::filesystem;
using namespace gpc;
using namespace gpc::harness;

namespace {

// "0..19", "3", "1,4,9" or a mix: "0..4,10".
std::string seeds_override(const std::string& text) {
  std::string list;
  for (const auto& part : io::split(text, ',')) {
    const auto dots = part.find("..");
    if (dots == std::string::npos) {
      list += (list.empty() ? "" : ",") + std::to_string(io::parse_int(part));
      continue;
    }
    const long long lo = io::parse_int(part.substr(0, dots));
    const long long hi = io::parse_int(part.substr(dots + 2));
    if (lo < 0 || hi < lo) throw UsageError("bad seed range '" + part + "'");
    for (long long s = lo; s <= hi; ++s) list += (list.empty() ? "" : ",") + std::to_string(s);
  }
  return "seeds=[" + list + "]";
}

struct Common {
  std::string config;
  std::vector<std::string> set;
  std::string seeds;
  int jobs = 1;
  bool timing = false;

  std::vector<std::string> overrides() const {
    auto o = set;
    if (!seeds.empty()) o.push_back(seeds_override(seeds));
    return o;
  }
};

void add_common(CLI::App* app, Common& c, bool with_config = true) {
  if (with_config) app->add_option("-c,--config", c.config, "experiment config (JSON)")->check(CLI::ExistingFile);
  app->add_option("-s,--set", c.set, "override, dotted.key=value (repeatable)");
  app->add_option("--seeds", c.seeds, "seed list, e.g. 0..19 or 1,2,5");
  app->add_option("-j,--jobs", c.jobs, "parallel seeds")->check(CLI::PositiveNumber);
  app->add_flag("--timing", c.timing, "record per-episode wall time");
}

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream os(path);
  if (!os) throw UsageError("cannot write " + path.string());
  return os;
}

void write_cell(const fs::path& dir, const std::string& id, const RunLog& log, int window) {
  auto os = open_out(dir / (id + ".runlog.tsv"));
  write_runlog(os, log);
  if (log.rows.empty()) return;
  auto ss = open_out(dir / (id + ".summary.tsv"));
  write_summary(ss, summarize(log.rows, window));
}

RunLog read_log_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw UsageError("cannot read " + path);
  return read_runlog(is);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"GPC experiment harness"};
  app.require_subcommand(1);

  Common run_opts;
  std::string run_out, step_dir, snap_dir;
  int window = 3;
  auto* run = app.add_subcommand("run", "run one experiment config over its seeds");
  add_common(run, run_opts);
  run->add_option("-o,--out", run_out, "output directory (runlog + summary); stdout runlog when absent");
  run->add_option("--steps", step_dir, "write per-seed step streams here");
  run->add_option("--snapshots", snap_dir, "write per-seed final model snapshots here");
  run->add_option("-w,--window", window, "walking-mean window for the summary")->check(CLI::PositiveNumber);

  Common grid_opts;
  std::string grid_out = "results", grid_steps, grid_snaps;
  auto* grid = app.add_subcommand("grid", "full suite: algorithm x environment x error rate, plus ablation cases i-iv");
  add_common(grid, grid_opts, false);
  grid->add_option("-o,--out", grid_out, "output directory");
  grid->add_option("--steps", grid_steps, "write step streams here (one subdirectory per cell)");
  grid->add_option("--snapshots", grid_snaps, "write final snapshots here (one subdirectory per cell)");
  grid->add_option("-w,--window", window, "walking-mean window for summaries")->check(CLI::PositiveNumber);
  bool ablation_only = false;
  grid->add_flag("--ablation-only", ablation_only, "run only the four ablation cases");

  std::vector<std::string> logs;
  std::string summary_out;
  auto* summarize_cmd = app.add_subcommand("summarize", "per-episode mean/std and walking means from run logs");
  summarize_cmd->add_option("logs", logs, "runlog files")->required()->check(CLI::ExistingFile);
  summarize_cmd->add_option("-o,--out", summary_out, "summary file; stdout when absent");
  summarize_cmd->add_option("-w,--window", window, "walking-mean window")->check(CLI::PositiveNumber);

  std::string stream_path, snapshot_out, compare_path;
  auto* replay = app.add_subcommand("replay", "rebuild models from a step stream");
  replay->add_option("stream", stream_path, "step stream file")->required()->check(CLI::ExistingFile);
  replay->add_option("-o,--out", snapshot_out, "write the rebuilt snapshot here");
  replay->add_option("--compare", compare_path, "snapshot to compare against; exit 1 on mismatch")
      ->check(CLI::ExistingFile);

  Common cfg_opts;
  auto* config = app.add_subcommand("config", "print the resolved config as JSON");
  add_common(config, cfg_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*run) {
      const auto cfg = load_config(run_opts.config, run_opts.overrides());
      RunOptions o{run_opts.jobs, run_opts.timing, step_dir, snap_dir};
      const auto result = run_experiment(cfg, o);
      if (run_out.empty()) {
        write_runlog(std::cout, result.log);
      } else {
        write_cell(run_out, cfg.run_id.empty() ? "run" : cfg.run_id, result.log, window);
        std::cerr << "wrote " << result.log.rows.size() << " rows to " << run_out << "\n";
      }
    } else if (*grid) {
      RunOptions o{grid_opts.jobs, grid_opts.timing, grid_steps, grid_snaps};
      auto done = [&](const GridCell& cell) {
        write_cell(grid_out, cell.run_id, cell.result.log, window);
        std::cerr << cell.run_id << ": " << cell.result.log.rows.size() << " rows\n";
      };
      if (ablation_only)
        run_ablation(ablation_base(grid_opts.overrides()), o, done);
      else
        run_grid(grid_opts.overrides(), o, done);
    } else if (*summarize_cmd) {
      std::vector<EpisodeRow> rows;
      for (const auto& path : logs) {
        auto log = read_log_file(path);
        rows.insert(rows.end(), log.rows.begin(), log.rows.end());
      }
      const auto summary = summarize(rows, window);
      if (summary_out.empty()) {
        write_summary(std::cout, summary);
      } else {
        auto os = open_out(summary_out);
        write_summary(os, summary);
      }
    } else if (*replay) {
      std::ifstream is(stream_path);
      if (!is) throw UsageError("cannot read " + stream_path);
      const auto r = replay_session(is);
      const std::string snap = r.learner->snapshot();
      std::cout << "steps " << r.steps << "\nfeedbacks " << r.feedbacks << "\npolicy_size "
                << r.learner->policy_size() << "\nhuman_size " << r.learner->human_size()
                << "\naction_mismatches " << r.action_mismatches << "\n";
      if (!snapshot_out.empty()) {
        auto os = open_out(snapshot_out);
        os << snap;
      }
      if (!compare_path.empty()) {
        std::ifstream cs(compare_path);
        const std::string expected{std::istreambuf_iterator<char>(cs), std::istreambuf_iterator<char>()};
        const bool same = expected == snap;
        std::cout << "snapshot " << (same ? "identical" : "DIFFERENT") << "\n";
        if (!same) return 1;
      }
    } else if (*config) {
      std::cout << to_json(load_config(cfg_opts.config, cfg_opts.overrides())).dump(2) << "\n";
    }
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << " (jitter " << e.jitter() << ")\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
