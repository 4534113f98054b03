#include "ftc/batch.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#ifndef FTC_PRESET_DIR
#define FTC_PRESET_DIR "presets"
#endif

namespace ftc {

namespace fs = std::filesystem;

const char* status_name(RunStatus s)
{
  switch (s) {
    case RunStatus::Ok:
      return "ok";
    case RunStatus::ValidationFailed:
      return "invalid";
    case RunStatus::Diverged:
      return "diverged";
    case RunStatus::IoFailed:
      return "io-error";
  }
  return "?";
}

int exit_code(RunStatus s)
{
  switch (s) {
    case RunStatus::Ok:
      return 0;
    case RunStatus::ValidationFailed:
      return 2;
    case RunStatus::Diverged:
      return 3;
    case RunStatus::IoFailed:
      return 4;
  }
  return 1;
}

namespace {

bool write_text(const fs::path& path, const std::string& text)
{
  std::ofstream out(path, std::ios::binary);
  out << text;
  out.flush();
  return static_cast<bool>(out);
}

}  // namespace

RunOutcome run_to_directory(const Scenario& scenario, const fs::path& out_dir,
                            const std::string& source, const std::string& stem_in)
{
  RunOutcome res;
  res.label = source;
  res.scenario = scenario;
  const std::string stem = stem_in.empty() ? scenario.name : stem_in;

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec || !fs::is_directory(out_dir)) {
    res.status = RunStatus::IoFailed;
    res.message = "cannot create output directory " + out_dir.string();
    return res;
  }
  res.csv_path = out_dir / (stem + ".csv");
  res.summary_path = out_dir / (stem + ".summary.txt");

  std::ofstream csv(res.csv_path, std::ios::binary);
  if (!csv) {
    res.status = RunStatus::IoFailed;
    res.message = "cannot open " + res.csv_path.string();
    return res;
  }
  if (!write_text(out_dir / (stem + ".scenario.json"), scenario_to_json(scenario) + "\n")) {
    res.status = RunStatus::IoFailed;
    res.message = "cannot write resolved scenario to " + out_dir.string();
    return res;
  }

  CsvWriter writer(csv);
  writer.write_header();
  SummaryContext ctx;
  ctx.source = source;
  ctx.csv_file = res.csv_path.filename().string();

  RunSummary summary;
  double last_t = 0.0;
  try {
    summary = run_scenario(scenario, [&](const SimRow& row) {
      writer.write(row);
      last_t = row.t;
    });
  } catch (const DivergenceError& e) {
    writer.mark_truncated(e.time(), e.what());
    res.status = RunStatus::Diverged;
    res.message = e.what();
    ctx.status = "diverged";
    ctx.abort_reason = e.what();
    summary.name = scenario.name;
    summary.dt = scenario.sim.dt;
    summary.duration = e.time();
    summary.overrides = scenario.overrides;
  }
  (void)last_t;
  csv.flush();
  if (!csv) {
    res.status = RunStatus::IoFailed;
    res.message = "write error on " + res.csv_path.string();
    return res;
  }

  const bool ok_txt = write_text(res.summary_path, summary_text(summary, scenario, ctx));
  const bool ok_json =
      write_text(out_dir / (stem + ".summary.json"), summary_json(summary, scenario, ctx) + "\n");
  if (!ok_txt || !ok_json) {
    res.status = RunStatus::IoFailed;
    res.message = "cannot write summary under " + out_dir.string();
  }
  res.summary = std::move(summary);
  return res;
}

namespace {

RunOutcome load_failure(const std::string& arg, const ValidationReport& report)
{
  RunOutcome res;
  res.label = arg;
  res.status = report.io_failure() ? RunStatus::IoFailed : RunStatus::ValidationFailed;
  res.message = report.format();
  return res;
}

RunOutcome run_resolved(const std::string& arg, const fs::path& out_dir, const RunOptions& opts,
                        const std::string& stem)
{
  const auto path = resolve_scenario(arg);
  if (!path) {
    ValidationReport rep;
    rep.file = arg;
    rep.issues.push_back({ValidationIssue::Kind::Io, "", 0,
                          "no such scenario file or preset: " + arg});
    return load_failure(arg, rep);
  }
  LoadResult loaded = check_scenario_file(*path, opts.overrides);
  if (!loaded.report.ok()) {
    return load_failure(arg, loaded.report);
  }
  if (opts.decimation) {
    if (*opts.decimation < 1) {
      ValidationReport rep;
      rep.file = arg;
      rep.issues.push_back(
          {ValidationIssue::Kind::Range, "sim.decimation", 0, "--decimation must be >= 1"});
      return load_failure(arg, rep);
    }
    loaded.scenario.sim.decimation = *opts.decimation;
  }
  return run_to_directory(loaded.scenario, out_dir, arg,
                          stem.empty() ? loaded.scenario.name : stem);
}

}  // namespace

RunOutcome run_one(const std::string& arg, const fs::path& out_dir, const RunOptions& opts)
{
  return run_resolved(arg, out_dir, opts, opts.stem);
}

std::vector<RunOutcome> run_batch(const std::vector<std::string>& args, const fs::path& out_dir,
                                  const RunOptions& opts, int jobs)
{
  std::vector<RunOutcome> results(args.size());
  if (args.empty()) {
    return results;
  }

  // Stems are fixed up front so concurrent runs never share a file.
  std::vector<std::string> stems(args.size());
  std::map<std::string, int> seen;
  for (std::size_t k = 0; k < args.size(); ++k) {
    std::string base = fs::path(args[k]).stem().string();
    if (base.empty()) {
      base = "scenario";
    }
    const int n = ++seen[base];
    stems[k] = n == 1 ? base : base + "_" + std::to_string(n);
  }

  if (jobs <= 0) {
    jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  }
  jobs = std::min<int>(jobs, static_cast<int>(args.size()));

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < args.size(); k = next++) {
      try {
        results[k] = run_resolved(args[k], out_dir, opts, stems[k]);
      } catch (const std::exception& e) {
        results[k].label = args[k];
        results[k].status = RunStatus::ValidationFailed;
        results[k].message = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int i = 1; i < jobs; ++i) {
    pool.emplace_back(worker);
  }
  worker();
  for (auto& th : pool) {
    th.join();
  }
  return results;
}

std::string batch_table(const std::vector<RunOutcome>& outcomes)
{
  std::ostringstream o;
  char line[256];
  std::snprintf(line, sizeof line, "%-28s %-9s %5s %-12s %-10s %9s %8s\n", "scenario", "status",
                "det", "identified", "reconfig", "max|dW|", "wall_s");
  o << line;
  for (const RunOutcome& r : outcomes) {
    std::string ids = "-";
    std::string reconfig = "-";
    std::string det = "-";
    std::string werr = "-";
    std::string wall = "-";
    if (r.summary && r.status == RunStatus::Ok) {
      const RunSummary& s = *r.summary;
      det = std::to_string(s.detections.size());
      ids.clear();
      for (const auto& [t, i] : s.identifications) {
        ids += (ids.empty() ? "" : ",") + std::to_string(i);
      }
      if (ids.empty()) {
        ids = "none";
      }
      reconfig = s.faults.empty() ? "n/a" : (s.reconfiguration_failures ? "FAILED" : "ok");
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.3f", (s.final_w_hat - s.final_w).cwiseAbs().maxCoeff());
      werr = buf;
      std::snprintf(buf, sizeof buf, "%.2f", s.wall_seconds);
      wall = buf;
    }
    std::snprintf(line, sizeof line, "%-28s %-9s %5s %-12s %-10s %9s %8s\n", r.label.c_str(),
                  status_name(r.status), det.c_str(), ids.c_str(), reconfig.c_str(), werr.c_str(),
                  wall.c_str());
    o << line;
  }
  return o.str();
}

fs::path preset_dir()
{
  if (const char* env = std::getenv("FTC_PRESET_DIR"); env && *env) {
    return env;
  }
  return FTC_PRESET_DIR;
}

std::vector<PresetInfo> list_presets()
{
  std::vector<PresetInfo> out;
  std::error_code ec;
  const fs::path dir = preset_dir();
  if (!fs::is_directory(dir, ec)) {
    return out;
  }
  for (const auto& entry : fs::directory_iterator(dir, ec)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".json") {
      continue;
    }
    PresetInfo info;
    info.name = entry.path().stem().string();
    info.path = entry.path();
    std::ifstream in(entry.path());
    try {
      const auto j = nlohmann::json::parse(in);
      if (j.contains("description") && j["description"].is_string()) {
        info.description = j["description"].get<std::string>();
      }
    } catch (const std::exception&) {
      info.description = "(unreadable)";
    }
    out.push_back(std::move(info));
  }
  std::sort(out.begin(), out.end(),
            [](const PresetInfo& a, const PresetInfo& b) { return a.name < b.name; });
  return out;
}

std::optional<fs::path> resolve_scenario(const std::string& arg)
{
  std::error_code ec;
  if (fs::is_regular_file(arg, ec)) {
    return fs::path(arg);
  }
  static const std::map<std::string, std::string> aliases = {
      {"fig6_sequential_faults", "fig6_sequential"},
  };
  std::string name = arg;
  if (auto it = aliases.find(name); it != aliases.end()) {
    name = it->second;
  }
  const fs::path p = preset_dir() / (name + ".json");
  if (fs::is_regular_file(p, ec)) {
    return p;
  }
  return std::nullopt;
}

}  // namespace ftc
