// ftc_sim: run, batch-run and validate thruster fault scenarios.
//
//   ftc_sim run fig6_sequential --out out/ --override T_s=4
//   ftc_sim batch presets/single_fault_t*.json --out out/ -j 4
//   ftc_sim validate my_scenario.json
//   ftc_sim list-presets
//
// Exit codes: 0 ok, 2 validation, 3 divergence, 4 I/O.

#include "ftc/batch.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <iostream>

namespace fs = std::filesystem;

namespace {

constexpr int kExitValidation = 2;

/// Directories expand to their *.json files, sorted.
std::vector<std::string> expand_args(const std::vector<std::string>& in)
{
  std::vector<std::string> out;
  for (const auto& a : in) {
    std::error_code ec;
    if (fs::is_directory(a, ec)) {
      std::vector<std::string> files;
      for (const auto& e : fs::directory_iterator(a, ec)) {
        if (e.is_regular_file() && e.path().extension() == ".json") {
          files.push_back(e.path().string());
        }
      }
      std::sort(files.begin(), files.end());
      out.insert(out.end(), files.begin(), files.end());
    } else {
      out.push_back(a);
    }
  }
  return out;
}

int report_outcome(const ftc::RunOutcome& r)
{
  if (r.status == ftc::RunStatus::Ok) {
    std::cout << r.label << ": ok, wrote " << r.csv_path.string() << " and "
              << r.summary_path.string() << '\n';
  } else {
    std::cerr << r.label << ": " << ftc::status_name(r.status) << '\n' << r.message;
    if (!r.message.empty() && r.message.back() != '\n') {
      std::cerr << '\n';
    }
    if (r.status == ftc::RunStatus::Diverged && !r.csv_path.empty()) {
      std::cerr << "partial output kept in " << r.csv_path.string() << '\n';
    }
  }
  return ftc::exit_code(r.status);
}

}  // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Fault-tolerant thruster control simulator"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every command");

  std::string out_dir = "out";
  std::vector<std::string> overrides;
  int decimation = 0;
  int jobs = 0;

  auto add_run_flags = [&](CLI::App* cmd) {
    cmd->add_option("--out,-o", out_dir, "Output directory")->capture_default_str();
    cmd->add_option("--override", overrides, "Configuration override key=value (repeatable)")
        ->allow_extra_args(false);
    cmd->add_option("--decimation", decimation, "Write every N-th step to the CSV")
        ->check(CLI::PositiveNumber);
  };

  std::string run_arg;
  auto* run = app.add_subcommand("run", "Run one scenario file or preset");
  run->add_option("scenario", run_arg, "Scenario file or preset name")->required();
  add_run_flags(run);

  std::vector<std::string> batch_args;
  auto* batch = app.add_subcommand("batch", "Run several scenarios and print a summary table");
  batch->add_option("scenarios", batch_args, "Scenario files, preset names or directories");
  batch->add_option("--jobs,-j", jobs, "Concurrent runs (0 = hardware threads)");
  add_run_flags(batch);

  std::vector<std::string> validate_args;
  auto* validate = app.add_subcommand("validate", "Check scenario files without running them");
  validate->add_option("scenarios", validate_args, "Scenario files or preset names")->required();
  validate->add_option("--override", overrides, "Configuration override key=value (repeatable)")
      ->allow_extra_args(false);

  auto* list = app.add_subcommand("list-presets", "List shipped presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  ftc::RunOptions opts;
  opts.overrides = overrides;
  if (decimation > 0) {
    opts.decimation = decimation;
  }

  if (*run) {
    const ftc::RunOutcome r = ftc::run_one(run_arg, out_dir, opts);
    if (r.summary && r.status == ftc::RunStatus::Ok) {
      ftc::SummaryContext ctx;
      ctx.source = run_arg;
      ctx.csv_file = r.csv_path.filename().string();
      std::cout << ftc::summary_text(*r.summary, *r.scenario, ctx);
    }
    return report_outcome(r);
  }

  if (*batch) {
    const auto args = expand_args(batch_args);
    const auto results = ftc::run_batch(args, out_dir, opts, jobs);
    std::cout << ftc::batch_table(results);
    int code = 0;
    for (const auto& r : results) {
      if (r.status != ftc::RunStatus::Ok) {
        std::cerr << r.label << ": " << ftc::status_name(r.status) << '\n' << r.message;
      }
      code = std::max(code, ftc::exit_code(r.status));
    }
    return code;
  }

  if (*validate) {
    int code = 0;
    for (const auto& arg : expand_args(validate_args)) {
      const auto path = ftc::resolve_scenario(arg);
      if (!path) {
        std::cerr << arg << ": [io-error] no such scenario file or preset\n";
        code = std::max(code, 4);
        continue;
      }
      const ftc::LoadResult res = ftc::check_scenario_file(*path, overrides);
      if (res.report.ok()) {
        const double min_ts =
            ftc::FdiConfig::min_update_period(res.scenario.gains.lambda);
        std::cout << arg << ": valid";
        if (res.scenario.fdi.T_s < min_ts) {
          std::cout << " (note: T_s=" << res.scenario.fdi.T_s
                    << " s is below the documented minimum " << min_ts
                    << " s; reconfiguration may not settle)";
        }
        std::cout << '\n';
      } else {
        std::cerr << res.report.format();
        code = std::max(code, res.report.io_failure() ? 4 : kExitValidation);
      }
    }
    return code;
  }

  if (*list) {
    const auto presets = ftc::list_presets();
    if (presets.empty()) {
      std::cerr << "no presets found in " << ftc::preset_dir().string() << '\n';
      return 4;
    }
    std::size_t width = 0;
    for (const auto& p : presets) {
      width = std::max(width, p.name.size());
    }
    for (const auto& p : presets) {
      std::cout << p.name << std::string(width - p.name.size() + 2, ' ') << p.description << '\n';
    }
    return 0;
  }
  return 0;
}
