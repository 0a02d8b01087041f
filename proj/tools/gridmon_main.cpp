// Command-line front end: config validation, experiment execution, artifact
// export, and parameter sweeps.

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gridmon/artifacts.hpp"
#include "gridmon/config.hpp"
#include "gridmon/executor.hpp"

namespace fs = std::filesystem;
using namespace gridmon;

namespace {

void print_conditions(const TheoremConditions& c) {
  std::printf("conditions: delta_c=%s lhs=%s satisfied=%s spec_ok=%s\n",
              format_double(c.delta_c).c_str(), format_double(c.lhs).c_str(),
              c.satisfied ? "yes" : "no", c.spec_ok ? "yes" : "no");
  std::printf("  c_max=%s c_sum=%s N=%u M=%u diameter=%u\n",
              format_double(c.c_max).c_str(), format_double(c.c_sum).c_str(),
              c.n_agents, c.n_zones, c.diameter);
}

int cmd_check(const std::string& config_path) {
  const ParsedConfig parsed = load_config(config_path);
  const TheoremConditions c = check_conditions(parsed.run);
  std::printf("config ok: %s\n", config_path.c_str());
  std::printf("grid %dx%d, %u zones, %u agents, %zu edges\n", parsed.run.grid.width,
              parsed.run.grid.height, parsed.run.n_zones(), parsed.run.n_agents(),
              parsed.run.topology.edges().size());
  std::printf("dual: eta=%s t_zero=%llu d=%llu rollouts=%llu\n",
              format_double(parsed.run.eta).c_str(),
              static_cast<unsigned long long>(parsed.run.t_zero),
              static_cast<unsigned long long>(parsed.run.retention),
              static_cast<unsigned long long>(parsed.run.rollouts));
  print_conditions(c);
  if (!c.satisfied)
    std::printf("note: the step-size condition is sufficient, not necessary; "
                "the run will proceed with a warning\n");
  return 0;
}

void write_run_artifacts(const fs::path& dir, const ParsedConfig& parsed,
                         const RunResult& result, double tolerance) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError(dir.string() + ": cannot create output directory");
  const std::uint32_t m = parsed.run.n_zones();
  write_trajectory_csv((dir / "trajectory.csv").string(), result, m);
  write_multipliers_csv((dir / "multipliers.csv").string(), result);
  write_zone_averages_csv((dir / "zone_averages.csv").string(), result, m);
  write_lambda_csv((dir / "lambda.csv").string(), result, m);
  write_mismatch_csv((dir / "mismatch.csv").string(), result);
  if (parsed.run.trace_messages)
    write_messages_log((dir / "messages.log").string(), result);
  const FeasibilityReport feas = feasibility_report(result.diagnostics, tolerance);
  const DriftReport drift = drift_report(result.diagnostics);
  write_text((dir / "summary.json").string(),
             summary_json(result, feas, drift).dump(2) + "\n");
  write_text((dir / "config_echo.json").string(), config_to_json(parsed).dump(2) + "\n");
}

void print_run_summary(const ParsedConfig& parsed, const RunResult& result,
                       double tolerance) {
  const Diagnostics& diag = result.diagnostics;
  std::printf("run: N=%u M=%u T0=%llu K=%llu seed=%llu\n", parsed.run.n_agents(),
              parsed.run.n_zones(), static_cast<unsigned long long>(parsed.run.t_zero),
              static_cast<unsigned long long>(parsed.run.rollouts),
              static_cast<unsigned long long>(parsed.run.seed));
  print_conditions(diag.conditions);
  const FeasibilityReport feas = feasibility_report(diag, tolerance);
  for (const ZoneFeasibility& z : feas.zones)
    std::printf("zone %u: avg=%s min_window=%s c=%s %s\n", z.zone_id,
                format_double(z.terminal_average).c_str(),
                format_double(z.min_trailing_average).c_str(),
                format_double(z.threshold).c_str(), z.pass ? "PASS" : "FAIL");
  std::printf("feasibility: %s (tolerance %s)\n", feas.all_pass ? "ALL PASS" : "FAIL",
              format_double(tolerance).c_str());
  std::printf("mismatch: max=%s bound=%s\n", format_double(diag.mismatch_max).c_str(),
              format_double(diag.mismatch_bound).c_str());
  std::printf("consensus_violations=%llu deadline_violations=%llu\n",
              static_cast<unsigned long long>(diag.consensus_violations),
              static_cast<unsigned long long>(diag.deadline_violations));
  const DriftReport drift = drift_report(diag);
  if (!drift.sufficient)
    std::printf("drift: insufficient samples (n=%zu < 30)\n", drift.n_samples);
  else
    std::printf("drift: mean=%s ci=[%s, %s] n=%zu %s\n", format_double(drift.mean).c_str(),
                format_double(drift.ci_lo).c_str(), format_double(drift.ci_hi).c_str(),
                drift.n_samples,
                drift.consistent_with_supermartingale ? "(<= 0 within CI)"
                                                      : "(positive drift)");
}

int cmd_run(const std::string& config_path, const std::string& out_dir,
            bool trace_messages, double tolerance) {
  ParsedConfig parsed = load_config(config_path);
  parsed.run.trace_messages = trace_messages;
  const fs::path dir = out_dir.empty()
                           ? fs::path(parsed.output_dir.empty() ? "gridmon_out"
                                                                : parsed.output_dir)
                           : fs::path(out_dir);
  const RunResult result = run(parsed.run);
  write_run_artifacts(dir, parsed, result, tolerance);
  print_run_summary(parsed, result, tolerance);
  std::printf("artifacts: %s\n", dir.string().c_str());
  return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& param,
              const std::vector<double>& values, const std::string& out_dir,
              double tolerance) {
  if (values.empty()) throw ConfigError("sweep: need at least one value");
  const ParsedConfig base = load_config(config_path);
  const fs::path dir(out_dir.empty() ? "gridmon_sweep" : out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError(dir.string() + ": cannot create output directory");

  const std::uint32_t m = base.run.n_zones();
  std::string header = "param,value,child_seed";
  for (std::uint32_t z = 1; z <= m; ++z) header += ",gap_" + std::to_string(z);
  header += ",mismatch_max,mismatch_bound,deadline_violations";
  std::string csv = header + "\n";

  std::printf("%s\n", header.c_str());
  for (double value : values) {
    ParsedConfig parsed = base;
    apply_sweep_value(parsed, param, value);
    const RunResult result = run(parsed.run);
    const FeasibilityReport feas = feasibility_report(result.diagnostics, tolerance);
    const DriftReport drift = drift_report(result.diagnostics);

    const fs::path subdir = dir / (param + "=" + format_double(value));
    fs::create_directories(subdir, ec);
    if (ec) throw ConfigError(subdir.string() + ": cannot create output directory");
    write_text((subdir / "summary.json").string(),
               summary_json(result, feas, drift).dump(2) + "\n");
    write_text((subdir / "config_echo.json").string(),
               config_to_json(parsed).dump(2) + "\n");

    std::string row = param + "," + format_double(value) + "," +
                      std::to_string(parsed.run.seed);
    for (const ZoneFeasibility& z : feas.zones) row += "," + format_double(z.gap);
    row += "," + format_double(result.diagnostics.mismatch_max);
    row += "," + format_double(result.diagnostics.mismatch_bound);
    row += "," + std::to_string(result.diagnostics.deadline_violations);
    csv += row + "\n";
    std::printf("%s\n", row.c_str());
  }
  write_text((dir / "sweep_summary.csv").string(), csv);
  std::printf("artifacts: %s\n", dir.string().c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-agent zone monitoring with gossiped dual multipliers"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  bool trace_messages = false;
  double tolerance = 0.02;
  std::string param;
  std::vector<double> values;

  CLI::App* check = app.add_subcommand("check", "Validate a config and print the "
                                                "feasibility condition report");
  check->add_option("config", config_path, "Config file (JSON)")->required();

  CLI::App* run_cmd = app.add_subcommand("run", "Execute a run and export artifacts");
  run_cmd->add_option("config", config_path, "Config file (JSON)")->required();
  run_cmd->add_option("--out", out_dir, "Output directory");
  run_cmd->add_flag("--trace-messages", trace_messages,
                    "Log every gossip message in the canonical byte format");
  run_cmd->add_option("--tolerance", tolerance, "Feasibility tolerance (default 0.02)");

  CLI::App* sweep = app.add_subcommand("sweep", "Run once per value of a numeric key");
  sweep->add_option("config", config_path, "Config file (JSON)")->required();
  sweep->add_option("--param", param, "Key to sweep: eta|t_zero|p_up")->required();
  sweep->add_option("--values", values, "Comma-separated values")
      ->required()
      ->delimiter(',');
  sweep->add_option("--out", out_dir, "Output directory");
  sweep->add_option("--tolerance", tolerance, "Feasibility tolerance (default 0.02)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);  // prints help/usage or the parse error
    return rc == 0 ? 0 : 2;
  }

  try {
    if (check->parsed()) return cmd_check(config_path);
    if (run_cmd->parsed()) return cmd_run(config_path, out_dir, trace_messages, tolerance);
    if (sweep->parsed()) return cmd_sweep(config_path, param, values, out_dir, tolerance);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const DecodeError& e) {
    std::fprintf(stderr, "decode error: %s\n", e.what());
    return 2;
  } catch (const ContractError& e) {
    std::fprintf(stderr, "contract violation: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return 0;
}
