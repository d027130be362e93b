// reckern: command-line front end for the recursive kernel regression library.
//
// Exit codes:
//   0  success
//   1  invalid configuration, failed assumption check, domain error, bad usage
//   2  I/O or data-file error
//   3  `run` finished but at least one empirical check failed

#include "reckern/asymptotics.hpp"
#include "reckern/config.hpp"
#include "reckern/errors.hpp"
#include "reckern/montecarlo.hpp"
#include "reckern/report_io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>

namespace fs = std::filesystem;
using namespace reckern;

namespace {

enum ExitCode : int
{
  ok = 0,
  config_failure = 1,
  io_failure = 2,
  checks_failed = 3,
};

ValidationReport
validate_all(const Config& cfg)
{
  return validate_plan(cfg.plan());
}

int
cmd_check(const std::string& config_path)
{
  const auto cfg = load_config(config_path);
  const auto report = validate_all(cfg);
  std::cout << report.str();
  std::cout << (report.ok() ? "all hard assumptions hold\n" : "assumption check FAILED\n");
  return report.ok() ? ok : config_failure;
}

int
cmd_theory(const std::string& config_path, const std::string& x_text)
{
  const auto cfg = load_config(config_path);
  const auto estimator = cfg.estimator_config();
  const auto model = cfg.model();
  const Point x = parse_point(x_text, cfg.dim);
  const auto& schedule = estimator.schedule;

  const auto clt = clt_params(model, estimator, x, cfg.n, cfg.bias);
  nlohmann::json out;
  out["x"] = x;
  out["n"] = cfg.n;
  out["ell"] = cfg.ell;
  out["nu"] = cfg.nu;
  out["c"] = cfg.c;
  out["h_n"] = schedule.h(cfg.n);
  out["beta_num"] = schedule.beta_limit(schedule.bias_exponent());
  out["beta_den"] = schedule.beta_limit(schedule.density_exponent());
  out["beta_var"] = schedule.beta_limit(schedule.variance_exponent());
  out["sigma_sq"] = clt.sigma_sq;
  out["bias_bn"] = clt.bias_bn;
  out["sd_limit"] = clt.sd_limit;
  out["scale"] = clt.scale;
  out["bias_cancelled"] = clt.bias_cancelled;
  out["f"] = model.density(x);
  out["r"] = model.regression(x);
  out["V"] = model.conditional_variance(x);
  std::cout << out.dump(2) << "\n";
  return ok;
}

fs::path
prepare_out_dir(const std::string& out_flag, const Config& cfg)
{
  const fs::path dir = out_flag.empty() ? fs::path(cfg.output_dir) : fs::path(out_flag);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec)
    throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
  return dir;
}

std::ofstream
open_output(const fs::path& path)
{
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw IoError("cannot write '" + path.string() + "'");
  return out;
}

int
cmd_run(const std::string& config_path, const std::string& out_flag)
{
  const auto cfg = load_config(config_path);
  const auto plan = cfg.plan();
  const auto validation = validate_plan(plan);
  std::cout << validation.str();
  if (!validation.ok()) {
    std::cout << "assumption check FAILED; not running\n";
    return config_failure;
  }
  const auto dir = prepare_out_dir(out_flag, cfg);

  const auto start = std::chrono::steady_clock::now();
  const auto report = run(plan);
  const double seconds =
    std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const auto checks = evaluate_checks(report);

  const auto csv_path = dir / "replicates.csv";
  const auto json_path = dir / "summary.json";
  {
    auto out = open_output(csv_path);
    write_replicates_csv(report, out);
    if (!out)
      throw IoError("failed writing '" + csv_path.string() + "'");
  }
  {
    auto out = open_output(json_path);
    out << summary_json(report, checks).dump(2) << "\n";
    if (!out)
      throw IoError("failed writing '" + json_path.string() + "'");
  }

  std::cout << "ran " << report.replicates << " replicates of n = " << report.n << " in "
            << std::fixed << std::setprecision(2) << seconds << " s\n";
  std::cout.unsetf(std::ios::floatfield);
  bool all_pass = true;
  for (const auto& c : checks) {
    std::cout << (c.pass ? "PASS " : "FAIL ") << std::left << std::setw(16) << c.name
              << " x=";
    for (std::size_t j = 0; j < c.x.size(); ++j)
      std::cout << (j ? "," : "") << format_double(c.x[j]);
    std::cout << "  observed=" << format_double(c.observed)
              << " expected=" << format_double(c.expected) << "  " << c.detail << "\n";
    all_pass = all_pass && c.pass;
  }
  std::cout << "wrote " << csv_path.string() << " and " << json_path.string() << "\n";
  return all_pass ? ok : checks_failed;
}

int
cmd_stream(const std::string& config_path,
           const std::string& data_path,
           const std::string& out_flag)
{
  const auto cfg = load_config(config_path);
  RecursiveEstimator estimator(cfg.estimator_config());

  std::ifstream in(data_path);
  if (!in)
    throw IoError("cannot read data file '" + data_path + "'");
  const auto rows = read_observations_csv(in, cfg.dim);
  for (const auto& row : rows) {
    try {
      estimator.update(row.x, row.y);
    } catch (const ArgumentError& err) {
      throw IoError(std::string("data does not match the configuration: ") + err.what());
    }
  }

  const auto dir = prepare_out_dir(out_flag, cfg);
  const auto path = dir / "snapshot.csv";
  auto out = open_output(path);
  write_snapshot_csv(estimator, out);
  if (!out)
    throw IoError("failed writing '" + path.string() + "'");
  std::cout << "streamed " << estimator.n() << " observations; wrote " << path.string()
            << "\n";
  return ok;
}

} // namespace

int
main(int argc, char** argv)
{
  CLI::App app{ "Recursive kernel regression estimators and their Monte Carlo checks" };
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::string x_text;
  std::string data_path;

  auto* check = app.add_subcommand("check", "validate the assumptions of a configuration");
  check->add_option("--config", config_path, "config file")->required();

  auto* theory = app.add_subcommand("theory", "print the asymptotic constants at a point");
  theory->add_option("--config", config_path, "config file")->required();
  theory->add_option("--x", x_text, "evaluation point, e.g. 0 or 0.5,1")->required();

  auto* run_cmd = app.add_subcommand("run", "run the Monte Carlo experiment");
  run_cmd->add_option("--config", config_path, "config file")->required();
  run_cmd->add_option("--out", out_dir, "output directory (default: output.dir)");

  auto* stream = app.add_subcommand("stream", "stream a data file through the estimator");
  stream->add_option("--config", config_path, "config file")->required();
  stream->add_option("--data,data", data_path, "CSV with header x_1..x_d,y")->required();
  stream->add_option("--out", out_dir, "output directory (default: output.dir)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ok : config_failure;
  }

  try {
    if (*check)
      return cmd_check(config_path);
    if (*theory)
      return cmd_theory(config_path, x_text);
    if (*run_cmd)
      return cmd_run(config_path, out_dir);
    if (*stream)
      return cmd_stream(config_path, data_path, out_dir);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return io_failure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return config_failure;
  }
  return config_failure;
}
