#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "dbarcone_app/run.hpp"

namespace {

using namespace dbarcone;
using namespace dbarcone::app;

bool read_file(const std::string& path, std::string& text) {
  std::ifstream in(path);
  if (!in) return false;
  std::ostringstream ss;
  ss << in.rdbuf();
  text = ss.str();
  return true;
}

int load(const std::string& path, RunConfig& config) {
  std::string text;
  if (!read_file(path, text)) {
    std::cerr << "dbar-cone: cannot read " << path << "\n";
    return kExitValidation;
  }
  try {
    config = parse_config(text);
  } catch (const ConfigError& e) {
    std::cerr << path << ": " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Integral-formula solver for the dbar-equation on weighted homogeneous varieties"};
  app.require_subcommand(1);

  std::string config_path;
  bool reproducible = false;
  std::string out_path;
  std::string format;
  std::uint64_t seed = 0;
  int threads = 0;

  auto* run_cmd = app.add_subcommand("run", "Run the job described by a config file");
  run_cmd->add_option("config", config_path, "Config file (YAML)")->required();
  run_cmd->add_flag("--reproducible", reproducible, "Omit timestamp and timing fields");
  run_cmd->add_option("--out", out_path, "Report path (default: stdout)");
  run_cmd->add_option("--format", format, "Report format")->check(CLI::IsMember({"json", "csv"}));
  auto* seed_opt = run_cmd->add_option("--seed", seed, "RNG seed (overrides the config)");
  auto* threads_opt = run_cmd->add_option("--threads", threads, "Worker threads (overrides the config)")
                          ->check(CLI::Range(1, 256));

  auto* check_cmd = app.add_subcommand("check", "Parse and validate a config file");
  check_cmd->add_option("config", config_path, "Config file (YAML)")->required();

  auto* fixtures_cmd = app.add_subcommand("fixtures", "List built-in varieties and forms");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  if (fixtures_cmd->parsed()) {
    std::cout << "varieties:\n";
    for (const auto& f : fixtures()) std::cout << "  " << f.name << "  " << f.description << "\n";
    std::cout << "forms:\n"
              << "  zero       lambda = 0\n"
              << "  bump-dbar  dbar(h*chi), chi a smootherstep cutoff between r0 and R (dbar-closed)\n"
              << "  raw-bump   h*chi dz1-bar (not dbar-closed)\n";
    return kExitOk;
  }

  RunConfig config;
  if (const int rc = load(config_path, config); rc != kExitOk) return rc;
  if (check_cmd->parsed()) {
    std::cout << config_path << ": ok (job " << config.job.kind << ")\n";
    return kExitOk;
  }

  if (seed_opt->count() > 0) config.seed = seed;
  if (threads_opt->count() > 0) config.threads = threads;
  if (!format.empty()) config.output.format = format;
  if (!out_path.empty()) config.output.path = out_path;

  const RunOutcome outcome = run(config, reproducible);
  const std::string text = render(outcome.report, config.output.format);
  if (config.output.path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(config.output.path, std::ios::binary);
    if (!out) {
      std::cerr << "dbar-cone: cannot write " << config.output.path << "\n";
      return kExitRuntime;
    }
    out << text;
  }
  if (outcome.exit_code != kExitOk) std::cerr << "dbar-cone: " << outcome.report["error"]["message"].get<std::string>() << "\n";
  return outcome.exit_code;
}
