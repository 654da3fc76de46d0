// Command-line driver: run, convergence, print-config-defaults.
// Exit codes: 0 success, 2 configuration or usage error, 3 solver failure.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>

#include "lpm/io/run.hpp"

namespace {

lpm::RunConfig load_config(const std::string& path) {
  return lpm::parse_config(lpm::read_text_file(path));
}

int cmd_run(const std::string& config_path, const std::string& out_override) {
  auto c = load_config(config_path);
  if (!out_override.empty()) c.out_dir = out_override;
  const auto summary = lpm::run(c, c.out_dir);
  std::printf("%s: %zu steps to t = %.6g in %.2f s, %zu snapshots in %s\n", c.scenario.c_str(), summary.steps,
              summary.time, summary.wall_seconds, summary.snapshots, c.out_dir.c_str());
  if (summary.exit_code != lpm::kExitOk)
    std::fprintf(stderr, "solver failure: %s (last good state in %s/checkpoint.csv)\n", summary.message.c_str(),
                 c.out_dir.c_str());
  return summary.exit_code;
}

int cmd_convergence(const std::string& config_path, const std::vector<std::size_t>& counts,
                    const std::string& field_name, const std::string& out_override) {
  auto c = load_config(config_path);
  if (!out_override.empty()) c.out_dir = out_override;
  lpm::Field field = lpm::Field::pressure;
  if (field_name == "velocity") field = lpm::Field::velocity;
  else if (field_name == "volume") field = lpm::Field::volume;
  const auto rows = lpm::run_convergence(c, counts, field);
  std::filesystem::create_directories(c.out_dir);
  lpm::write_text_file((std::filesystem::path(c.out_dir) / "convergence.csv").string(), lpm::convergence_csv(rows));
  std::fputs(lpm::convergence_text(rows).c_str(), stdout);
  for (const auto& r : rows)
    if (!r.failure.empty()) return lpm::kExitSolver;
  return lpm::kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lagrangian particle solver for the compressible Euler equations"};
  app.require_subcommand(1);

  std::string config_path, out_dir, field = "pressure";
  std::vector<std::size_t> counts;

  auto* run = app.add_subcommand("run", "Run a scenario from a config file");
  run->add_option("--config", config_path, "Config file (key: value lines)")->required();
  run->add_option("--out", out_dir, "Output directory (overrides out_dir)");

  auto* conv = app.add_subcommand("convergence", "Convergence table for a 1D scenario");
  conv->add_option("--config", config_path, "Config file (key: value lines)")->required();
  conv->add_option("--counts", counts, "Doubling particle counts, e.g. 240,480,960")->required()->delimiter(',');
  conv->add_option("--field", field, "Error field")->check(CLI::IsMember({"pressure", "velocity", "volume"}));
  conv->add_option("--out", out_dir, "Output directory (overrides out_dir)");

  auto* defaults = app.add_subcommand("print-config-defaults", "Print the default config");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return lpm::kExitConfig;
  }

  try {
    if (*defaults) {
      std::fputs(lpm::serialize_config(lpm::RunConfig{}).c_str(), stdout);
      return lpm::kExitOk;
    }
    if (*run) return cmd_run(config_path, out_dir);
    if (*conv) return cmd_convergence(config_path, counts, field, out_dir);
  } catch (const lpm::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return lpm::kExitConfig;
  } catch (const lpm::IoError& e) {
    std::fprintf(stderr, "i/o error: %s\n", e.what());
    return lpm::kExitConfig;
  } catch (const lpm::DomainError& e) {
    std::fprintf(stderr, "invalid request: %s\n", e.what());
    return lpm::kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "solver failure: %s\n", e.what());
    return lpm::kExitSolver;
  }
  return lpm::kExitOk;
}
