// Command-line driver: remx --config <file> [--mode <name>] [--out <dir>]
//                           [--restart <checkpoint>]
#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>

#include "remx/config.hpp"
#include "remx/errors.hpp"
#include "remx/experiments.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Damped radiative Euler-Maxwell solver and diagnostics"};
  std::string config_path;
  std::string mode;
  std::string out = "out";
  std::string restart;
  app.add_option("--config", config_path, "configuration file (key = value)");
  app.add_option("--mode", mode,
                 "simulate | mms | sk-check | lemma1-check | energy-audit "
                 "(overrides the config)");
  app.add_option("--out", out, "output directory")->capture_default_str();
  app.add_option("--restart", restart, "checkpoint to resume (simulate)");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  remx::Config config;
  try {
    if (!config_path.empty()) {
      config = remx::load_config(config_path);
    } else if (!restart.empty()) {
      config = remx::read_checkpoint(restart).config;
    } else {
      std::cerr << "remx: --config is required (or --restart)\n";
      return kExitConfig;
    }
    if (!mode.empty()) config.mode = remx::parse_mode(mode, "--mode");
    if (!restart.empty() && config.mode != remx::Mode::simulate) {
      throw remx::ConfigError("--restart: only valid in simulate mode");
    }
  } catch (const remx::ConfigError& e) {
    std::cerr << "remx: config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "remx: config error: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    std::optional<std::filesystem::path> restart_path;
    if (!restart.empty()) restart_path = restart;
    return remx::run_mode(config, out, restart_path, std::cout);
  } catch (const remx::ConfigError& e) {
    std::cerr << "remx: config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "remx: run aborted: " << e.what() << "\n";
    return kExitRuntime;
  }
}
