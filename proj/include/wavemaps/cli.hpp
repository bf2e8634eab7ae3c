#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "wavemaps/config.hpp"

namespace wm {

/// Exit codes of every subcommand.
enum ExitCode : int { kExitOk = 0, kExitFailure = 1, kExitConfig = 2 };

struct CommandConfig {
  std::string subcommand;  // run, convergence, diagnostics, synth
  std::string config_path;
  std::filesystem::path out_dir = "out";
  std::vector<std::string> overrides;
  std::optional<unsigned> threads;
  std::optional<std::uint64_t> seed;
};

/// Defaults, then the config file, then WMSOLVE_ environment variables,
/// then --set overrides, then --threads / --seed.
Json resolve_config(const CommandConfig& cc, char** env);

int cmd_run(const Json& cfg, const std::filesystem::path& out, std::ostream& log);
int cmd_convergence(const Json& cfg, const std::filesystem::path& out, std::ostream& log);
int cmd_diagnostics(const Json& cfg, const std::filesystem::path& out, std::ostream& log);
int cmd_synth(const Json& cfg, const std::filesystem::path& out, std::ostream& log);

/// Resolves the config, dispatches and maps exceptions to exit codes.
int run_command(const CommandConfig& cc, char** env, std::ostream& log, std::ostream& err);

}  // namespace wm
