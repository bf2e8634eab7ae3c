#include <iostream>
#include <utility>

#include <CLI11.hpp>

#include "wavemaps/cli.hpp"

extern char** environ;

int main(int argc, char** argv) {
  CLI::App app{"wmsolve: filtered Lie splitting solver for wave maps into the sphere"};
  app.require_subcommand(1);
  app.footer(
      "Environment: WMSOLVE_<SECTION>__<KEY>=value sets section.key (after --config,\n"
      "before --set).\nExit codes: 0 ok, 1 check or evolution failure, 2 configuration error.");
  wm::CommandConfig cc;
  std::string out = "out";
  unsigned threads = 0;
  std::uint64_t seed = 0;

  const std::pair<const char*, const char*> commands[] = {
      {"run", "single evolution with snapshots"},
      {"convergence", "tau ladder study with rate fit"},
      {"diagnostics", "identity, vanishing and Strichartz checks"},
      {"synth", "write initial data sets"},
  };
  for (const auto& [name, what] : commands) {
    auto* sub = app.add_subcommand(name, what);
    sub->add_option("--config", cc.config_path, "JSON config file or run manifest");
    sub->add_option("--out", out, "output directory")->capture_default_str();
    sub->add_option("--set", cc.overrides, "section.key=value override (repeatable)");
    sub->add_option("--threads", threads, "concurrent ladder points");
    sub->add_option("--seed", seed, "seed for data and diagnostics");
    sub->footer("Environment: WMSOLVE_<SECTION>__<KEY>=value sets section.key.");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : wm::kExitConfig;
  }
  cc.subcommand = app.get_subcommands().front()->get_name();
  const auto* sub = app.get_subcommands().front();
  cc.out_dir = out;
  if (sub->count("--threads") > 0) cc.threads = threads;
  if (sub->count("--seed") > 0) cc.seed = seed;
  return wm::run_command(cc, environ, std::cout, std::cerr);
}
