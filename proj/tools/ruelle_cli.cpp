// Command-line front end: reads a config, runs one pipeline command, writes <command>.<ext>.
//
// Exit status is 0 whenever the run completes, whatever the verdicts say;
// 1 for operational errors (bad config, unreadable file, I/O failure).

#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "ruelle/config.hpp"
#include "ruelle/experiment.hpp"

namespace {

struct Flags {
  std::string config;
  std::string out = ".";
  std::size_t grid = 0;
  std::uint64_t seed = 0;
  std::string format;
};

void add_flags(CLI::App *cmd, Flags &flags) {
  cmd->add_option("--config", flags.config, "config file (sectioned key = value)");
  cmd->add_option("--out", flags.out, "output directory")->capture_default_str();
  cmd->add_option("--grid", flags.grid, "grid nodes N, overrides [grid] nodes")->check(CLI::Range(2, 1 << 24));
  cmd->add_option("--seed", flags.seed, "random seed, overrides [run] seed");
  cmd->add_option("--format", flags.format, "tabular (csv) or structured (json)")
      ->check(CLI::IsMember({"tabular", "structured"}));
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Ruelle transfer operators of weakly contractive iterated function systems"};
  app.require_subcommand(1);
  Flags flags;
  const std::pair<const char *, const char *> commands[] = {
      {"attractor", "approximate the invariant set"},
      {"radius", "spectral radius estimate and sandwich test"},
      {"check", "sufficient conditions of the Ruelle operator theorem"},
      {"eigen", "eigenfunction h and eigenmeasure mu"},
      {"converge", "convergence of rho^-n T^n f to <mu, f> h"},
      {"paper-example", "full pipeline on the two-branch indifferent example"},
      {"all", "full pipeline on the configured system"},
  };
  for (const auto &[name, help] : commands)
    add_flags(app.add_subcommand(name, help), flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    return app.exit(e);
  }

  try {
    const std::string command = app.get_subcommands().front()->get_name();
    ruelle::RunConfig config;
    if (!flags.config.empty())
      config = ruelle::load_config(flags.config);
    else if (command != "paper-example")
      throw ruelle::ConfigError("command '" + command + "' needs --config");
    if (flags.grid)
      config.grid_nodes = flags.grid;
    if (app.get_subcommands().front()->count("--seed"))
      config.seed = flags.seed;
    if (!flags.format.empty())
      config.format = ruelle::parse_format(flags.format);
    if (config.test_functions.empty())
      config.test_functions.push_back({"x", ruelle::RealFunction::parse("x")});

    for (const auto &path : ruelle::run_config(config, command, flags.out))
      std::cout << path.string() << '\n';
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
