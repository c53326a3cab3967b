#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "parity_lab/cli.hpp"

namespace {

using parity_lab::cli::RunConfig;

struct FlagValues {
  std::optional<std::string> config;
  std::vector<std::pair<std::string, std::optional<std::string>>> settings;
  bool huge = false;
};

void add_shared_flags(CLI::App& sub, FlagValues& flags) {
  struct Keyed {
    const char* flag;
    const char* key;
    const char* help;
  };
  static const std::vector<Keyed> keyed = {
      {"--n", "n", "single n"},
      {"--n-range", "n_range", "start:end[:step], inclusive"},
      {"--N", "N", "modulus"},
      {"--alpha", "alpha", "first residue"},
      {"--beta", "beta", "second residue"},
      {"--c0", "c0", "threshold scale, difference compared against c0 n^{1/4}"},
      {"--c", "c", "comma-separated difference values"},
      {"--format", "format", "csv or json"},
      {"--out", "out", "write to this file instead of stdout"},
      {"--threads", "threads", "worker threads for sweeps"},
      {"--only", "only", "comma-separated verify check names"},
  };
  flags.settings.reserve(keyed.size());
  for (const auto& entry : keyed) {
    flags.settings.emplace_back(entry.key, std::nullopt);
    sub.add_option(entry.flag, flags.settings.back().second, entry.help);
  }
  sub.add_option("--config", flags.config, "flat key=value file");
  sub.add_flag("--huge", flags.huge, "allow exact tables up to n = 50000");
}

int write_output(const RunConfig& cfg, const std::string& text) {
  if (cfg.output_path.empty()) {
    std::cout << text;
    return 0;
  }
  std::ofstream out(cfg.output_path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot write " << cfg.output_path << '\n';
    return parity_lab::cli::kUsageError;
  }
  out << text;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  namespace cli = parity_lab::cli;
  CLI::App app{"Exact counts and asymptotics for parity differences of distinct-part partitions"};
  app.require_subcommand(1);

  const std::vector<std::string> commands = {"count", "compare", "dist", "bias", "verify"};
  const std::vector<std::string> descriptions = {
      "exact parity-difference counts",
      "exact counts against the main-term and two-term estimates",
      "normalized difference distribution against the Gaussian limit",
      "difference profile and bias against its estimate",
      "run the numerical self-checks",
  };
  std::vector<FlagValues> flags(commands.size());
  std::vector<CLI::App*> subs;
  for (std::size_t i = 0; i < commands.size(); ++i) {
    CLI::App* sub = app.add_subcommand(commands[i], descriptions[i]);
    add_shared_flags(*sub, flags[i]);
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kUsageError;
  }

  for (std::size_t i = 0; i < commands.size(); ++i) {
    if (!subs[i]->parsed()) continue;
    const FlagValues& f = flags[i];
    std::vector<std::pair<std::string, std::string>> settings;
    for (const auto& [key, value] : f.settings)
      if (value) settings.emplace_back(key, *value);
    if (f.huge) settings.emplace_back("huge", "true");

    RunConfig cfg;
    try {
      cfg = cli::resolve_config(f.config, settings);
    } catch (const cli::usage_error& e) {
      std::cerr << "error: " << e.what() << '\n';
      return cli::kUsageError;
    }

    std::ostringstream body;
    int code = 0;
    if (commands[i] == "verify") {
      try {
        code = cli::cmd_verify(cfg, body);
      } catch (const cli::usage_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return cli::kUsageError;
      }
    } else {
      code = cli::run_table_command(commands[i], cfg, body, std::cerr);
      if (code != cli::kSuccess) return code;
    }
    const int io = write_output(cfg, body.str());
    return io != 0 ? io : code;
  }
  return cli::kUsageError;
}
