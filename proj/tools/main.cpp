// isac: sensing-rate, detection and bandwidth-allocation experiments.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "cli/commands.hpp"
#include "cli/config.hpp"

namespace {

using namespace isac::cli;

struct Flags {
  std::string config_path;
  std::string preset;
  std::string seed;
  std::string out;
  std::string backend;
  std::string samples;
};

void add_flags(CLI::App& sub, Flags& flags) {
  sub.add_option("--config", flags.config_path, "key=value config file");
  sub.add_option("--preset", flags.preset, "named preset (fig2, fig3, fig4a, ...)");
  sub.add_option("--seed", flags.seed, "64-bit seed");
  sub.add_option("--out", flags.out, "output path; multi-run configs add a suffix per run");
  sub.add_option("--backend", flags.backend, "per-bin rate backend for allocate")
      ->check(CLI::IsMember({"exact", "approx"}));
  sub.add_option("--samples", flags.samples, "Monte Carlo sample count (>= 1000)");
}

int run(Command command, const Flags& flags) {
  KeyValues preset_layer;
  if (!flags.preset.empty()) {
    const auto it = presets().find(flags.preset);
    if (it == presets().end()) throw ConfigError("unknown preset '" + flags.preset + "'");
    if (it->second.first != command) {
      throw ConfigError("preset '" + flags.preset + "' belongs to command '" +
                        std::string(to_string(it->second.first)) + "'");
    }
    preset_layer = it->second.second;
  }
  KeyValues file_layer;
  if (!flags.config_path.empty()) {
    std::ifstream in(flags.config_path);
    if (!in) throw ConfigError("cannot open config file '" + flags.config_path + "'");
    file_layer = parse_key_values(in, flags.config_path);
  }
  KeyValues flag_layer;
  if (!flags.seed.empty()) flag_layer["seed"] = flags.seed;
  if (!flags.backend.empty()) flag_layer["backend"] = flags.backend;
  if (!flags.samples.empty()) flag_layer["samples"] = flags.samples;

  const auto config = resolve(command, {&preset_layer, &file_layer, &flag_layer});
  const std::string out =
      flags.out.empty() ? std::string(to_string(command)) + ".csv" : flags.out;
  const auto result = execute(config, out);
  for (const auto& file : result.files) {
    const auto parent = std::filesystem::path(file.path).parent_path();
    std::error_code ec;
    if (!parent.empty()) std::filesystem::create_directories(parent, ec);
    std::ofstream os(file.path, std::ios::binary);
    os << file.content;
    if (!os) throw ConfigError("cannot write '" + file.path + "'");
  }
  std::cout << result.summary;
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sensing rate, detection and ISAC bandwidth allocation"};
  app.require_subcommand(1);
  Flags flags;
  std::vector<std::pair<CLI::App*, Command>> subs;
  for (auto [name, help, command] :
       {std::tuple{"rate", "exact, lower-bound, approximate and Monte Carlo rate over an snr grid",
                   Command::rate},
        std::tuple{"roc", "Neyman-Pearson ROC with the MAP operating point", Command::roc},
        std::tuple{"allocate", "optimal radar/communication bandwidth split", Command::allocate},
        std::tuple{"simulate", "pulse-Doppler chain on a scene file", Command::simulate},
        std::tuple{"mmse", "MMSE of the target amplitude over an snr grid", Command::mmse}}) {
    auto* sub = app.add_subcommand(name, help);
    add_flags(*sub, flags);
    subs.emplace_back(sub, command);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  Command command = Command::rate;
  for (const auto& [sub, c] : subs) {
    if (sub->parsed()) command = c;
  }
  try {
    return run(command, flags);
  } catch (const std::exception& e) {
    const int code = exit_code_for(e);
    std::cerr << (code == kExitUsage ? "error: " : "numerical failure: ") << e.what() << "\n";
    return code;
  }
}
