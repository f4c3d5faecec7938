#pragma once

// Command runners. Each produces its output files in memory so the caller
// (or a test) decides where they go.

#include <exception>
#include <string>
#include <vector>

#include "cli/config.hpp"

namespace isac::cli {

struct OutputFile {
  std::string path;
  std::string content;
};

struct CommandResult {
  std::vector<OutputFile> files;
  std::string summary;  // human-readable, for stdout
};

/// Runs every expansion of `config`. Output names derive from `out_path`.
CommandResult execute(const ResolvedConfig& config, const std::string& out_path);

/// Comment header: a `# isac <command>` line, then the resolved config
/// between `# config-begin` and `# config-end`.
std::string config_header(const ResolvedConfig& config);

/// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;

/// Usage for bad configs, scenes and arguments; numerical for everything else.
int exit_code_for(const std::exception& error);

}  // namespace isac::cli
