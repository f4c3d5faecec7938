#pragma once

// Experiment configuration: flat key=value text with '#' comments.
//
// Values are merged as defaults < preset < config file < command-line flags,
// then converted once into typed, linear-scale settings. The merged strings
// are what gets echoed into output headers, so feeding an echoed header back
// in as a config file reproduces the run.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "isac/alloc.hpp"
#include "isac/prior.hpp"
#include "isac/radar_chain.hpp"

namespace isac::cli {

/// Bad config text, unknown key or out-of-range value. Maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Command { rate, roc, allocate, simulate, mmse };

std::string_view to_string(Command command);
Command parse_command(std::string_view name);

/// Ordered key -> raw value text.
using KeyValues = std::map<std::string, std::string>;

/// One `key=value` per line; blank lines and text after '#' are ignored.
/// `source` names the input in error messages.
KeyValues parse_key_values(std::istream& in, const std::string& source);

/// Keys accepted by a command, in header order, with their default text.
const std::vector<std::pair<std::string, std::string>>& command_keys(Command command);

/// Preset names (fig2, fig3, fig4a, ...) and their key overrides.
const std::map<std::string, std::pair<Command, KeyValues>>& presets();

/// Merged string settings for one command.
struct ResolvedConfig {
  Command command = Command::rate;
  KeyValues values;

  /// `key=value` lines in the command's key order.
  [[nodiscard]] std::vector<std::string> echo_lines() const;
};

/// Merge layers, rejecting keys the command does not accept. A `command`
/// entry in any layer must match `command`.
ResolvedConfig resolve(Command command, const std::vector<const KeyValues*>& layers);

/// Typed settings of a single run (every list-valued key reduced to one
/// element, except the snr grid of rate and mmse).
struct RunSettings {
  Command command = Command::rate;
  TargetPrior prior;
  std::vector<double> snr_db;
  std::vector<Snr> snr;  // converted once from snr_db
  std::uint64_t seed = 1;
  std::size_t samples = 100000;
  int roc_points = 512;

  AllocationBudget budget;
  Backend backend = Backend::approx;
  double tol = 1e-6;
  std::size_t sweep_points = 101;

  radar::RadarConfig radar;
  std::string scene_path;
  double sigma_rcs = 1.0;
  bool noise = true;
  int equivalence_cpis = 0;
};

/// A resolved single run and the suffix that distinguishes its output file
/// from sibling runs (empty when the config expands to one run).
struct Run {
  ResolvedConfig config;
  RunSettings settings;
  std::string suffix;
};

/// Expands list-valued gamma and sigma_t_sq (and, for roc, snr_db) into a
/// cartesian product of single runs and converts each to typed settings.
std::vector<Run> expand_runs(const ResolvedConfig& config);

/// Inserts `suffix` before the extension of `path`.
std::string suffixed_path(const std::string& path, const std::string& suffix);

}  // namespace isac::cli
