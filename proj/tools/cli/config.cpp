#include "cli/config.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <set>

namespace isac::cli {

namespace {

using Keys = std::vector<std::pair<std::string, std::string>>;

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto piece = trim(std::string_view(text).substr(
        start, comma == std::string::npos ? std::string::npos : comma - start));
    if (!piece.empty()) out.push_back(piece);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

double to_double(const std::string& key, const std::string& text) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
    throw ConfigError("key '" + key + "': '" + text + "' is not a finite number");
  }
  return value;
}

template <typename Int>
Int to_integer(const std::string& key, const std::string& text) {
  Int value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError("key '" + key + "': '" + text + "' is not a valid integer");
  }
  return value;
}

std::vector<double> parse_snr_grid(const std::string& text) {
  std::vector<double> grid;
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
      const auto colon = text.find(':', start);
      parts.push_back(trim(std::string_view(text).substr(
          start, colon == std::string::npos ? std::string::npos : colon - start)));
      if (colon == std::string::npos) break;
      start = colon + 1;
    }
    if (parts.size() != 3) {
      throw ConfigError("key 'snr_db': range form is start:step:stop, got '" + text + "'");
    }
    const double first = to_double("snr_db", parts[0]);
    const double step = to_double("snr_db", parts[1]);
    const double last = to_double("snr_db", parts[2]);
    if (!(step > 0.0)) throw ConfigError("key 'snr_db': step must be > 0");
    const double span = (last - first) / step;
    if (span > 1e6) throw ConfigError("key 'snr_db': grid too large");
    for (long i = 0; first + static_cast<double>(i) * step <= last + 1e-9 * step; ++i) {
      grid.push_back(first + static_cast<double>(i) * step);
    }
  } else {
    for (const auto& item : split_list(text)) grid.push_back(to_double("snr_db", item));
  }
  if (grid.empty()) throw ConfigError("snr grid is empty");
  return grid;
}

const Keys& prior_keys() {
  static const Keys keys = {
      {"gamma", "0.5"}, {"mu_t_re", "1"}, {"mu_t_im", "0"}, {"sigma_t_sq", "0.01"}};
  return keys;
}

Keys with_prior(Keys extra, const Keys& overrides = {}) {
  Keys out = {{"command", ""}};
  for (const auto& [k, v] : prior_keys()) {
    std::string value = v;
    for (const auto& [ok, ov] : overrides) {
      if (ok == k) value = ov;
    }
    out.emplace_back(k, value);
  }
  out.insert(out.end(), extra.begin(), extra.end());
  return out;
}

const std::string& value_of(const KeyValues& values, const std::string& key) {
  static const std::string empty;
  const auto it = values.find(key);
  return it == values.end() ? empty : it->second;
}

RunSettings to_settings(const ResolvedConfig& config) {
  const auto& v = config.values;
  auto num = [&](const std::string& key) { return to_double(key, value_of(v, key)); };
  RunSettings s;
  s.command = config.command;
  s.prior.gamma = num("gamma");
  s.prior.mu_t = {num("mu_t_re"), num("mu_t_im")};
  s.prior.sigma_t_sq = num("sigma_t_sq");
  if (!(s.prior.gamma > 0.0 && s.prior.gamma < 1.0)) {
    throw ConfigError("key 'gamma': must lie in (0, 1)");
  }
  if (!(s.prior.sigma_t_sq >= 0.0)) throw ConfigError("key 'sigma_t_sq': must be >= 0");

  if (v.contains("snr_db")) {
    s.snr_db = parse_snr_grid(value_of(v, "snr_db"));
    for (double db : s.snr_db) s.snr.push_back(Snr::from_db(db));
  }
  if (v.contains("seed")) s.seed = to_integer<std::uint64_t>("seed", value_of(v, "seed"));
  if (v.contains("samples")) {
    s.samples = to_integer<std::size_t>("samples", value_of(v, "samples"));
    if (s.samples < 1000) throw ConfigError("key 'samples': Monte Carlo needs at least 1000");
  }
  if (v.contains("roc_points")) {
    s.roc_points = to_integer<int>("roc_points", value_of(v, "roc_points"));
    if (s.roc_points < 2) throw ConfigError("key 'roc_points': must be >= 2");
  }

  if (config.command == Command::allocate) {
    s.budget.total_bandwidth = num("bandwidth");
    s.budget.rho_c = db_to_linear(num("rho_c_db"));
    s.budget.rho_s = db_to_linear(num("rho_s_db"));
    s.budget.w_s = num("w_s");
    s.budget.w_c = num("w_c");
    s.budget.d_max = num("d_max");
    s.budget.num_pulses = to_integer<int>("num_pulses", value_of(v, "num_pulses"));
    s.budget.prior = s.prior;
    try {
      s.backend = parse_backend(value_of(v, "backend"));
      s.budget.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    s.tol = num("tol");
    if (!(s.tol > 0.0)) throw ConfigError("key 'tol': must be > 0");
    s.sweep_points = to_integer<std::size_t>("sweep_points", value_of(v, "sweep_points"));
    if (s.sweep_points < 2) throw ConfigError("key 'sweep_points': must be >= 2");
  }

  if (config.command == Command::simulate) {
    s.radar.num_pulses = to_integer<int>("num_pulses", value_of(v, "num_pulses"));
    s.radar.num_range_bins = to_integer<int>("num_range_bins", value_of(v, "num_range_bins"));
    s.radar.pri = num("pri");
    s.radar.bandwidth = num("bandwidth");
    s.radar.transmit_power = num("transmit_power");
    s.radar.tx_gain = num("tx_gain");
    s.radar.eff_area = num("eff_area");
    s.radar.noise_density = num("noise_density");
    s.radar.carrier = num("carrier");
    try {
      s.radar.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    s.scene_path = value_of(v, "scene");
    if (s.scene_path.empty()) throw ConfigError("key 'scene': a scene file is required");
    s.sigma_rcs = num("sigma_rcs");
    if (!(s.sigma_rcs > 0.0)) throw ConfigError("key 'sigma_rcs': must be > 0");
    const auto& noise = value_of(v, "noise");
    if (noise != "on" && noise != "off") throw ConfigError("key 'noise': expected on or off");
    s.noise = noise == "on";
    s.equivalence_cpis = to_integer<int>("equivalence_cpis", value_of(v, "equivalence_cpis"));
    if (s.equivalence_cpis < 0) throw ConfigError("key 'equivalence_cpis': must be >= 0");
  }
  return s;
}

}  // namespace

std::string_view to_string(Command command) {
  switch (command) {
    case Command::rate:
      return "rate";
    case Command::roc:
      return "roc";
    case Command::allocate:
      return "allocate";
    case Command::simulate:
      return "simulate";
    case Command::mmse:
      return "mmse";
  }
  return "unknown";
}

Command parse_command(std::string_view name) {
  for (auto c : {Command::rate, Command::roc, Command::allocate, Command::simulate, Command::mmse}) {
    if (to_string(c) == name) return c;
  }
  throw ConfigError("unknown command '" + std::string(name) + "'");
}

KeyValues parse_key_values(std::istream& in, const std::string& source) {
  KeyValues out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto text = trim(line);
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(source + ":" + std::to_string(line_no) + ": expected key=value");
    }
    auto key = trim(std::string_view(text).substr(0, eq));
    if (key.empty()) throw ConfigError(source + ":" + std::to_string(line_no) + ": empty key");
    out[key] = trim(std::string_view(text).substr(eq + 1));
  }
  return out;
}

const std::vector<std::pair<std::string, std::string>>& command_keys(Command command) {
  static const Keys rate = with_prior({{"snr_db", "-10:2:30"}, {"samples", "100000"}, {"seed", "1"}});
  static const Keys roc = with_prior({{"snr_db", "0"}, {"roc_points", "512"}});
  static const Keys mmse = with_prior({{"snr_db", "-10:2:30"}});
  static const Keys allocate = with_prior(
      {{"bandwidth", "200e6"},
       {"rho_c_db", "5"},
       {"rho_s_db", "15"},
       {"w_s", "5"},
       {"w_c", "1"},
       {"d_max", "10000"},
       {"num_pulses", "64"},
       {"backend", "approx"},
       {"tol", "1e-6"},
       {"sweep_points", "101"}},
      {{"gamma", "0.05"}, {"sigma_t_sq", "0.1"}});
  static const Keys simulate = with_prior({{"scene", ""},
                                           {"num_pulses", "64"},
                                           {"num_range_bins", "64"},
                                           {"pri", "1e-4"},
                                           {"bandwidth", "200e6"},
                                           {"transmit_power", "1"},
                                           {"tx_gain", "1"},
                                           {"eff_area", "1"},
                                           {"noise_density", "4e-21"},
                                           {"carrier", "10e9"},
                                           {"sigma_rcs", "1"},
                                           {"noise", "on"},
                                           {"seed", "1"},
                                           {"equivalence_cpis", "0"}});
  switch (command) {
    case Command::rate:
      return rate;
    case Command::roc:
      return roc;
    case Command::allocate:
      return allocate;
    case Command::simulate:
      return simulate;
    case Command::mmse:
      return mmse;
  }
  return rate;
}

const std::map<std::string, std::pair<Command, KeyValues>>& presets() {
  static const std::map<std::string, std::pair<Command, KeyValues>> table = {
      {"fig2", {Command::roc, {{"gamma", "0.5"}, {"mu_t_re", "1"}, {"sigma_t_sq", "0.1"},
                               {"snr_db", "0,3,5"}}}},
      {"fig3", {Command::roc, {{"gamma", "0.2,0.5,0.8"}, {"mu_t_re", "1"}, {"sigma_t_sq", "0"},
                               {"snr_db", "0,5,10"}}}},
      {"fig4a", {Command::rate, {{"gamma", "0.1,0.5,0.9"}, {"mu_t_re", "1"},
                                 {"sigma_t_sq", "0.01"}, {"snr_db", "-10:2:30"}}}},
      {"fig4b", {Command::rate, {{"gamma", "0.5"}, {"mu_t_re", "1"},
                                 {"sigma_t_sq", "0.1,0.01,0.001"}, {"snr_db", "-10:2:30"}}}},
      {"fig5a", {Command::rate, {{"gamma", "0.1,0.5,0.9"}, {"mu_t_re", "1"},
                                 {"sigma_t_sq", "0.01"}, {"snr_db", "-10:2:30"}}}},
      {"fig5b", {Command::rate, {{"gamma", "0.5"}, {"mu_t_re", "1"},
                                 {"sigma_t_sq", "0.1,0.01,0.001"}, {"snr_db", "-10:2:30"}}}},
      {"fig6", {Command::allocate, {{"gamma", "0.05,0.1"}, {"sigma_t_sq", "0.01,0.1"},
                                    {"w_s", "5"}, {"w_c", "1"}}}},
      {"fig7a", {Command::allocate, {{"gamma", "0.05"}, {"sigma_t_sq", "0.01,0.1"}}}},
      {"fig7b", {Command::allocate, {{"gamma", "0.05,0.1,0.5"}, {"sigma_t_sq", "0.1"}}}},
  };
  return table;
}

std::vector<std::string> ResolvedConfig::echo_lines() const {
  std::vector<std::string> lines;
  for (const auto& [key, def] : command_keys(command)) {
    lines.push_back(key + "=" + value_of(values, key));
  }
  return lines;
}

ResolvedConfig resolve(Command command, const std::vector<const KeyValues*>& layers) {
  ResolvedConfig out;
  out.command = command;
  std::set<std::string> allowed;
  for (const auto& [key, def] : command_keys(command)) {
    out.values[key] = def;
    allowed.insert(key);
  }
  out.values["command"] = std::string(to_string(command));
  for (const auto* layer : layers) {
    if (layer == nullptr) continue;
    for (const auto& [key, value] : *layer) {
      if (!allowed.contains(key)) {
        throw ConfigError("key '" + key + "' is not accepted by '" +
                          std::string(to_string(command)) + "'");
      }
      if (key == "command" && value != to_string(command)) {
        throw ConfigError("config is for command '" + value + "', not '" +
                          std::string(to_string(command)) + "'");
      }
      out.values[key] = value;
    }
  }
  return out;
}

std::vector<Run> expand_runs(const ResolvedConfig& config) {
  struct Axis {
    std::string key;
    std::string label;
    std::vector<std::string> items;
  };
  std::vector<Axis> axes = {{"gamma", "gamma", split_list(value_of(config.values, "gamma"))},
                            {"sigma_t_sq", "sigma2_", split_list(value_of(config.values, "sigma_t_sq"))}};
  if (config.command == Command::roc) {
    const auto grid_text = value_of(config.values, "snr_db");
    std::vector<std::string> items;
    if (grid_text.find(':') != std::string::npos) {
      for (double db : parse_snr_grid(grid_text)) {
        char buf[32];
        const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, db);
        items.emplace_back(buf, end);
      }
    } else {
      items = split_list(grid_text);
    }
    axes.push_back({"snr_db", "snr", items});
  }
  for (const auto& axis : axes) {
    if (axis.items.empty()) throw ConfigError("key '" + axis.key + "' is empty");
  }

  std::vector<Run> runs;
  std::vector<std::size_t> index(axes.size(), 0);
  while (true) {
    Run run;
    run.config = config;
    for (std::size_t a = 0; a < axes.size(); ++a) {
      const auto& item = axes[a].items[index[a]];
      run.config.values[axes[a].key] = item;
      if (axes[a].items.size() > 1) run.suffix += "_" + axes[a].label + item;
    }
    run.settings = to_settings(run.config);
    runs.push_back(std::move(run));
    std::size_t a = axes.size();
    while (a > 0) {
      --a;
      if (++index[a] < axes[a].items.size()) break;
      index[a] = 0;
      if (a == 0) return runs;
    }
    if (axes.empty()) return runs;
  }
}

std::string suffixed_path(const std::string& path, const std::string& suffix) {
  if (suffix.empty()) return path;
  const auto slash = path.find_last_of('/');
  const auto dot = path.find_last_of('.');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash) ||
      dot == (slash == std::string::npos ? 0 : slash + 1)) {
    return path + suffix;
  }
  return path.substr(0, dot) + suffix + path.substr(dot);
}

}  // namespace isac::cli
