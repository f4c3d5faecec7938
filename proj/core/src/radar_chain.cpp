#include "isac/radar_chain.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>
#include <utility>

#include "isac/rate.hpp"
#include "isac/rng.hpp"
#include "math_util.hpp"

namespace isac::radar {

namespace {

void require(bool ok, const char* message) {
  if (!ok) throw std::invalid_argument(message);
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

void RadarConfig::validate() const {
  require(num_pulses >= 1, "num_pulses must be >= 1");
  require(num_range_bins >= 1, "num_range_bins must be >= 1");
  require(pri > 0.0 && bandwidth > 0.0, "pri and bandwidth must be > 0");
  require(transmit_power > 0.0 && tx_gain > 0.0 && eff_area > 0.0,
          "transmit_power, tx_gain and eff_area must be > 0");
  require(noise_density > 0.0 && carrier > 0.0, "noise_density and carrier must be > 0");
  require(num_range_bins * sample_period() <= pri * (1.0 + 1e-12),
          "range bins do not fit in one PRI (N * T_s > T_p)");
}

void TargetScene::validate(const RadarConfig& config) const {
  std::set<std::pair<int, int>> seen;
  for (const auto& t : targets) {
    if (t.range_bin < 0 || t.range_bin >= config.num_range_bins) {
      throw std::invalid_argument("target range bin " + std::to_string(t.range_bin) +
                                  " is off the grid");
    }
    if (t.doppler_bin < 0 || t.doppler_bin >= config.num_pulses) {
      throw std::invalid_argument("target Doppler bin " + std::to_string(t.doppler_bin) +
                                  " is off the grid");
    }
    if (!(t.rcs >= 0.0)) throw std::invalid_argument("target rcs must be >= 0");
    if (!seen.emplace(t.range_bin, t.doppler_bin).second) {
      throw std::invalid_argument("duplicate target at (u=" + std::to_string(t.range_bin) +
                                  ", v=" + std::to_string(t.doppler_bin) +
                                  "): delay-Doppler pairs must be unique");
    }
  }
}

TargetKinematics kinematics(const RadarConfig& config, const Target& target) {
  TargetKinematics k;
  k.delay = target.range_bin * config.sample_period();
  k.range = k.delay * kSpeedOfLight / 2.0;
  k.doppler = static_cast<double>(target.doppler_bin) / (config.num_pulses * config.pri);
  k.velocity = k.doppler * kSpeedOfLight / (2.0 * config.carrier);
  return k;
}

double radar_equation(const RadarConfig& config, double sigma_rcs, double distance) {
  if (!(distance > 0.0)) throw std::invalid_argument("radar_equation: distance must be > 0");
  const double spread = 4.0 * std::numbers::pi * distance * distance;
  return (config.transmit_power * config.tx_gain / spread) * (sigma_rcs * config.eff_area / spread);
}

double bin_center_distance(const RadarConfig& config, int n) {
  return (2.0 * n + 1.0) * config.sample_period() * kSpeedOfLight / 4.0;
}

Snr bin_snr(const RadarConfig& config, double sigma_rcs, int n) {
  if (n < 0 || n >= config.num_range_bins) throw std::invalid_argument("bin_snr: n off the grid");
  const double d = bin_center_distance(config, n);
  const double four_pi_sq = 16.0 * std::numbers::pi * std::numbers::pi;
  return Snr(config.num_pulses / config.noise_variance() * config.transmit_power *
             config.tx_gain * sigma_rcs * config.eff_area / (four_pi_sq * std::pow(d, 4)));
}

double transmit_power_for_snr(const RadarConfig& config, double sigma_rcs, int n, Snr target) {
  RadarConfig unit = config;
  unit.transmit_power = 1.0;
  return target.linear() / bin_snr(unit, sigma_rcs, n).linear();
}

ComplexMatrix synthesize_slow_time(const RadarConfig& config, const TargetScene& scene,
                                   bool noise_on, std::uint64_t seed) {
  config.validate();
  scene.validate(config);
  const int rows = config.num_range_bins;
  const int m_pulses = config.num_pulses;
  ComplexMatrix out(rows, m_pulses);
  for (const auto& t : scene.targets) {
    const double beta = radar_equation(config, t.rcs, bin_center_distance(config, t.range_bin));
    const Complex scaled = std::sqrt(beta) * t.amplitude;
    for (int m = 0; m < m_pulses; ++m) {
      const auto phase_index = (static_cast<long long>(m) * t.doppler_bin) % m_pulses;
      const double angle = -2.0 * std::numbers::pi * static_cast<double>(phase_index) / m_pulses;
      out(t.range_bin, m) += scaled * std::polar(1.0, angle);
    }
  }
  if (noise_on) {
    const double sd = std::sqrt(config.noise_variance());
    for (int n = 0; n < rows; ++n) {
      for (int m = 0; m < m_pulses; ++m) {
        const auto cell = static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(m_pulses) +
                          static_cast<std::uint64_t>(m);
        RandomStream stream(derive_seed(seed, cell));
        out(n, m) += sd * stream.complex_normal();
      }
    }
  }
  return out;
}

RangeDopplerGrid slow_time_dft(const ComplexMatrix& slow_time) {
  const int rows = slow_time.rows();
  const int m_pulses = slow_time.cols();
  if (m_pulses < 1) throw std::invalid_argument("slow_time_dft: need at least one pulse");
  std::vector<Complex> twiddle(static_cast<std::size_t>(m_pulses));
  for (int j = 0; j < m_pulses; ++j) {
    twiddle[static_cast<std::size_t>(j)] =
        std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(j) / m_pulses);
  }
  const double scale = 1.0 / std::sqrt(static_cast<double>(m_pulses));
  RangeDopplerGrid grid;
  grid.values = ComplexMatrix(rows, m_pulses);
  for (int n = 0; n < rows; ++n) {
    for (int k = 0; k < m_pulses; ++k) {
      Complex acc{};
      for (int m = 0; m < m_pulses; ++m) {
        const auto idx = (static_cast<long long>(k) * m) % m_pulses;
        acc += slow_time(n, m) * twiddle[static_cast<std::size_t>(idx)];
      }
      grid.values(n, k) = acc * scale;
    }
  }
  return grid;
}

RangeDopplerGrid normalize_observation(const RangeDopplerGrid& grid, const RadarConfig& config,
                                       double sigma_rcs) {
  config.validate();
  if (grid.values.rows() != config.num_range_bins || grid.values.cols() != config.num_pulses) {
    throw std::invalid_argument("normalize_observation: grid dimensions do not match config");
  }
  RangeDopplerGrid out = grid;
  const double inv_sd = 1.0 / std::sqrt(config.noise_variance());
  for (auto& v : out.values.data()) v *= inv_sd;
  out.per_bin_snr.resize(static_cast<std::size_t>(config.num_range_bins));
  for (int n = 0; n < config.num_range_bins; ++n) {
    out.per_bin_snr[static_cast<std::size_t>(n)] = bin_snr(config, sigma_rcs, n).linear();
  }
  return out;
}

TargetScene parse_scene(std::istream& in) {
  TargetScene scene;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(trim(field));
    if (fields.size() != 5) {
      throw SceneParseError(line_no, "expected 5 fields u,v,re_h,im_h,sigma_rcs, got " +
                                         std::to_string(fields.size()));
    }
    Target t;
    try {
      std::size_t used = 0;
      auto whole = [&](const std::string& s, auto parse) {
        auto value = parse(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return value;
      };
      t.range_bin = whole(fields[0], [](const std::string& s, std::size_t* p) { return std::stoi(s, p); });
      t.doppler_bin = whole(fields[1], [](const std::string& s, std::size_t* p) { return std::stoi(s, p); });
      const double re = whole(fields[2], [](const std::string& s, std::size_t* p) { return std::stod(s, p); });
      const double im = whole(fields[3], [](const std::string& s, std::size_t* p) { return std::stod(s, p); });
      t.amplitude = {re, im};
      t.rcs = whole(fields[4], [](const std::string& s, std::size_t* p) { return std::stod(s, p); });
    } catch (const std::exception&) {
      throw SceneParseError(line_no, "malformed numeric field in '" + line + "'");
    }
    if (t.range_bin < 0 || t.doppler_bin < 0) {
      throw SceneParseError(line_no, "bin indices must be non-negative");
    }
    scene.targets.push_back(t);
  }
  return scene;
}

void write_grid_csv(std::ostream& out, const RangeDopplerGrid& grid) {
  out << "n,k,re,im\n";
  char buf[96];
  for (int n = 0; n < grid.values.rows(); ++n) {
    for (int k = 0; k < grid.values.cols(); ++k) {
      const Complex v = grid.values(n, k);
      std::snprintf(buf, sizeof buf, "%d,%d,%.12g,%.12g\n", n, k, v.real(), v.imag());
      out << buf;
    }
  }
}

EquivalenceReport bg_equivalence_check(const RadarConfig& config, const TargetPrior& prior,
                                       double sigma_rcs, int cpis, std::uint64_t seed) {
  config.validate();
  prior.validate_interior();
  if (cpis < 1) throw std::invalid_argument("bg_equivalence_check: cpis must be >= 1");
  const int rows = config.num_range_bins;
  const int cols = config.num_pulses;
  const double sigma_t = std::sqrt(prior.sigma_t_sq);

  std::vector<Snr> snrs;
  for (int n = 0; n < rows; ++n) snrs.push_back(bin_snr(config, sigma_rcs, n));

  double mean = 0.0;
  double m2 = 0.0;
  std::size_t count = 0;
  for (int cpi = 0; cpi < cpis; ++cpi) {
    RandomStream scene_stream(derive_seed(seed, 2 * static_cast<std::uint64_t>(cpi)));
    TargetScene scene;
    for (int n = 0; n < rows; ++n) {
      for (int k = 0; k < cols; ++k) {
        const bool present = scene_stream.uniform() < prior.gamma;
        const Complex amplitude = prior.mu_t + sigma_t * scene_stream.complex_normal();
        if (present) scene.targets.push_back({n, k, amplitude, sigma_rcs});
      }
    }
    const auto slow = synthesize_slow_time(
        config, scene, true, derive_seed(seed, 2 * static_cast<std::uint64_t>(cpi) + 1));
    const auto grid = normalize_observation(slow_time_dft(slow), config, sigma_rcs);
    for (int n = 0; n < rows; ++n) {
      for (int k = 0; k < cols; ++k) {
        const double term =
            -detail::kLog2e * log_received_density(grid.values(n, k), prior, snrs[static_cast<std::size_t>(n)]);
        ++count;
        const double delta = term - mean;
        mean += delta / static_cast<double>(count);
        m2 += delta * (term - mean);
      }
    }
  }
  EquivalenceReport report;
  report.samples = count;
  report.mc_bits = mean - std::log2(std::numbers::pi * std::numbers::e);
  report.mc_stderr = std::sqrt(m2 / static_cast<double>(count - 1) / static_cast<double>(count));
  double exact = 0.0;
  for (const auto& s : snrs) exact += sensing_rate_exact(prior, s).bits;
  report.exact_bits = exact / rows;
  return report;
}

}  // namespace isac::radar
