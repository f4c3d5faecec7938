#include "cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "isac/alloc.hpp"
#include "isac/detector.hpp"
#include "isac/estimator.hpp"
#include "isac/quadrature.hpp"
#include "isac/radar_chain.hpp"
#include "isac/rate.hpp"
#include "isac/rng.hpp"

namespace isac::cli {

namespace {

// printf-style append with the CSV number format (%.12g throughout).
void appendf(std::string& out, const char* fmt, ...) {
  char buf[512];
  va_list args;
  va_start(args, fmt);
  const int n = std::vsnprintf(buf, sizeof buf, fmt, args);
  va_end(args);
  if (n > 0) out.append(buf, static_cast<std::size_t>(std::min<int>(n, sizeof buf - 1)));
}

std::string rate_csv(const Run& run) {
  const auto& s = run.settings;
  std::string out = config_header(run.config);
  out += "snr_db,exact,lower,approx,mc,mc_stderr,detection_bits,fluctuation_bits\n";
  for (std::size_t i = 0; i < s.snr.size(); ++i) {
    const Snr snr = s.snr[i];
    const double exact = sensing_rate_exact(s.prior, snr).bits;
    const double lower = sensing_rate_lower(s.prior, snr).bits;
    const double approx = sensing_rate_approx(s.prior, snr);
    const auto mc = mc_mutual_information(s.prior, snr, s.samples, derive_seed(s.seed, i));
    const auto parts = rate_decomposition(s.prior, snr);
    appendf(out, "%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g\n", s.snr_db[i], exact, lower,
            approx, mc.bits, mc.stderr_bits, parts.detection_bits, parts.fluctuation_bits);
  }
  return out;
}

std::string mmse_csv(const Run& run) {
  const auto& s = run.settings;
  std::string out = config_header(run.config);
  out += "snr_db,mmse,linear_mmse\n";
  const double var = prior_moments(s.prior).variance;
  for (std::size_t i = 0; i < s.snr.size(); ++i) {
    const double snr = s.snr[i].linear();
    appendf(out, "%.12g,%.12g,%.12g\n", s.snr_db[i], mmse(s.prior, s.snr[i]),
            var / (1.0 + snr * var));
  }
  return out;
}

std::string roc_csv(const Run& run) {
  const auto& s = run.settings;
  const Snr snr = s.snr.front();
  const auto map_threshold = DetectorThreshold::map(s.prior);
  const auto map = error_probs(s.prior, snr, map_threshold);
  std::string out = config_header(run.config);
  appendf(out, "# map: log_delta=%.12g p_fa=%.12g p_d=%.12g h_np=%.12g\n",
          map_threshold.log_delta(), map.p_fa, map.p_d(),
          detection_error_entropy(s.prior.gamma, map.p_fa, map.p_md));
  out += "delta,p_fa,p_d,h_np\n";
  for (const auto& p : roc_curve(s.prior, snr, s.roc_points)) {
    appendf(out, "%.12g,%.12g,%.12g,%.12g\n", std::exp(p.log_delta), p.p_fa, p.p_d,
            detection_error_entropy(s.prior.gamma, p.p_fa, 1.0 - p.p_d));
  }
  return out;
}

void allocate_files(const Run& run, const std::string& path, CommandResult& result) {
  const auto& s = run.settings;
  const auto best = optimize(s.budget, s.tol, s.backend);
  auto rows = tradeoff_sweep(s.budget, s.sweep_points, s.backend);
  const auto star = sweep_row(s.budget, best.lambda_star, s.backend);
  const auto pos = std::lower_bound(rows.begin(), rows.end(), star.lambda,
                                    [](const SweepRow& r, double l) { return r.lambda < l; });
  const auto marker = static_cast<std::size_t>(pos - rows.begin());
  rows.insert(pos, star);

  std::string record;
  appendf(record, "lambda_star=%.12g\n", best.lambda_star);
  appendf(record, "comm_rate=%.12g\n", best.comm_rate);
  appendf(record, "sensing_rate=%.12g\n", best.sensing_rate);
  appendf(record, "weighted_sum=%.12g\n", best.weighted_sum);
  appendf(record, "boundary=%s\n", std::string(to_string(best.boundary)).c_str());
  appendf(record, "boundary_flag=%d\n", best.boundary_flag() ? 1 : 0);
  appendf(record, "backend=%s\n", std::string(to_string(best.backend)).c_str());
  appendf(record, "iterations=%d\n", best.iterations);

  std::string csv = config_header(run.config);
  appendf(csv, "# marker_row=%zu\n", marker);
  appendf(csv, "# lambda_star=%.12g\n", best.lambda_star);
  csv += "lambda,r_c,r_s_proxy,weighted_sum,kkt_residual\n";
  for (const auto& r : rows) {
    appendf(csv, "%.12g,%.12g,%.12g,%.12g,%.12g\n", r.lambda, r.comm_rate, r.sensing_rate,
            r.weighted_sum, r.kkt_residual);
  }
  result.files.push_back({path, std::move(csv)});
  result.files.push_back({path + ".result", config_header(run.config) + record});
  result.summary += path + "\n" + record;
}

void simulate_files(const Run& run, const std::string& path, CommandResult& result) {
  const auto& s = run.settings;
  std::ifstream in(s.scene_path);
  if (!in) throw ConfigError("cannot open scene file '" + s.scene_path + "'");
  const auto scene = radar::parse_scene(in);
  scene.validate(s.radar);

  const auto slow = radar::synthesize_slow_time(s.radar, scene, s.noise, s.seed);
  const auto grid = radar::normalize_observation(radar::slow_time_dft(slow), s.radar, s.sigma_rcs);

  std::string csv = config_header(run.config);
  std::ostringstream body;
  radar::write_grid_csv(body, grid);
  csv += body.str();

  std::string report;
  double peak = 0.0;
  for (const auto& v : grid.values.data()) peak = std::max(peak, std::abs(v));
  std::size_t nonzero = 0;
  for (const auto& v : grid.values.data()) {
    if (std::abs(v) > 1e-9 * peak) ++nonzero;
  }
  appendf(report, "targets=%zu\n", scene.targets.size());
  appendf(report, "noise=%s\n", s.noise ? "on" : "off");
  appendf(report, "nonzero_cells=%zu\n", nonzero);
  for (const auto& t : scene.targets) {
    // Normalised amplitude of a target is sqrt(snr_U) H, with snr_U at its own rcs.
    const Complex expected = radar::bin_snr(s.radar, t.rcs, t.range_bin).amplitude() * t.amplitude;
    const Complex observed = grid.values(t.range_bin, t.doppler_bin);
    appendf(report, "target u=%d v=%d expected=%.12g%+.12gj observed=%.12g%+.12gj\n", t.range_bin,
            t.doppler_bin, expected.real(), expected.imag(), observed.real(), observed.imag());
  }
  if (s.equivalence_cpis > 0) {
    const auto eq = radar::bg_equivalence_check(s.radar, s.prior, s.sigma_rcs, s.equivalence_cpis,
                                                derive_seed(s.seed, 0x5eedULL));
    appendf(report, "equivalence_samples=%zu\n", eq.samples);
    appendf(report, "equivalence_mc_bits=%.12g\n", eq.mc_bits);
    appendf(report, "equivalence_mc_stderr=%.12g\n", eq.mc_stderr);
    appendf(report, "equivalence_exact_bits=%.12g\n", eq.exact_bits);
    appendf(report, "equivalence_z=%.12g\n", eq.z_score());
  }
  result.files.push_back({path, std::move(csv)});
  result.files.push_back({path + ".report", config_header(run.config) + report});
  result.summary += path + "\n" + report;
}

}  // namespace

std::string config_header(const ResolvedConfig& config) {
  std::string out = "# isac " + std::string(to_string(config.command)) + "\n# config-begin\n";
  for (const auto& line : config.echo_lines()) out += "# " + line + "\n";
  out += "# config-end\n";
  return out;
}

CommandResult execute(const ResolvedConfig& config, const std::string& out_path) {
  CommandResult result;
  for (const auto& run : expand_runs(config)) {
    const auto path = suffixed_path(out_path, run.suffix);
    switch (config.command) {
      case Command::rate:
        result.files.push_back({path, rate_csv(run)});
        result.summary += path + "\n";
        break;
      case Command::mmse:
        result.files.push_back({path, mmse_csv(run)});
        result.summary += path + "\n";
        break;
      case Command::roc:
        result.files.push_back({path, roc_csv(run)});
        result.summary += path + "\n";
        break;
      case Command::allocate:
        allocate_files(run, path, result);
        break;
      case Command::simulate:
        simulate_files(run, path, result);
        break;
    }
  }
  return result;
}

int exit_code_for(const std::exception& error) {
  if (dynamic_cast<const QuadratureError*>(&error) != nullptr ||
      dynamic_cast<const NonMonotoneResidual*>(&error) != nullptr ||
      dynamic_cast<const InfeasibleThreshold*>(&error) != nullptr) {
    return kExitNumerical;
  }
  if (dynamic_cast<const radar::SceneParseError*>(&error) != nullptr ||
      dynamic_cast<const ConfigError*>(&error) != nullptr ||
      dynamic_cast<const std::invalid_argument*>(&error) != nullptr) {
    return kExitUsage;
  }
  return kExitNumerical;
}

}  // namespace isac::cli
