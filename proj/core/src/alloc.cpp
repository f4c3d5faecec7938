#include "isac/alloc.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "isac/estimator.hpp"
#include "isac/rate.hpp"
#include "math_util.hpp"

namespace isac {

namespace {

using detail::kLog2e;

constexpr int kMaxBisection = 60;

void check_lambda(double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw std::invalid_argument("lambda must lie in [0, 1], got " + std::to_string(lambda));
  }
}

double clamp_lambda(double lambda) { return std::clamp(lambda, kLambdaEps, 1.0 - kLambdaEps); }

}  // namespace

std::string_view to_string(Backend backend) {
  return backend == Backend::exact ? "exact" : "approx";
}

Backend parse_backend(std::string_view name) {
  if (name == "exact") return Backend::exact;
  if (name == "approx") return Backend::approx;
  throw std::invalid_argument("unknown backend '" + std::string(name) +
                              "' (expected exact or approx)");
}

std::string_view to_string(Boundary boundary) {
  switch (boundary) {
    case Boundary::interior:
      return "interior";
    case Boundary::lower:
      return "lower";
    case Boundary::upper:
      return "upper";
  }
  return "unknown";
}

void AllocationBudget::validate() const {
  if (!(total_bandwidth > 0.0) || !std::isfinite(total_bandwidth)) {
    throw std::invalid_argument("total_bandwidth must be finite and > 0");
  }
  if (!(rho_c > 0.0) || !(rho_s > 0.0)) throw std::invalid_argument("rho_c and rho_s must be > 0");
  if (!(w_s >= 0.0) || !(w_c >= 0.0) || !(w_s + w_c > 0.0)) {
    throw std::invalid_argument("weights must be >= 0 with w_s + w_c > 0");
  }
  if (!(d_max > 0.0)) throw std::invalid_argument("d_max must be > 0");
  if (num_pulses < 1) throw std::invalid_argument("num_pulses must be >= 1");
  prior.validate_interior();
}

double comm_rate(const AllocationBudget& budget, double lambda) {
  check_lambda(lambda);
  const double share = 1.0 - lambda;
  if (share <= 0.0) return 0.0;
  return share * budget.total_bandwidth * std::log2(1.0 + budget.rho_c / share);
}

double bin_rate(const TargetPrior& prior, Snr snr, Backend backend) {
  return backend == Backend::exact ? sensing_rate_exact(prior, snr).bits
                                   : sensing_rate_approx(prior, snr);
}

double bin_rate_slope(const TargetPrior& prior, Snr snr, Backend backend) {
  return backend == Backend::exact ? kLog2e * mmse(prior, snr)
                                   : sensing_rate_approx_slope(prior, snr);
}

double sensing_rate_proxy(const AllocationBudget& budget, double lambda, Backend backend) {
  check_lambda(lambda);
  if (lambda <= 0.0) return 0.0;
  const double l = std::max(lambda, kLambdaEps);
  return l * budget.total_bandwidth * bin_rate(budget.prior, Snr(budget.rho_s / l), backend);
}

double weighted_sum(const AllocationBudget& budget, double lambda, Backend backend) {
  return (budget.w_s * sensing_rate_proxy(budget, lambda, backend) +
          budget.w_c * comm_rate(budget, lambda)) /
         budget.total_bandwidth;
}

double kkt_residual(const AllocationBudget& budget, double lambda, Backend backend) {
  check_lambda(lambda);
  const double l = clamp_lambda(lambda);
  const double b = budget.total_bandwidth;
  const Snr snr(budget.rho_s / l);
  double sensing = 0.0;
  if (budget.w_s > 0.0) {
    sensing = b * (bin_rate(budget.prior, snr, backend) -
                   snr.linear() * bin_rate_slope(budget.prior, snr, backend));
  }
  const double share = 1.0 - l;
  const double comm = -b * std::log2(1.0 + budget.rho_c / share) +
                      b * budget.rho_c * kLog2e / (share + budget.rho_c);
  return budget.w_s * sensing + budget.w_c * comm;
}

int range_bins(const AllocationBudget& budget, double lambda) {
  check_lambda(lambda);
  const double n = std::floor(2.0 * budget.d_max * lambda * budget.total_bandwidth /
                              radar::kSpeedOfLight);
  return std::max(1, static_cast<int>(n));
}

double range_bin_snr(const AllocationBudget& budget, double lambda, int n) {
  const int bins = range_bins(budget, lambda);
  if (n < 0 || n >= bins) throw std::invalid_argument("range_bin_snr: n off the grid");
  const double ratio = (2.0 * bins - 1.0) / (2.0 * n + 1.0);
  return budget.rho_s / std::max(lambda, kLambdaEps) * std::pow(ratio, 4);
}

double sensing_rate_binned(const AllocationBudget& budget, double lambda, Backend backend) {
  check_lambda(lambda);
  if (lambda <= 0.0) return 0.0;
  const int bins = range_bins(budget, lambda);
  double sum = 0.0;
  for (int n = 0; n < bins; ++n) {
    sum += bin_rate(budget.prior, Snr(range_bin_snr(budget, lambda, n)), backend);
  }
  return lambda * budget.total_bandwidth * sum / bins;
}

double rho_s_from_radar(const radar::RadarConfig& config, double sigma_rcs, double d_max) {
  config.validate();
  if (!(d_max > 0.0)) throw std::invalid_argument("d_max must be > 0");
  const double four_pi_sq = 16.0 * std::numbers::pi * std::numbers::pi;
  return config.num_pulses / config.noise_variance() * config.transmit_power * config.tx_gain *
         sigma_rcs * config.eff_area / (four_pi_sq * std::pow(d_max, 4));
}

SweepRow sweep_row(const AllocationBudget& budget, double lambda, Backend backend) {
  SweepRow row;
  row.lambda = lambda;
  row.comm_rate = comm_rate(budget, lambda);
  row.sensing_rate = sensing_rate_proxy(budget, lambda, backend);
  row.weighted_sum =
      (budget.w_s * row.sensing_rate + budget.w_c * row.comm_rate) / budget.total_bandwidth;
  row.kkt_residual = kkt_residual(budget, lambda, backend);
  return row;
}

AllocationResult optimize(const AllocationBudget& budget, double tol, Backend backend) {
  budget.validate();
  if (!(tol > 0.0)) throw std::invalid_argument("optimize: tol must be > 0");
  AllocationResult out;
  out.backend = backend;

  double lo = kLambdaEps;
  double hi = 1.0 - kLambdaEps;
  double r_lo = kkt_residual(budget, lo, backend);
  double r_hi = kkt_residual(budget, hi, backend);
  if (r_lo <= 0.0 && r_hi > 0.0) {
    throw NonMonotoneResidual("KKT residual rises from " + std::to_string(r_lo) + " at lambda=eps to " +
                              std::to_string(r_hi) + " at lambda=1-eps");
  }

  auto finish = [&](double lambda, Boundary boundary) {
    out.lambda_star = lambda;
    out.boundary = boundary;
    const auto row = sweep_row(budget, lambda, backend);
    out.comm_rate = row.comm_rate;
    out.sensing_rate = row.sensing_rate;
    out.weighted_sum = row.weighted_sum;
    return out;
  };
  if (r_lo <= 0.0) return finish(0.0, Boundary::lower);
  if (r_hi >= 0.0) return finish(1.0, Boundary::upper);

  while (hi - lo > tol && out.iterations < kMaxBisection) {
    const double mid = 0.5 * (lo + hi);
    const double r_mid = kkt_residual(budget, mid, backend);
    ++out.iterations;
    if (r_mid > r_lo || r_mid < r_hi) {
      throw NonMonotoneResidual("KKT residual at lambda=" + std::to_string(mid) + " (" +
                                std::to_string(r_mid) + ") leaves the bracket [" +
                                std::to_string(r_hi) + ", " + std::to_string(r_lo) + "]");
    }
    if (r_mid > 0.0) {
      lo = mid;
      r_lo = r_mid;
    } else {
      hi = mid;
      r_hi = r_mid;
    }
  }
  return finish(0.5 * (lo + hi), Boundary::interior);
}

std::vector<SweepRow> tradeoff_sweep(const AllocationBudget& budget, std::size_t n_points,
                                     Backend backend) {
  budget.validate();
  if (n_points < 2) throw std::invalid_argument("tradeoff_sweep: n_points must be >= 2");
  std::vector<SweepRow> rows;
  rows.reserve(n_points);
  for (std::size_t i = 0; i < n_points; ++i) {
    const double lambda =
        i + 1 == n_points ? 1.0 : static_cast<double>(i) / static_cast<double>(n_points - 1);
    rows.push_back(sweep_row(budget, lambda, backend));
  }
  return rows;
}

}  // namespace isac
