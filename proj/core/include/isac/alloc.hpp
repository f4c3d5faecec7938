#pragma once

// Radar/communication bandwidth split. A fraction lambda of the total band B
// goes to sensing and 1 - lambda to a Shannon-rate link. The sensing side uses
// the proxy lambda B R_bin(rho_s / lambda), i.e. every bin at the SNR of the
// farthest one.

#include <cstddef>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "isac/prior.hpp"
#include "isac/radar_chain.hpp"

namespace isac {

enum class Backend { exact, approx };

std::string_view to_string(Backend backend);
/// Accepts "exact" or "approx"; throws std::invalid_argument otherwise.
Backend parse_backend(std::string_view name);

struct AllocationBudget {
  double total_bandwidth = 200e6;  // B [Hz]
  double rho_c = 3.1622776601683795;   // comm SNR at lambda = 0
  double rho_s = 31.622776601683793;   // radar SNR of the last range bin at lambda = 1
  double w_s = 5.0;
  double w_c = 1.0;
  TargetPrior prior{0.05, {1.0, 0.0}, 0.1};
  double d_max = 10e3;  // [m]
  int num_pulses = 64;

  void validate() const;
};

/// Endpoint clamp: lambda is kept in [kLambdaEps, 1 - kLambdaEps] wherever an
/// expression would divide by lambda or 1 - lambda.
inline constexpr double kLambdaEps = 1e-9;

/// (1 - lambda) B log2(1 + rho_c / (1 - lambda)) in bits/s; 0 at lambda = 1.
double comm_rate(const AllocationBudget& budget, double lambda);

/// Per-bin rate R_bin(snr) and its snr-derivative for the chosen backend.
double bin_rate(const TargetPrior& prior, Snr snr, Backend backend);
double bin_rate_slope(const TargetPrior& prior, Snr snr, Backend backend);

/// lambda B R_bin(rho_s / lambda) in bits/s; 0 at lambda = 0.
double sensing_rate_proxy(const AllocationBudget& budget, double lambda,
                          Backend backend = Backend::approx);

/// (w_s R_s + w_c R_c) / B in bits/s/Hz.
double weighted_sum(const AllocationBudget& budget, double lambda,
                    Backend backend = Backend::approx);

/// Derivative of w_s R_s + w_c R_c with respect to lambda, in bits/s.
/// Positive means more radar bandwidth still pays.
double kkt_residual(const AllocationBudget& budget, double lambda,
                    Backend backend = Backend::approx);

/// Range-bin count max(1, floor(2 d_max lambda B / c)) at bandwidth lambda B.
int range_bins(const AllocationBudget& budget, double lambda);

/// Per-bin SNR of bin n when N = range_bins(lambda): the last bin sits at
/// rho_s / lambda and nearer bins gain with the fourth power of distance.
double range_bin_snr(const AllocationBudget& budget, double lambda, int n);

/// Sensing rate with every range bin at its own SNR, lambda B mean_n R_bin(snr_n).
/// Upper-bounds the proxy.
double sensing_rate_binned(const AllocationBudget& budget, double lambda,
                           Backend backend = Backend::approx);

/// rho_s for a radar whose full band is config.bandwidth, with the last range
/// bin at distance d_max.
double rho_s_from_radar(const radar::RadarConfig& config, double sigma_rcs, double d_max);

enum class Boundary { interior, lower, upper };
std::string_view to_string(Boundary boundary);

struct AllocationResult {
  double lambda_star = 0.0;
  double comm_rate = 0.0;     // bits/s
  double sensing_rate = 0.0;  // proxy, bits/s
  double weighted_sum = 0.0;  // bits/s/Hz
  Boundary boundary = Boundary::interior;
  int iterations = 0;
  Backend backend = Backend::approx;

  [[nodiscard]] bool boundary_flag() const noexcept { return boundary != Boundary::interior; }
};

/// The residual broke the strictly-decreasing pattern bisection relies on.
class NonMonotoneResidual : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bisection on the KKT residual over [eps, 1 - eps]. Returns a boundary when
/// the residual keeps one sign across the bracket.
AllocationResult optimize(const AllocationBudget& budget, double tol = 1e-6,
                          Backend backend = Backend::approx);

struct SweepRow {
  double lambda = 0.0;
  double comm_rate = 0.0;
  double sensing_rate = 0.0;
  double weighted_sum = 0.0;
  double kkt_residual = 0.0;  // evaluated at the clamped lambda
};

SweepRow sweep_row(const AllocationBudget& budget, double lambda, Backend backend);

/// Uniform lambda grid over [0, 1].
std::vector<SweepRow> tradeoff_sweep(const AllocationBudget& budget, std::size_t n_points,
                                     Backend backend = Backend::approx);

}  // namespace isac
