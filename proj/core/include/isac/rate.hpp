#pragma once

// Sensing rate I(X; Y) of one range-Doppler bin, in bits per channel use.
//
// Four routes are provided: the I-MMSE integral (exact), the chain-rule
// decomposition into detection and fluctuation information (exact, different
// quadrature), a detector-based lower bound, and a closed-form approximation
// built from a pairwise-overlap bound on the mixture entropy plus a constant
// offset. A seeded Monte Carlo estimator serves as the independent oracle.

#include <cstdint>
#include <optional>
#include <string_view>

#include "isac/detector.hpp"
#include "isac/prior.hpp"

namespace isac {

enum class RateMethod { exact_quadrature, lower_bound, approximation, monte_carlo };

std::string_view to_string(RateMethod method);

struct RateEstimate {
  double bits = 0.0;
  double stderr_bits = 0.0;  // zero unless method == monte_carlo
  RateMethod method = RateMethod::exact_quadrature;
};

struct RateBreakdown {
  double detection_bits = 0.0;    // I(U; Y)
  double fluctuation_bits = 0.0;  // gamma log2(1 + snr sigma_t_sq)
  double total_bits = 0.0;
};

/// H_b(p) in bits with 0 log 0 = 0.
double binary_entropy(double p);

/// gamma log2(1 + snr sigma_t_sq): information carried by the amplitude
/// once presence is known.
double fluctuation_information(const TargetPrior& prior, Snr snr);

struct ExactRateOptions {
  int initial_panels = 32;
  int max_panels = 1024;
  double convergence_bits = 1e-5;
};

/// log2(e) * integral_0^snr mmse(s) ds on log-spaced Gauss-Legendre panels,
/// doubling the panel count until successive estimates agree.
RateEstimate sensing_rate_exact(const TargetPrior& prior, Snr snr,
                                const ExactRateOptions& opt = {});

/// I = -mean(log2 f_Y(y_i)) - log2(pi e) over seeded draws.
RateEstimate mc_mutual_information(const TargetPrior& prior, Snr snr, std::size_t n_samples,
                                   std::uint64_t seed);

/// I(U; Y) for the binary presence indicator U, by quadrature of the
/// posterior presence entropy under each mixture component.
double detection_information(const TargetPrior& prior, Snr snr);

RateBreakdown rate_decomposition(const TargetPrior& prior, Snr snr);

/// Residual presence uncertainty after an NP detector with the given error rates:
/// H_b(g) + (1-g) H_b(P_FA) + g H_b(P_MD) - H_b((1-g) P_FA + g (1 - P_MD)).
double detection_error_entropy(double gamma, double p_fa, double p_md);

struct LowerBoundResult {
  double bits = 0.0;
  bool clamped = false;  // bound fell below the fluctuation term and was raised to it
  ErrorProbs probs;
};

/// Detector-based lower bound. Defaults to the MAP threshold.
LowerBoundResult sensing_rate_lower(const TargetPrior& prior, Snr snr,
                                    std::optional<DetectorThreshold> threshold = std::nullopt);

/// Closed-form approximation H_b(g) - H_hat(T|Y) + g log2(1 + snr sigma_t_sq).
double sensing_rate_approx(const TargetPrior& prior, Snr snr);

/// Analytic d/dsnr of sensing_rate_approx, in bits per unit snr.
double sensing_rate_approx_slope(const TargetPrior& prior, Snr snr);

/// Approximated conditional entropy H_hat(T|Y) in bits.
double approx_conditional_entropy(const TargetPrior& prior, Snr snr);

/// integral of CN(mu_i, var_i) * CN(mu_j, var_j) over the complex plane.
double gaussian_overlap(Complex mu_i, double var_i, Complex mu_j, double var_j);

/// Overlap-based approximation assembled term by term from gaussian_overlap:
/// -sum_i w_i log sum_j w_j eps_ij - log(2 pi), in bits. Equals
/// sensing_rate_approx algebraically.
double sensing_rate_approx_from_overlaps(const TargetPrior& prior, Snr snr);

}  // namespace isac
