#pragma once

// Bayesian posterior of a Bernoulli-Gaussian bin observed through
// Y = sqrt(snr) X + Z, and the MMSE estimator built from it.

#include "isac/prior.hpp"
#include "isac/quadrature.hpp"

namespace isac {

struct PosteriorStats {
  double gamma_hat = 0.0;  // P(X != 0 | Y = y)
  Complex mu_hat;          // E[X | Y = y, X != 0]
  double sigma_hat_sq = 0.0;
};

/// log f(y | present) - log f(y | absent). Prior-free; this is what the NP
/// detector thresholds.
double log_likelihood_ratio(Complex y, const TargetPrior& prior, Snr snr);

/// log(gamma_hat / (1 - gamma_hat)); +/-infinity for gamma in {1, 0}.
double presence_log_odds(Complex y, const TargetPrior& prior, Snr snr);

double posterior_presence(Complex y, const TargetPrior& prior, Snr snr);

PosteriorStats posterior_stats(Complex y, const TargetPrior& prior, Snr snr);

/// E[X | Y = y] = gamma_hat(y) * mu_hat(y).
Complex mmse_estimate(Complex y, const TargetPrior& prior, Snr snr);

/// Linear MMSE estimator; a competitor used for optimality checks.
Complex linear_mmse_estimate(Complex y, const TargetPrior& prior, Snr snr);

/// mu_hat(y) when the MAP detector declares presence, 0 otherwise.
Complex map_gated_estimate(Complex y, const TargetPrior& prior, Snr snr);

struct MmseOptions {
  double abs_tol = 1e-13;
  double rel_tol = 1e-11;
};

/// E|X - E[X|Y]|^2. The Var(X|Y) average is split as
///   gamma * sigma_hat^2 + gamma * E_present[(1 - gamma_hat) |mu_hat|^2],
/// the second term by adaptive quadrature in coordinates standardised to the
/// present-component Gaussian (reduced to one dimension when sigma_t_sq = 0).
/// Throws QuadratureError on non-convergence.
double mmse(const TargetPrior& prior, Snr snr, const MmseOptions& opt = {});

}  // namespace isac
