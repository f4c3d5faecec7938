#include "isac/estimator.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "math_util.hpp"

namespace isac {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Present-component standardisation: Y = m + sqrt(v) t with t ~ CN(0, 1),
// m = sqrt(snr) |mu_t| >= 0 after rotating mu_t onto the real axis.
struct Standardised {
  double mu = 0.0;     // |mu_t|
  double m = 0.0;      // sqrt(snr) |mu_t|
  double v = 1.0;      // snr sigma_t_sq + 1
  double kappa = 0.0;  // sqrt(snr) sigma_t_sq / v
  double log_prior_odds = 0.0;
};

Standardised standardise(const TargetPrior& prior, Snr snr) {
  Standardised s;
  s.mu = std::abs(prior.mu_t);
  s.m = snr.amplitude() * s.mu;
  s.v = snr.linear() * prior.sigma_t_sq + 1.0;
  s.kappa = snr.amplitude() * prior.sigma_t_sq / s.v;
  s.log_prior_odds = std::log(prior.gamma) - std::log1p(-prior.gamma);
  return s;
}

}  // namespace

double log_likelihood_ratio(Complex y, const TargetPrior& prior, Snr snr) {
  const auto law = observation_law(prior, snr);
  return -std::log(law.present_var) - std::norm(y - law.present_mean) / law.present_var +
         std::norm(y);
}

double presence_log_odds(Complex y, const TargetPrior& prior, Snr snr) {
  prior.validate();
  if (prior.gamma <= 0.0) return -kInf;
  if (prior.gamma >= 1.0) return kInf;
  return std::log(prior.gamma) - std::log1p(-prior.gamma) + log_likelihood_ratio(y, prior, snr);
}

double posterior_presence(Complex y, const TargetPrior& prior, Snr snr) {
  prior.validate();
  if (prior.gamma <= 0.0) return 0.0;
  if (prior.gamma >= 1.0) return 1.0;
  return detail::logistic(presence_log_odds(y, prior, snr));
}

PosteriorStats posterior_stats(Complex y, const TargetPrior& prior, Snr snr) {
  const double s = snr.linear();
  const double denom = 1.0 + s * prior.sigma_t_sq;
  PosteriorStats out;
  out.gamma_hat = posterior_presence(y, prior, snr);
  out.mu_hat = prior.mu_t + (snr.amplitude() * prior.sigma_t_sq / denom) *
                                (y - snr.amplitude() * prior.mu_t);
  out.sigma_hat_sq = prior.sigma_t_sq / denom;
  return out;
}

Complex mmse_estimate(Complex y, const TargetPrior& prior, Snr snr) {
  const auto post = posterior_stats(y, prior, snr);
  return post.gamma_hat * post.mu_hat;
}

Complex linear_mmse_estimate(Complex y, const TargetPrior& prior, Snr snr) {
  const auto mom = prior_moments(prior);
  const double s = snr.linear();
  const double gain = snr.amplitude() * mom.variance / (s * mom.variance + 1.0);
  return mom.mean + gain * (y - snr.amplitude() * mom.mean);
}

Complex map_gated_estimate(Complex y, const TargetPrior& prior, Snr snr) {
  if (presence_log_odds(y, prior, snr) > 0.0) return posterior_stats(y, prior, snr).mu_hat;
  return {};
}

double mmse(const TargetPrior& prior, Snr snr, const MmseOptions& opt) {
  prior.validate();
  const double g = prior.gamma;
  if (g <= 0.0) return 0.0;
  const double sigma_hat_sq = prior.sigma_t_sq / (1.0 + snr.linear() * prior.sigma_t_sq);
  if (g >= 1.0) return sigma_hat_sq;

  const auto st = standardise(prior, snr);
  if (st.mu == 0.0 && st.kappa == 0.0) return g * sigma_hat_sq;

  // Eight standard deviations of the present component leave < 1e-27 of
  // Gaussian mass outside the box.
  constexpr double kRadius = 8.0;
  const double sqrt_v = std::sqrt(st.v);
  const double base = st.log_prior_odds - std::log(st.v) + st.m * st.m;
  QuadOptions qopt;
  qopt.abs_tol = opt.abs_tol;
  qopt.rel_tol = opt.rel_tol;

  double detection_term = 0.0;
  if (st.kappa == 0.0 && st.v == 1.0) {
    // Log-odds depend on Re(t) only; Im(t) integrates out exactly.
    auto integrand = [&](double tr) {
      const double log_odds = base + 2.0 * st.m * tr;
      return detail::logistic(-log_odds) * std::exp(-tr * tr);
    };
    const auto r = integrate(integrand, -kRadius, kRadius, qopt);
    detection_term = st.mu * st.mu * r.value / std::sqrt(std::numbers::pi);
  } else {
    const double ks = st.kappa * sqrt_v;
    auto integrand = [&](double tr, double ti) {
      const double t2 = tr * tr + ti * ti;
      const double log_odds = base + 2.0 * st.m * sqrt_v * tr + (st.v - 1.0) * t2;
      const double re = st.mu + ks * tr;
      const double im = ks * ti;
      return detail::logistic(-log_odds) * (re * re + im * im) * std::exp(-t2);
    };
    // Symmetric in Im(t): integrate the upper half-plane and double.
    const auto r = integrate_2d(integrand, -kRadius, kRadius, 0.0, kRadius, qopt);
    detection_term = 2.0 * r.value / std::numbers::pi;
  }
  return g * sigma_hat_sq + g * detection_term;
}

}  // namespace isac
