#include "isac/prior.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "math_util.hpp"

namespace isac {

Snr::Snr(double linear) : linear_(linear) {
  if (!(linear >= 0.0) || !std::isfinite(linear)) {
    throw std::invalid_argument("snr must be finite and >= 0, got " + std::to_string(linear));
  }
}

Snr Snr::from_db(double db) { return Snr(db_to_linear(db)); }

double Snr::db() const { return linear_to_db(linear_); }

double Snr::amplitude() const { return std::sqrt(linear_); }

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

void TargetPrior::validate() const {
  if (!(gamma >= 0.0 && gamma <= 1.0)) {
    throw std::invalid_argument("gamma must lie in [0, 1], got " + std::to_string(gamma));
  }
  if (!(sigma_t_sq >= 0.0) || !std::isfinite(sigma_t_sq)) {
    throw std::invalid_argument("sigma_t_sq must be finite and >= 0");
  }
  if (!std::isfinite(mu_t.real()) || !std::isfinite(mu_t.imag())) {
    throw std::invalid_argument("mu_t must be finite");
  }
}

void TargetPrior::validate_interior() const {
  validate();
  if (degenerate()) {
    throw std::invalid_argument("gamma must lie strictly inside (0, 1), got " +
                                std::to_string(gamma));
  }
}

PriorMoments prior_moments(const TargetPrior& prior) {
  prior.validate();
  const double g = prior.gamma;
  return {g * prior.mu_t, g * (1.0 - g) * std::norm(prior.mu_t) + g * prior.sigma_t_sq};
}

SignalDensity signal_density(Complex x, const TargetPrior& prior) {
  prior.validate();
  SignalDensity out;
  out.point_mass = 1.0 - prior.gamma;
  if (prior.sigma_t_sq > 0.0) {
    out.continuous = prior.gamma * std::exp(detail::log_cn_density(x, prior.mu_t, prior.sigma_t_sq));
  } else {
    out.second_atom = prior.gamma;
  }
  return out;
}

ObservationLaw observation_law(const TargetPrior& prior, Snr snr) {
  return {prior.gamma, snr.amplitude() * prior.mu_t, snr.linear() * prior.sigma_t_sq + 1.0};
}

double log_received_density(Complex y, const TargetPrior& prior, Snr snr) {
  prior.validate();
  const auto law = observation_law(prior, snr);
  const double log_absent = detail::log_cn_density(y, Complex{}, 1.0);
  const double log_present = detail::log_cn_density(y, law.present_mean, law.present_var);
  if (prior.gamma <= 0.0) return log_absent;
  if (prior.gamma >= 1.0) return log_present;
  return detail::log_add_exp(std::log1p(-prior.gamma) + log_absent,
                             std::log(prior.gamma) + log_present);
}

double received_density(Complex y, const TargetPrior& prior, Snr snr) {
  return std::exp(log_received_density(y, prior, snr));
}

SignalSampler::SignalSampler(const TargetPrior& prior, Snr snr, std::uint64_t seed)
    : prior_(prior),
      sqrt_snr_(snr.amplitude()),
      sigma_t_(std::sqrt(prior.sigma_t_sq)),
      stream_(seed) {
  prior_.validate();
}

SignalDraw SignalSampler::next() {
  // Fixed draw count per sample (presence, amplitude, noise) keeps the
  // stream aligned across priors.
  const bool present = stream_.uniform() < prior_.gamma;
  const Complex amplitude = prior_.mu_t + sigma_t_ * stream_.complex_normal();
  const Complex noise = stream_.complex_normal();
  const Complex x = present ? amplitude : Complex{};
  return {x, sqrt_snr_ * x + noise};
}

std::vector<SignalDraw> sample_signal(const TargetPrior& prior, Snr snr, std::size_t count,
                                      std::uint64_t seed) {
  if (count == 0) throw std::invalid_argument("sample_signal: count must be >= 1");
  SignalSampler sampler(prior, snr, seed);
  std::vector<SignalDraw> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(sampler.next());
  return out;
}

}  // namespace isac
