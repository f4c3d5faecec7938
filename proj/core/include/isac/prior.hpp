#pragma once

// Bernoulli-Gaussian target law for a single range-Doppler bin and the
// mixture-Gaussian observation it induces through a unit-noise channel.

#include <complex>
#include <cstdint>
#include <vector>

#include "isac/rng.hpp"

namespace isac {

using Complex = std::complex<double>;

/// Linear power ratio. Construct from dB with Snr::from_db; internal math is linear.
class Snr {
 public:
  constexpr Snr() = default;
  explicit Snr(double linear);

  static Snr from_db(double db);

  [[nodiscard]] double linear() const noexcept { return linear_; }
  [[nodiscard]] double db() const;
  [[nodiscard]] double amplitude() const;  // sqrt(snr)

 private:
  double linear_ = 0.0;
};

double db_to_linear(double db);
double linear_to_db(double linear);

/// Presence probability gamma, amplitude mean mu_t, amplitude variance sigma_t_sq.
struct TargetPrior {
  double gamma = 0.5;
  Complex mu_t{1.0, 0.0};
  double sigma_t_sq = 0.0;

  /// Accepts gamma in [0, 1]. Throws std::invalid_argument otherwise.
  void validate() const;
  /// Accepts gamma in (0, 1) only, for rate operations dividing by gamma(1-gamma).
  void validate_interior() const;

  [[nodiscard]] bool degenerate() const noexcept { return gamma <= 0.0 || gamma >= 1.0; }
};

struct PriorMoments {
  Complex mean;
  double variance = 0.0;
};

PriorMoments prior_moments(const TargetPrior& prior);

/// Point mass at the origin plus the continuous Gaussian part, evaluated at x.
struct SignalDensity {
  double point_mass = 0.0;   // weight of the atom at 0
  double continuous = 0.0;   // gamma * CN(mu_t, sigma_t_sq) density at x
  double second_atom = 0.0;  // weight of the atom at mu_t when sigma_t_sq == 0
};

SignalDensity signal_density(Complex x, const TargetPrior& prior);

/// Natural log of f_Y(y) for Y = sqrt(snr) X + Z, Z ~ CN(0, 1).
double log_received_density(Complex y, const TargetPrior& prior, Snr snr);
double received_density(Complex y, const TargetPrior& prior, Snr snr);

/// Mixture components of Y: absent ~ CN(0, 1), present ~ CN(sqrt(snr) mu_t, snr sigma_t_sq + 1).
struct ObservationLaw {
  double gamma = 0.0;
  Complex present_mean;
  double present_var = 1.0;
};

ObservationLaw observation_law(const TargetPrior& prior, Snr snr);

struct SignalDraw {
  Complex x;
  Complex y;
};

/// Seeded sampler of (x, y) pairs. Each instance owns its stream.
class SignalSampler {
 public:
  SignalSampler(const TargetPrior& prior, Snr snr, std::uint64_t seed);

  SignalDraw next();

 private:
  TargetPrior prior_;
  double sqrt_snr_;
  double sigma_t_;
  RandomStream stream_;
};

std::vector<SignalDraw> sample_signal(const TargetPrior& prior, Snr snr, std::size_t count,
                                      std::uint64_t seed);

}  // namespace isac
