#pragma once

// Neyman-Pearson and MAP presence detectors for one range-Doppler bin.
//
// The NP test declares "present" when the likelihood ratio
// f(y | present) / f(y | absent) exceeds delta. Completing the square in the
// log-ratio shows the acceptance region is a half-plane when
// snr * sigma_t_sq == 0 and the exterior of a disk otherwise, so both error
// probabilities reduce to Gaussian tails or non-central chi-square CDFs.

#include <stdexcept>
#include <vector>

#include "isac/prior.hpp"

namespace isac {

enum class Decision { absent, present };

class DetectorThreshold {
 public:
  /// delta must be finite and > 0 (use from_log for extreme values).
  explicit DetectorThreshold(double delta);
  static DetectorThreshold from_log(double log_delta);
  /// delta = (1 - gamma) / gamma, the MAP operating point.
  static DetectorThreshold map(const TargetPrior& prior);
  /// Equivalent NP threshold for "gamma_hat(y) > level".
  static DetectorThreshold for_presence_level(const TargetPrior& prior, double level);

  [[nodiscard]] double log_delta() const noexcept { return log_delta_; }
  [[nodiscard]] double delta() const;

 private:
  explicit DetectorThreshold(double log_delta, int /*tag*/) : log_delta_(log_delta) {}
  double log_delta_ = 0.0;
};

struct ErrorProbs {
  double p_fa = 0.0;
  double p_md = 0.0;

  [[nodiscard]] double p_d() const noexcept { return 1.0 - p_md; }
  /// gamma * P_MD + (1 - gamma) * P_FA
  [[nodiscard]] double p_e(double gamma) const noexcept {
    return gamma * p_md + (1.0 - gamma) * p_fa;
  }
};

/// Ties at exact likelihood-ratio equality decide "absent".
Decision np_decide(Complex y, const TargetPrior& prior, Snr snr, DetectorThreshold threshold);
Decision map_decide(Complex y, const TargetPrior& prior, Snr snr);
/// Decision of the rule "gamma_hat(y) > level".
Decision presence_level_decide(Complex y, const TargetPrior& prior, Snr snr, double level);

/// Shape of the acceptance region {y : log LR(y) > log delta}.
struct AcceptanceRegion {
  enum class Kind { everywhere, nowhere, half_plane, disk_exterior };
  Kind kind = Kind::nowhere;
  // half_plane: Re(y * conj(direction)) > offset, |direction| = 1
  Complex direction{1.0, 0.0};
  double offset = 0.0;
  // disk_exterior: |y - centre| > radius
  Complex centre;
  double radius = 0.0;
};

AcceptanceRegion acceptance_region(const TargetPrior& prior, Snr snr, DetectorThreshold threshold);

ErrorProbs error_probs(const TargetPrior& prior, Snr snr, DetectorThreshold threshold);

struct RocPoint {
  double log_delta = 0.0;  // +/-infinity for the appended endpoints
  double p_fa = 0.0;
  double p_d = 0.0;
};

/// n_points log-spaced thresholds over log(delta) in [-40, 40], with the
/// delta -> 0 and delta -> infinity limits appended exactly. Ordered by
/// increasing delta: (1, 1) first, (0, 0) last.
std::vector<RocPoint> roc_curve(const TargetPrior& prior, Snr snr, int n_points = 512);

/// Thrown when no threshold achieves the requested misdetection level.
class InfeasibleThreshold : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// delta with |P_MD(delta) - alpha| <= tol, by bisection on log(delta).
DetectorThreshold threshold_for_pmd(const TargetPrior& prior, Snr snr, double alpha,
                                    double tol = 1e-7);

}  // namespace isac
