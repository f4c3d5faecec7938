#include "isac/detector.hpp"

#include <boost/math/distributions/non_central_chi_squared.hpp>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "isac/estimator.hpp"

namespace isac {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Below this, snr * sigma_t_sq is treated as zero and the acceptance region
// as a half-plane; the disk would have radius beyond 1e6 noise deviations.
constexpr double kFlatCurvature = 1e-12;

// P(|W - c|^2 <= r^2) for W ~ CN(mean, var): 2|W - c|^2 / var is
// non-central chi-square with 2 degrees of freedom.
double disk_probability(Complex mean, double var, Complex centre, double radius) {
  const double x = 2.0 * radius * radius / var;
  const double lambda = 2.0 * std::norm(mean - centre) / var;
  if (lambda == 0.0) return -std::expm1(-0.5 * x);
  boost::math::non_central_chi_squared dist(2.0, lambda);
  return boost::math::cdf(dist, x);
}

double disk_exterior_probability(Complex mean, double var, Complex centre, double radius) {
  const double x = 2.0 * radius * radius / var;
  const double lambda = 2.0 * std::norm(mean - centre) / var;
  if (lambda == 0.0) return std::exp(-0.5 * x);
  boost::math::non_central_chi_squared dist(2.0, lambda);
  return boost::math::cdf(boost::math::complement(dist, x));
}

}  // namespace

DetectorThreshold::DetectorThreshold(double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw std::invalid_argument("detector threshold must be finite and > 0");
  }
  log_delta_ = std::log(delta);
}

DetectorThreshold DetectorThreshold::from_log(double log_delta) {
  if (std::isnan(log_delta)) throw std::invalid_argument("log threshold is NaN");
  return DetectorThreshold(log_delta, 0);
}

DetectorThreshold DetectorThreshold::map(const TargetPrior& prior) {
  prior.validate_interior();
  return from_log(std::log1p(-prior.gamma) - std::log(prior.gamma));
}

DetectorThreshold DetectorThreshold::for_presence_level(const TargetPrior& prior, double level) {
  prior.validate_interior();
  if (!(level > 0.0 && level < 1.0)) {
    throw std::invalid_argument("presence level must lie in (0, 1)");
  }
  const double logit = std::log(level) - std::log1p(-level);
  return from_log(std::log1p(-prior.gamma) - std::log(prior.gamma) + logit);
}

double DetectorThreshold::delta() const { return std::exp(log_delta_); }

Decision np_decide(Complex y, const TargetPrior& prior, Snr snr, DetectorThreshold threshold) {
  prior.validate_interior();
  return log_likelihood_ratio(y, prior, snr) > threshold.log_delta() ? Decision::present
                                                                     : Decision::absent;
}

Decision map_decide(Complex y, const TargetPrior& prior, Snr snr) {
  return np_decide(y, prior, snr, DetectorThreshold::map(prior));
}

Decision presence_level_decide(Complex y, const TargetPrior& prior, Snr snr, double level) {
  prior.validate_interior();
  return posterior_presence(y, prior, snr) > level ? Decision::present : Decision::absent;
}

AcceptanceRegion acceptance_region(const TargetPrior& prior, Snr snr,
                                   DetectorThreshold threshold) {
  prior.validate_interior();
  using Kind = AcceptanceRegion::Kind;
  const auto law = observation_law(prior, snr);
  const Complex m = law.present_mean;
  const double curvature = law.present_var - 1.0;
  const double log_delta = threshold.log_delta();
  AcceptanceRegion region;

  if (curvature <= kFlatCurvature) {
    // log LR = 2 Re(y conj(m)) - |m|^2
    const double norm_m = std::abs(m);
    if (norm_m == 0.0) {
      region.kind = 0.0 > log_delta ? Kind::everywhere : Kind::nowhere;
      return region;
    }
    region.kind = Kind::half_plane;
    region.direction = m / norm_m;
    region.offset = (log_delta + norm_m * norm_m) / (2.0 * norm_m);
    return region;
  }

  // log LR = c |y - y0|^2 - |m|^2 / (v - 1) - log v, c = 1 - 1/v, y0 = -m / (v - 1)
  const double v = law.present_var;
  const double c = curvature / v;
  const double r_sq = (log_delta + std::log(v) + std::norm(m) / curvature) / c;
  region.centre = -m / curvature;
  if (r_sq <= 0.0) {
    region.kind = Kind::everywhere;
    return region;
  }
  region.kind = Kind::disk_exterior;
  region.radius = std::sqrt(r_sq);
  return region;
}

ErrorProbs error_probs(const TargetPrior& prior, Snr snr, DetectorThreshold threshold) {
  using Kind = AcceptanceRegion::Kind;
  const auto region = acceptance_region(prior, snr, threshold);
  const auto law = observation_law(prior, snr);
  ErrorProbs out;
  switch (region.kind) {
    case Kind::everywhere:
      out = {1.0, 0.0};
      break;
    case Kind::nowhere:
      out = {0.0, 1.0};
      break;
    case Kind::half_plane: {
      // Projection onto the unit normal is N(., 1/2) under both hypotheses.
      const double shift = (law.present_mean * std::conj(region.direction)).real();
      out.p_fa = 0.5 * std::erfc(region.offset);
      out.p_md = 0.5 * std::erfc(shift - region.offset);
      break;
    }
    case Kind::disk_exterior:
      out.p_fa = disk_exterior_probability(Complex{}, 1.0, region.centre, region.radius);
      out.p_md = disk_probability(law.present_mean, law.present_var, region.centre, region.radius);
      break;
  }
  return out;
}

std::vector<RocPoint> roc_curve(const TargetPrior& prior, Snr snr, int n_points) {
  prior.validate_interior();
  if (n_points < 2) throw std::invalid_argument("roc_curve: n_points must be >= 2");
  constexpr double kLogSpan = 40.0;
  std::vector<RocPoint> out;
  out.reserve(static_cast<std::size_t>(n_points) + 2);
  out.push_back({-kInf, 1.0, 1.0});
  for (int i = 0; i < n_points; ++i) {
    const double log_delta = -kLogSpan + 2.0 * kLogSpan * i / (n_points - 1);
    const auto probs = error_probs(prior, snr, DetectorThreshold::from_log(log_delta));
    out.push_back({log_delta, probs.p_fa, probs.p_d()});
  }
  out.push_back({kInf, 0.0, 0.0});
  return out;
}

DetectorThreshold threshold_for_pmd(const TargetPrior& prior, Snr snr, double alpha, double tol) {
  prior.validate_interior();
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("threshold_for_pmd: alpha must lie in (0, 1)");
  }
  auto p_md = [&](double log_delta) {
    return error_probs(prior, snr, DetectorThreshold::from_log(log_delta)).p_md;
  };
  double lo = -40.0;
  double hi = 40.0;
  while (p_md(lo) > alpha && lo > -700.0) lo *= 2.0;
  while (p_md(hi) < alpha && hi < 700.0) hi *= 2.0;
  if (p_md(lo) > alpha || p_md(hi) < alpha) {
    throw InfeasibleThreshold("misdetection level " + std::to_string(alpha) +
                              " is not attainable for this prior and snr");
  }
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double value = p_md(mid);
    if (std::abs(value - alpha) <= tol) return DetectorThreshold::from_log(mid);
    if (value < alpha) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo < 1e-13 * std::max(1.0, std::abs(mid))) break;
  }
  throw InfeasibleThreshold("misdetection probability jumps across " + std::to_string(alpha) +
                            "; no threshold attains it");
}

}  // namespace isac
