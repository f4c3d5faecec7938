#include "isac/rate.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "isac/estimator.hpp"
#include "isac/quadrature.hpp"
#include "math_util.hpp"

namespace isac {

namespace {

using detail::kLog2e;

// Smallest positive panel edge for the I-MMSE integral. mmse(s) is flat to
// within s * E|X|^2 of its snr = 0 value below this.
constexpr double kPanelFloor = 1e-6;

double exact_integral(const TargetPrior& prior, double snr, int panels) {
  auto f = [&](double s) { return mmse(prior, Snr(std::max(s, 0.0))); };
  if (snr <= kPanelFloor) {
    double sum = 0.0;
    for (int k = 0; k < panels; ++k) {
      sum += gauss_legendre_panel(f, snr * k / panels, snr * (k + 1) / panels);
    }
    return sum;
  }
  // [0, floor] then log-spaced edges floor * (snr / floor)^(k / (panels - 1)).
  const double ratio = std::log(snr / kPanelFloor);
  double sum = gauss_legendre_panel(f, 0.0, kPanelFloor);
  double left = kPanelFloor;
  for (int k = 1; k < panels; ++k) {
    const double right = (k == panels - 1)
                             ? snr
                             : kPanelFloor * std::exp(ratio * static_cast<double>(k) / (panels - 1));
    sum += gauss_legendre_panel(f, left, right);
    left = right;
  }
  return sum;
}

// Mixture component expectations of the posterior presence entropy, in
// coordinates standardised to each component (mu_t rotated onto the real axis).
struct ComponentGeometry {
  double m = 0.0;  // sqrt(snr) |mu_t|
  double v = 1.0;  // snr sigma_t_sq + 1
  double log_prior_odds = 0.0;
};

double conditional_presence_entropy_nats(const ComponentGeometry& g) {
  constexpr double kRadius = 8.0;
  QuadOptions opt;
  opt.abs_tol = 1e-12;
  opt.rel_tol = 1e-10;
  const double sqrt_v = std::sqrt(g.v);
  const double log_v = std::log(g.v);

  // Absent component, y = t:  L = l0 - log v + |t|^2 (1 - 1/v) + 2 m tr / v - m^2 / v
  // Present component, y = m + sqrt(v) t:  L = l0 - log v + m^2 + 2 m sqrt(v) tr + (v - 1) |t|^2
  const double a0 = g.log_prior_odds - log_v - g.m * g.m / g.v;
  const double b0 = 2.0 * g.m / g.v;
  const double c0 = 1.0 - 1.0 / g.v;
  const double a1 = g.log_prior_odds - log_v + g.m * g.m;
  const double b1 = 2.0 * g.m * sqrt_v;
  const double c1 = g.v - 1.0;
  const double w_absent = 1.0 - detail::logistic(g.log_prior_odds);
  const double w_present = detail::logistic(g.log_prior_odds);

  if (g.v == 1.0) {
    auto f = [&](double tr) {
      const double e = std::exp(-tr * tr);
      return w_absent * detail::softplus(a0 + b0 * tr) * e +
             w_present * detail::softplus(-(a1 + b1 * tr)) * e;
    };
    return integrate(f, -kRadius, kRadius, opt).value / std::sqrt(std::numbers::pi);
  }
  auto f = [&](double tr, double ti) {
    const double t2 = tr * tr + ti * ti;
    const double e = std::exp(-t2);
    return w_absent * detail::softplus(a0 + b0 * tr + c0 * t2) * e +
           w_present * detail::softplus(-(a1 + b1 * tr + c1 * t2)) * e;
  };
  return 2.0 * integrate_2d(f, -kRadius, kRadius, 0.0, kRadius, opt).value / std::numbers::pi;
}

struct ApproxTerms {
  double kernel;  // exp(-snr |mu|^2 / (2 + snr sigma^2))
  double d;       // 2 + snr sigma^2
  double u_absent;
  double u_present;
};

ApproxTerms approx_terms(const TargetPrior& prior, double s) {
  const double g = prior.gamma;
  const double a = s * prior.sigma_t_sq;
  const double d = 2.0 + a;
  const double kernel = std::exp(-s * std::norm(prior.mu_t) / d);
  return {kernel, d, g / (1.0 - g) * (2.0 / d) * kernel,
          (1.0 - g) / g * (2.0 * (1.0 + a) / d) * kernel};
}

}  // namespace

std::string_view to_string(RateMethod method) {
  switch (method) {
    case RateMethod::exact_quadrature:
      return "exact-quadrature";
    case RateMethod::lower_bound:
      return "lower-bound";
    case RateMethod::approximation:
      return "approximation";
    case RateMethod::monte_carlo:
      return "monte-carlo";
  }
  return "unknown";
}

double binary_entropy(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("binary_entropy: p must lie in [0, 1]");
  return detail::entropy_term(p) + detail::entropy_term(1.0 - p);
}

double fluctuation_information(const TargetPrior& prior, Snr snr) {
  return prior.gamma * std::log2(1.0 + snr.linear() * prior.sigma_t_sq);
}

RateEstimate sensing_rate_exact(const TargetPrior& prior, Snr snr, const ExactRateOptions& opt) {
  prior.validate_interior();
  RateEstimate out{0.0, 0.0, RateMethod::exact_quadrature};
  const double s = snr.linear();
  if (s == 0.0) return out;
  int panels = opt.initial_panels;
  double previous = kLog2e * exact_integral(prior, s, panels);
  while (true) {
    panels *= 2;
    const double current = kLog2e * exact_integral(prior, s, panels);
    if (std::abs(current - previous) < opt.convergence_bits) {
      out.bits = current;
      return out;
    }
    if (panels >= opt.max_panels) {
      throw QuadratureError("I-MMSE panel integration did not converge",
                            std::abs(current - previous), opt.convergence_bits);
    }
    previous = current;
  }
}

RateEstimate mc_mutual_information(const TargetPrior& prior, Snr snr, std::size_t n_samples,
                                   std::uint64_t seed) {
  prior.validate();
  if (n_samples < 1000) {
    throw std::invalid_argument("mc_mutual_information: n_samples must be >= 1000");
  }
  SignalSampler sampler(prior, snr, seed);
  // Welford accumulation of -log2 f_Y(y).
  double mean = 0.0;
  double m2 = 0.0;
  for (std::size_t i = 0; i < n_samples; ++i) {
    const double term = -kLog2e * log_received_density(sampler.next().y, prior, snr);
    const double delta = term - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (term - mean);
  }
  const double variance = m2 / static_cast<double>(n_samples - 1);
  return {mean - std::log2(std::numbers::pi * std::numbers::e),
          std::sqrt(variance / static_cast<double>(n_samples)), RateMethod::monte_carlo};
}

double detection_information(const TargetPrior& prior, Snr snr) {
  prior.validate_interior();
  ComponentGeometry geom;
  geom.m = snr.amplitude() * std::abs(prior.mu_t);
  geom.v = snr.linear() * prior.sigma_t_sq + 1.0;
  geom.log_prior_odds = std::log(prior.gamma) - std::log1p(-prior.gamma);
  if (geom.m == 0.0 && geom.v == 1.0) return 0.0;
  const double residual = kLog2e * conditional_presence_entropy_nats(geom);
  return std::max(0.0, binary_entropy(prior.gamma) - residual);
}

RateBreakdown rate_decomposition(const TargetPrior& prior, Snr snr) {
  RateBreakdown out;
  out.detection_bits = detection_information(prior, snr);
  out.fluctuation_bits = fluctuation_information(prior, snr);
  out.total_bits = out.detection_bits + out.fluctuation_bits;
  return out;
}

double detection_error_entropy(double gamma, double p_fa, double p_md) {
  return binary_entropy(gamma) + (1.0 - gamma) * binary_entropy(p_fa) +
         gamma * binary_entropy(p_md) -
         binary_entropy((1.0 - gamma) * p_fa + gamma * (1.0 - p_md));
}

LowerBoundResult sensing_rate_lower(const TargetPrior& prior, Snr snr,
                                    std::optional<DetectorThreshold> threshold) {
  prior.validate_interior();
  const auto delta = threshold.value_or(DetectorThreshold::map(prior));
  LowerBoundResult out;
  out.probs = error_probs(prior, snr, delta);
  const double fluctuation = fluctuation_information(prior, snr);
  const double bound = binary_entropy(prior.gamma) -
                       detection_error_entropy(prior.gamma, out.probs.p_fa, out.probs.p_md) +
                       fluctuation;
  out.clamped = bound < fluctuation;
  out.bits = out.clamped ? fluctuation : bound;
  return out;
}

double approx_conditional_entropy(const TargetPrior& prior, Snr snr) {
  prior.validate_interior();
  const double g = prior.gamma;
  const auto t = approx_terms(prior, snr.linear());
  return (1.0 - g) * std::log2(1.0 + t.u_absent) + g * std::log2(1.0 + t.u_present);
}

double sensing_rate_approx(const TargetPrior& prior, Snr snr) {
  return binary_entropy(prior.gamma) - approx_conditional_entropy(prior, snr) +
         fluctuation_information(prior, snr);
}

double sensing_rate_approx_slope(const TargetPrior& prior, Snr snr) {
  prior.validate_interior();
  const double g = prior.gamma;
  const double s = snr.linear();
  const double sig = prior.sigma_t_sq;
  const double mu2 = std::norm(prior.mu_t);
  const auto t = approx_terms(prior, s);
  const double d = t.d;
  // d kernel / ds = -2 |mu|^2 / d^2 * kernel
  const double dkernel = -2.0 * mu2 / (d * d) * t.kernel;
  const double du_absent = g / (1.0 - g) * 2.0 * (dkernel / d - t.kernel * sig / (d * d));
  const double du_present =
      (1.0 - g) / g * 2.0 * (t.kernel * sig / (d * d) + (1.0 + s * sig) / d * dkernel);
  const double dh = ((1.0 - g) * du_absent / (1.0 + t.u_absent) +
                     g * du_present / (1.0 + t.u_present)) * kLog2e;
  const double dfluct = g * sig / (1.0 + s * sig) * kLog2e;
  return dfluct - dh;
}

double gaussian_overlap(Complex mu_i, double var_i, Complex mu_j, double var_j) {
  const double var = var_i + var_j;
  return std::exp(-std::norm(mu_i - mu_j) / var) / (std::numbers::pi * var);
}

double sensing_rate_approx_from_overlaps(const TargetPrior& prior, Snr snr) {
  prior.validate_interior();
  const auto law = observation_law(prior, snr);
  const double w[2] = {1.0 - prior.gamma, prior.gamma};
  const Complex mu[2] = {Complex{}, law.present_mean};
  const double var[2] = {1.0, law.present_var};
  double h_low = 0.0;
  for (int i = 0; i < 2; ++i) {
    double inner = 0.0;
    for (int j = 0; j < 2; ++j) inner += w[j] * gaussian_overlap(mu[i], var[i], mu[j], var[j]);
    h_low -= w[i] * std::log(inner);
  }
  return kLog2e * (h_low - std::log(2.0 * std::numbers::pi));
}

}  // namespace isac
