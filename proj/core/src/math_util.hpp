#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

namespace isac::detail {

inline constexpr double kLog2e = std::numbers::log2e;
inline constexpr double kLn2 = std::numbers::ln2;

/// log of the circular complex Gaussian CN(mean, var) density at x.
inline double log_cn_density(std::complex<double> x, std::complex<double> mean, double var) {
  return -std::norm(x - mean) / var - std::log(std::numbers::pi * var);
}

inline double log_add_exp(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(-std::abs(a - b)));
}

/// 1 / (1 + exp(-t)) without overflow.
inline double logistic(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

/// log(1 + exp(t)) without overflow.
inline double softplus(double t) {
  if (t > 0.0) return t + std::log1p(std::exp(-t));
  return std::log1p(std::exp(t));
}

/// -p log2 p with 0 log 0 = 0.
inline double entropy_term(double p) { return p > 0.0 ? -p * std::log2(p) : 0.0; }

}  // namespace isac::detail
