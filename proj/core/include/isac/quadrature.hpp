#pragma once

// Adaptive Gauss-Kronrod integration in one and two dimensions, plus a fixed
// Gauss-Legendre panel rule. Node tables come from Boost.Math; the adaptive
// driver is a global bisection scheme (largest-error interval first).

#include <algorithm>
#include <cmath>
#include <queue>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace isac {

/// Thrown when an integral fails to reach its requested tolerance.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double achieved, double requested)
      : std::runtime_error(what + " (achieved error " + std::to_string(achieved) +
                           ", requested " + std::to_string(requested) + ")"),
        achieved_(achieved),
        requested_(requested) {}

  [[nodiscard]] double achieved() const noexcept { return achieved_; }
  [[nodiscard]] double requested() const noexcept { return requested_; }

 private:
  double achieved_;
  double requested_;
};

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  int evaluations = 0;
};

struct QuadOptions {
  double abs_tol = 1e-9;
  double rel_tol = 1e-10;
  int max_intervals = 2000;
  bool throw_on_failure = true;
};

namespace detail {

/// 21-point Kronrod rule on [-1, 1]: non-negative abscissae, Kronrod and
/// embedded 10-point Gauss weights (index 0 is the centre).
struct KronrodRule {
  std::span<const double> abscissa;
  std::span<const double> kronrod_weights;
  std::span<const double> gauss_weights;
};
const KronrodRule& kronrod21();

/// 16-point Gauss-Legendre rule on [-1, 1] (non-negative half).
struct GaussRule {
  std::span<const double> abscissa;
  std::span<const double> weights;
};
const GaussRule& gauss_legendre16();

template <typename F>
QuadResult kronrod_panel(F&& f, double a, double b) {
  // QUADPACK-style error estimate: |K - G| scaled against the integrand's
  // absolute variation, floored at a few ulps of the absolute integral.
  const auto& rule = kronrod21();
  const std::size_t n = rule.abscissa.size();
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double fm[11];
  double fp[11];
  fm[0] = fp[0] = f(centre);
  double kronrod = fp[0] * rule.kronrod_weights[0];
  double gauss = 0.0;  // 10-point Gauss rule has no centre node
  double resabs = std::abs(kronrod);
  for (std::size_t i = 1; i < n; ++i) {
    const double dx = half * rule.abscissa[i];
    fm[i] = f(centre - dx);
    fp[i] = f(centre + dx);
    const double sum = fm[i] + fp[i];
    kronrod += rule.kronrod_weights[i] * sum;
    resabs += rule.kronrod_weights[i] * (std::abs(fm[i]) + std::abs(fp[i]));
    if (i % 2 == 1) gauss += rule.gauss_weights[i / 2] * sum;
  }
  const double mean = 0.5 * kronrod;
  double resasc = rule.kronrod_weights[0] * std::abs(fp[0] - mean);
  for (std::size_t i = 1; i < n; ++i) {
    resasc += rule.kronrod_weights[i] * (std::abs(fm[i] - mean) + std::abs(fp[i] - mean));
  }
  resabs *= std::abs(half);
  resasc *= std::abs(half);
  double err = std::abs((kronrod - gauss) * half);
  if (resasc != 0.0 && err != 0.0) {
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  }
  err = std::max(err, 50.0 * 2.220446049250313e-16 * resabs);
  return {kronrod * half, err, static_cast<int>(2 * n - 1)};
}

}  // namespace detail

/// Globally adaptive integral of f over [a, b].
template <typename F>
QuadResult integrate(F&& f, double a, double b, const QuadOptions& opt = {}) {
  if (a == b) return {};
  struct Interval {
    double a, b, value, error;
    bool operator<(const Interval& o) const { return error < o.error; }
  };
  std::priority_queue<Interval> heap;
  auto first = detail::kronrod_panel(f, a, b);
  heap.push({a, b, first.value, first.error});
  double total = first.value;
  double total_err = first.error;
  int evals = first.evaluations;
  int intervals = 1;
  auto converged = [&] {
    return total_err <= std::max(opt.abs_tol, opt.rel_tol * std::abs(total));
  };
  while (!converged() && intervals < opt.max_intervals) {
    const Interval top = heap.top();
    heap.pop();
    const double mid = 0.5 * (top.a + top.b);
    if (!(mid > top.a && mid < top.b)) {
      heap.push(top);
      break;  // interval at machine resolution
    }
    const auto left = detail::kronrod_panel(f, top.a, mid);
    const auto right = detail::kronrod_panel(f, mid, top.b);
    evals += left.evaluations + right.evaluations;
    total += left.value + right.value - top.value;
    total_err += left.error + right.error - top.error;
    heap.push({top.a, mid, left.value, left.error});
    heap.push({mid, top.b, right.value, right.error});
    ++intervals;
  }
  // Re-sum to shed accumulated cancellation from the running updates.
  total = 0.0;
  total_err = 0.0;
  while (!heap.empty()) {
    total += heap.top().value;
    total_err += heap.top().error;
    heap.pop();
  }
  if (opt.throw_on_failure && !converged()) {
    throw QuadratureError("adaptive quadrature did not converge", total_err,
                          std::max(opt.abs_tol, opt.rel_tol * std::abs(total)));
  }
  return {total, total_err, evals};
}

/// Iterated integral over the rectangle [ax, bx] x [ay, by] of f(x, y).
/// The inner integral runs at a tenth of the outer tolerance.
template <typename F>
QuadResult integrate_2d(F&& f, double ax, double bx, double ay, double by,
                        const QuadOptions& opt = {}) {
  QuadOptions inner = opt;
  inner.abs_tol = opt.abs_tol / (10.0 * std::max(1.0, bx - ax));
  inner.rel_tol = opt.rel_tol / 10.0;
  inner.throw_on_failure = false;
  double inner_err = 0.0;
  int evals = 0;
  auto outer_fn = [&](double x) {
    const auto r = integrate([&](double y) { return f(x, y); }, ay, by, inner);
    inner_err = std::max(inner_err, r.error);
    evals += r.evaluations;
    return r.value;
  };
  auto out = integrate(outer_fn, ax, bx, opt);
  out.error += inner_err * (bx - ax);
  out.evaluations = evals;
  return out;
}

/// Fixed 16-point Gauss-Legendre rule on [a, b].
template <typename F>
double gauss_legendre_panel(F&& f, double a, double b) {
  const auto& rule = detail::gauss_legendre16();
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.abscissa.size(); ++i) {
    const double dx = half * rule.abscissa[i];
    sum += rule.weights[i] * (f(centre - dx) + f(centre + dx));
  }
  return sum * half;
}

}  // namespace isac
