#include <doctest.h>

#include <cmath>
#include <numbers>

#include "isac/quadrature.hpp"

using namespace isac;

TEST_CASE("node tables") {
  const auto& k = detail::kronrod21();
  double ksum = k.kronrod_weights[0];
  for (std::size_t i = 1; i < k.abscissa.size(); ++i) ksum += 2.0 * k.kronrod_weights[i];
  CHECK(ksum == doctest::Approx(2.0).epsilon(1e-15));
  double gsum = 0.0;
  for (std::size_t i = 1; i < k.abscissa.size(); i += 2) gsum += 2.0 * k.gauss_weights[i / 2];
  CHECK(gsum == doctest::Approx(2.0).epsilon(1e-15));

  const auto& g = detail::gauss_legendre16();
  double wsum = 0.0;
  for (double w : g.weights) wsum += 2.0 * w;
  CHECK(wsum == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("one-dimensional integrals") {
  CHECK(integrate([](double x) { return std::exp(-x * x); }, -10.0, 10.0).value ==
        doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-13));
  CHECK(integrate([](double x) { return std::sqrt(x); }, 0.0, 1.0).value ==
        doctest::Approx(2.0 / 3.0).epsilon(1e-10));
  CHECK(integrate([](double x) { return std::cos(x); }, 0.0, std::numbers::pi / 2).value ==
        doctest::Approx(1.0).epsilon(1e-14));
  CHECK(integrate([](double) { return 1.0; }, 2.0, 2.0).value == 0.0);
}

TEST_CASE("two-dimensional integral") {
  const auto r = integrate_2d([](double x, double y) { return std::exp(-(x * x + y * y)); }, -9.0,
                              9.0, -9.0, 9.0);
  CHECK(r.value == doctest::Approx(std::numbers::pi).epsilon(1e-10));
}

TEST_CASE("fixed Gauss-Legendre panel is exact for degree 31") {
  auto poly = [](double x) { return std::pow(x, 31) + 3.0 * std::pow(x, 30); };
  CHECK(gauss_legendre_panel(poly, -1.0, 1.0) == doctest::Approx(6.0 / 31.0).epsilon(1e-13));
}

TEST_CASE("non-convergence is reported") {
  QuadOptions opt;
  opt.max_intervals = 3;
  opt.abs_tol = 1e-15;
  opt.rel_tol = 0.0;
  auto f = [](double x) { return std::sin(1.0 / (x + 1e-3)); };
  CHECK_THROWS_AS(integrate(f, 0.0, 1.0, opt), QuadratureError);
  try {
    integrate(f, 0.0, 1.0, opt);
  } catch (const QuadratureError& e) {
    CHECK(e.achieved() > e.requested());
  }
  opt.throw_on_failure = false;
  CHECK_NOTHROW(integrate(f, 0.0, 1.0, opt));
}
