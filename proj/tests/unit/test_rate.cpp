#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "isac/estimator.hpp"
#include "isac/rate.hpp"
#include "oracles.hpp"

using namespace isac;

namespace {

oracle::Model model(const TargetPrior& p, double snr) {
  return {p.gamma, p.mu_t, p.sigma_t_sq, snr};
}

double ceiling(const TargetPrior& p, Snr snr) {
  return binary_entropy(p.gamma) + fluctuation_information(p, snr);
}

const std::vector<TargetPrior> kPriors = {
    {0.5, {1.0, 0.0}, 0.01}, {0.1, {1.0, 0.0}, 0.01}, {0.9, {1.0, 0.0}, 0.01},
    {0.5, {1.0, 0.0}, 0.1},  {0.5, {1.0, 0.0}, 0.0},  {0.2, {0.6, 0.8}, 1.0},
};

}  // namespace

TEST_CASE("binary entropy") {
  CHECK(binary_entropy(0.5) == 1.0);
  CHECK(binary_entropy(0.0) == 0.0);
  CHECK(binary_entropy(1.0) == 0.0);
  CHECK(binary_entropy(0.3) == doctest::Approx(binary_entropy(0.7)).epsilon(1e-15));
  CHECK(binary_entropy(0.3) == doctest::Approx(oracle::binary_entropy(0.3)).epsilon(1e-15));
  CHECK_THROWS_AS(binary_entropy(1.1), std::invalid_argument);
}

TEST_CASE("fluctuation information") {
  CHECK(fluctuation_information({0.5, {1, 0}, 0.1}, Snr(10.0)) == doctest::Approx(0.5));
  CHECK(fluctuation_information({0.5, {1, 0}, 0.0}, Snr(10.0)) == 0.0);
}

TEST_CASE("exact rate basics") {
  const TargetPrior p{0.5, {1.0, 0.0}, 0.01};
  CHECK(sensing_rate_exact(p, Snr(0.0)).bits == 0.0);
  const auto r = sensing_rate_exact(p, Snr(10.0));
  CHECK(r.stderr_bits == 0.0);
  CHECK(r.method == RateMethod::exact_quadrature);
  CHECK_THROWS_AS((sensing_rate_exact({1.0, {1, 0}, 0.1}, Snr(1.0))), std::invalid_argument);
  CHECK_THROWS_AS((sensing_rate_exact({0.0, {1, 0}, 0.1}, Snr(1.0))), std::invalid_argument);
}

TEST_CASE("exact rate approaches the Gaussian channel as gamma tends to one") {
  const TargetPrior p{1.0 - 1e-9, {1.0, 0.0}, 0.5};
  for (double db : {-10.0, 0.0, 10.0, 20.0}) {
    const Snr s = Snr::from_db(db);
    CHECK(sensing_rate_exact(p, s).bits ==
          doctest::Approx(std::log2(1.0 + s.linear() * 0.5)).epsilon(1e-6));
  }
}

TEST_CASE("exact rate agrees with the entropy oracles") {
  const TargetPrior p{0.5, {1.0, 0.0}, 0.01};
  const Snr snr(10.0);
  const double exact = sensing_rate_exact(p, snr).bits;
  const auto mc = mc_mutual_information(p, snr, 1'000'000, 3);
  CHECK(std::abs(exact - mc.bits) < 4.0 * mc.stderr_bits);

  for (const auto& [q, s] : {std::pair{TargetPrior{0.5, {1.0, 0.0}, 0.01}, 10.0},
                             std::pair{TargetPrior{0.1, {1.0, 0.0}, 0.1}, 3.0},
                             std::pair{TargetPrior{0.7, {0.3, 0.3}, 1.0}, 0.5}}) {
    CHECK(sensing_rate_exact(q, Snr(s)).bits ==
          doctest::Approx(oracle::mutual_information_literal(model(q, s), 2000)).epsilon(1e-4));
  }
}

TEST_CASE("Monte Carlo oracle") {
  const TargetPrior p{0.3, {1.0, 0.0}, 0.2};
  const auto a = mc_mutual_information(p, Snr(4.0), 5000, 11);
  const auto b = mc_mutual_information(p, Snr(4.0), 5000, 11);
  CHECK(a.bits == b.bits);
  CHECK(a.stderr_bits == b.stderr_bits);
  CHECK(a.method == RateMethod::monte_carlo);

  const auto g = mc_mutual_information({1.0, {0.0, 0.0}, 1.0}, Snr(1.0), 200000, 5);
  CHECK(std::abs(g.bits - 1.0) < 4.0 * g.stderr_bits);
  const auto z = mc_mutual_information(p, Snr(0.0), 200000, 5);
  CHECK(std::abs(z.bits) < 4.0 * z.stderr_bits + 1e-12);
  CHECK_THROWS_AS((mc_mutual_information(p, Snr(1.0), 999, 1)), std::invalid_argument);
}

TEST_CASE("detection information") {
  const TargetPrior p{0.5, {1.0, 0.0}, 0.0};
  CHECK(detection_information(p, Snr(0.0)) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(detection_information(p, Snr(1e4)) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(detection_information({0.2, {1.0, 0.0}, 0.0}, Snr(1e4)) ==
        doctest::Approx(binary_entropy(0.2)).epsilon(1e-9));

  // I(U; Y) = E[log2 f(y | u) / f(y)] on the binary-input channel
  for (const auto& q : {p, TargetPrior{0.3, {1.0, 0.0}, 0.5}}) {
    const Snr snr = Snr::from_db(5.0);
    const auto m = model(q, snr.linear());
    oracle::Sampler sampler(m, 44);
    oracle::Running acc;
    for (int i = 0; i < 500000; ++i) {
      const auto d = sampler.next();
      const double cond = d.present ? m.present_density(d.y) : m.absent_density(d.y);
      acc.add(std::log2(cond / m.f_y(d.y)));
    }
    CHECK(std::abs(detection_information(q, snr) - acc.mean) < 4.0 * acc.stderr_());
    CHECK(detection_information(q, snr) <= binary_entropy(q.gamma));
  }
}

TEST_CASE("chain-rule decomposition") {
  const auto flat = rate_decomposition({0.5, {1.0, 0.0}, 0.0}, Snr(3.0));
  CHECK(flat.fluctuation_bits == 0.0);
  CHECK(flat.total_bits == flat.detection_bits);
  const auto fl = rate_decomposition({0.5, {1.0, 0.0}, 0.1}, Snr(10.0));
  CHECK(fl.fluctuation_bits == doctest::Approx(0.5));

  for (const auto& p : kPriors) {
    for (double db : {-10.0, 0.0, 10.0, 25.0}) {
      const Snr s = Snr::from_db(db);
      const auto b = rate_decomposition(p, s);
      CHECK(b.total_bits == doctest::Approx(b.detection_bits + b.fluctuation_bits));
      CHECK(std::abs(b.total_bits - sensing_rate_exact(p, s).bits) <= 1e-3);
    }
  }
}

TEST_CASE("detection error entropy") {
  CHECK(detection_error_entropy(0.3, 0.0, 0.0) == doctest::Approx(0.0).epsilon(1e-15));
  // a detector that ignores y leaves the full prior uncertainty
  CHECK(detection_error_entropy(0.3, 0.4, 0.6) == doctest::Approx(binary_entropy(0.3)));
}

TEST_CASE("lower bound") {
  // deterministic amplitude at very high snr: both error rates vanish
  const TargetPrior sep{0.4, {1.0, 0.0}, 0.0};
  const auto perfect = sensing_rate_lower(sep, Snr(1e6));
  CHECK(perfect.probs.p_fa == doctest::Approx(0.0).epsilon(1e-300));
  CHECK(perfect.bits == doctest::Approx(ceiling(sep, Snr(1e6))).epsilon(1e-12));

  const TargetPrior p{0.4, {1.0, 0.0}, 0.2};

  const auto zero = sensing_rate_lower({0.4, {1.0, 0.0}, 0.0}, Snr(0.0));
  CHECK(zero.bits >= 0.0);
  CHECK(zero.bits == doctest::Approx(0.0).epsilon(1e-12));

  const auto custom = sensing_rate_lower(p, Snr(5.0), DetectorThreshold(3.0));
  const auto probs = error_probs(p, Snr(5.0), DetectorThreshold(3.0));
  CHECK(custom.probs.p_fa == probs.p_fa);
  CHECK(custom.bits >= fluctuation_information(p, Snr(5.0)));
}

TEST_CASE("approximation limits and structure") {
  for (const auto& p : kPriors) {
    CHECK(sensing_rate_approx(p, Snr(0.0)) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(approx_conditional_entropy(p, Snr(0.0)) ==
          doctest::Approx(binary_entropy(p.gamma)).epsilon(1e-12));
    CHECK(sensing_rate_approx(p, Snr(3.0)) ==
          doctest::Approx(sensing_rate_approx_from_overlaps(p, Snr(3.0))).epsilon(1e-10));
  }
  const TargetPrior sep{0.3, {1.0, 0.0}, 0.0};
  CHECK(sensing_rate_approx(sep, Snr(1e5)) == doctest::Approx(binary_entropy(0.3)).epsilon(1e-9));
}

TEST_CASE("approximation slope matches a finite difference") {
  for (const auto& p : kPriors) {
    for (double s : {0.05, 1.0, 7.0, 60.0}) {
      const double h = 1e-5 * s;
      const double fd = (sensing_rate_approx(p, Snr(s + h)) - sensing_rate_approx(p, Snr(s - h))) /
                        (2.0 * h);
      CHECK(sensing_rate_approx_slope(p, Snr(s)) == doctest::Approx(fd).epsilon(1e-5));
    }
  }
}

TEST_CASE("Gaussian overlap against quadrature") {
  const Complex mi{0.4, -0.2};
  const Complex mj{1.3, 0.5};
  const double vi = 0.7;
  const double vj = 1.6;
  const double q = oracle::simpson_square(
      [&](oracle::cplx y) {
        return oracle::cn_density(y, mi, vi) * oracle::cn_density(y, mj, vj);
      },
      9.0, 1200);
  CHECK(gaussian_overlap(mi, vi, mj, vj) == doctest::Approx(q).epsilon(1e-9));
  CHECK(gaussian_overlap(mi, vi, mi, vi) == doctest::Approx(1.0 / (2.0 * std::numbers::pi * vi)));
}

TEST_CASE("phase invariance of all rate methods") {
  const TargetPrior p{0.4, {0.9, 0.0}, 0.05};
  TargetPrior q = p;
  q.mu_t *= std::polar(1.0, std::numbers::pi / 3.0);
  const Snr s(6.0);
  CHECK(sensing_rate_exact(q, s).bits == doctest::Approx(sensing_rate_exact(p, s).bits).epsilon(1e-9));
  CHECK(sensing_rate_lower(q, s).bits == doctest::Approx(sensing_rate_lower(p, s).bits).epsilon(1e-12));
  CHECK(sensing_rate_approx(q, s) == doctest::Approx(sensing_rate_approx(p, s)).epsilon(1e-14));
  const auto a = mc_mutual_information(p, s, 200000, 8);
  const auto b = mc_mutual_information(q, s, 200000, 8);
  CHECK(std::abs(a.bits - b.bits) < 4.0 * std::hypot(a.stderr_bits, b.stderr_bits));
}

TEST_CASE("monotone in snr and below the ceiling") {
  for (const auto& p : kPriors) {
    double prev_exact = 0.0;
    double prev_approx = 0.0;
    for (int i = 0; i <= 8; ++i) {
      const Snr s = Snr::from_db(-10.0 + 5.0 * i);
      const double e = sensing_rate_exact(p, s).bits;
      const double a = sensing_rate_approx(p, s);
      CHECK(e >= prev_exact - 1e-9);
      CHECK(a >= prev_approx - 1e-12);
      CHECK(e <= ceiling(p, s) + 1e-9);
      prev_exact = e;
      prev_approx = a;
    }
  }
}

TEST_CASE("I-MMSE relation by finite difference") {
  for (const auto& p : {kPriors[0], kPriors[5]}) {
    for (double s : {0.3, 3.0, 30.0}) {
      const double h = 1e-3 * s;
      const ExactRateOptions tight{32, 4096, 1e-10};
      const double fd =
          (sensing_rate_exact(p, Snr(s + h), tight).bits -
           sensing_rate_exact(p, Snr(s - h), tight).bits) / (2.0 * h);
      CHECK(fd == doctest::Approx(std::numbers::log2e * mmse(p, Snr(s))).epsilon(1e-3));
    }
  }
}

TEST_CASE("lower bound stays below the exact rate on a grid") {
  for (const auto& p : kPriors) {
    for (int i = 0; i < 30; ++i) {
      const Snr s = Snr::from_db(-10.0 + 40.0 * i / 29.0);
      const auto lb = sensing_rate_lower(p, s);
      CHECK(lb.bits <= sensing_rate_exact(p, s).bits + 1e-6);
      CHECK(lb.bits >= fluctuation_information(p, s));
    }
  }
}
