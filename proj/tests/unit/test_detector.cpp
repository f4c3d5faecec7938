#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "isac/detector.hpp"
#include "isac/estimator.hpp"
#include "oracles.hpp"

using namespace isac;

namespace {

oracle::Model model(const TargetPrior& p, double snr) {
  return {p.gamma, p.mu_t, p.sigma_t_sq, snr};
}

// Error probabilities by brute force: Simpson over the acceptance indicator,
// with the indicator taken straight from the density ratio.
ErrorProbs brute_force(const TargetPrior& p, double snr, double log_delta, int n = 2400) {
  const auto m = model(p, snr);
  auto accept = [&](oracle::cplx y) {
    return std::log(m.present_density(y)) - std::log(m.absent_density(y)) > log_delta;
  };
  const double r = m.radius();
  const double fa = oracle::simpson_square(
      [&](oracle::cplx y) { return accept(y) ? m.absent_density(y) : 0.0; }, r, n);
  const double det = oracle::simpson_square(
      [&](oracle::cplx y) { return accept(y) ? m.present_density(y) : 0.0; }, r, n);
  return {fa, 1.0 - det};
}

// P(|Y - c| < R) for Y ~ CN(m, v): Rice density in r = |Y - c|, integrated on a line.
double rice_disk(Complex m, double v, Complex c, double radius) {
  const double d = std::abs(m - c);
  auto pdf = [&](double r) {
    // scaled Bessel keeps the product finite for large 2 r d / v
    const double z = 2.0 * r * d / v;
    return 2.0 * r / v * std::exp(-(r - d) * (r - d) / v) * std::cyl_bessel_i(0.0, z) *
           std::exp(-z);
  };
  return oracle::simpson_line(pdf, 0.0, radius, 20000);
}

}  // namespace

TEST_CASE("threshold construction") {
  CHECK_THROWS_AS((DetectorThreshold(0.0)), std::invalid_argument);
  CHECK_THROWS_AS((DetectorThreshold(-1.0)), std::invalid_argument);
  CHECK_THROWS_AS((DetectorThreshold(INFINITY)), std::invalid_argument);
  CHECK(DetectorThreshold(2.0).log_delta() == doctest::Approx(std::log(2.0)));
  CHECK(DetectorThreshold::from_log(-900.0).log_delta() == -900.0);
  CHECK(DetectorThreshold::map({0.2, {1, 0}, 0.0}).delta() == doctest::Approx(4.0));
  CHECK_THROWS_AS((DetectorThreshold::for_presence_level({0.2, {1, 0}, 0.0}, 1.0)),
                  std::invalid_argument);
}

TEST_CASE("deterministic amplitude gives a half-plane") {
  const TargetPrior p{0.5, {1.0, 0.0}, 0.0};
  const Snr snr(4.0);
  const auto region = acceptance_region(p, snr, DetectorThreshold::map(p));
  REQUIRE(region.kind == AcceptanceRegion::Kind::half_plane);
  CHECK(region.offset == doctest::Approx(1.0));
  const auto e = error_probs(p, snr, DetectorThreshold::map(p));
  CHECK(e.p_fa == doctest::Approx(0.5 * std::erfc(1.0)).epsilon(1e-12));
  CHECK(e.p_md == doctest::Approx(0.5 * std::erfc(1.0)).epsilon(1e-12));
}

TEST_CASE("MAP detector agrees with the posterior comparison") {
  const TargetPrior p{0.3, {0.7, 0.4}, 0.5};
  const Snr snr(3.0);
  SignalSampler s(p, snr, 4);
  int disagreements = 0;
  for (int i = 0; i < 100000; ++i) {
    const Complex y = s.next().y;
    const bool post = posterior_presence(y, p, snr) > 0.5;
    disagreements += post != (map_decide(y, p, snr) == Decision::present);
  }
  CHECK(disagreements == 0);
}

TEST_CASE("high prior puts the MAP threshold below one") {
  const TargetPrior p{0.9, {1.0, 0.0}, 0.0};
  CHECK(DetectorThreshold::map(p).delta() == doctest::Approx(1.0 / 9.0));
  const auto e = error_probs(p, Snr(1.0), DetectorThreshold::map(p));
  // half-plane Re(y) > (log(1/9) + 1) / 2
  const double t = (std::log(1.0 / 9.0) + 1.0) / 2.0;
  CHECK(e.p_fa == doctest::Approx(0.5 * std::erfc(t)));
  CHECK(e.p_md == doctest::Approx(0.5 * std::erfc(1.0 - t)));
  CHECK(e.p_fa > e.p_md);
}

TEST_CASE("half-plane tails against brute force") {
  for (const auto& [p, s, ld] :
       {std::tuple{TargetPrior{0.5, {0.6, -0.8}, 0.0}, 2.0, 0.3},
        std::tuple{TargetPrior{0.1, {1.0, 0.0}, 0.0}, 8.0, -1.0}}) {
    const auto e = error_probs(p, Snr(s), DetectorThreshold::from_log(ld));
    const auto b = brute_force(p, s, ld);
    CHECK(e.p_fa == doctest::Approx(b.p_fa).epsilon(2e-3));
    CHECK(e.p_md == doctest::Approx(b.p_md).epsilon(2e-3));
  }
}

TEST_CASE("disk region against brute force and Monte Carlo") {
  for (const auto& [p, s, ld] : {std::tuple{TargetPrior{0.5, {1.0, 0.0}, 0.1}, 10.0, 0.0},
                                 std::tuple{TargetPrior{0.2, {0.3, 0.4}, 1.0}, 3.0, 1.5},
                                 std::tuple{TargetPrior{0.7, {0.0, 0.0}, 2.0}, 1.0, 0.2}}) {
    const auto th = DetectorThreshold::from_log(ld);
    REQUIRE(acceptance_region(p, Snr(s), th).kind == AcceptanceRegion::Kind::disk_exterior);
    const auto e = error_probs(p, Snr(s), th);
    const auto b = brute_force(p, s, ld);
    CHECK(std::abs(e.p_fa - b.p_fa) < 2e-3);
    CHECK(std::abs(e.p_md - b.p_md) < 2e-3);

    const auto region = acceptance_region(p, Snr(s), th);
    const auto law = observation_law(p, Snr(s));
    CHECK(e.p_fa == doctest::Approx(1.0 - rice_disk({}, 1.0, region.centre, region.radius))
                        .epsilon(1e-8));
    CHECK(e.p_md ==
          doctest::Approx(rice_disk(law.present_mean, law.present_var, region.centre, region.radius))
              .epsilon(1e-8));

    oracle::Sampler sampler(model(p, s), 21);
    oracle::Running fa, md;
    for (int i = 0; i < 200000; ++i) {
      const auto d = sampler.next();
      const bool present = np_decide(d.y, p, Snr(s), th) == Decision::present;
      if (d.present) {
        md.add(present ? 0.0 : 1.0);
      } else {
        fa.add(present ? 1.0 : 0.0);
      }
    }
    CHECK(std::abs(fa.mean - e.p_fa) < 4.0 * fa.stderr_() + 1e-4);
    CHECK(std::abs(md.mean - e.p_md) < 4.0 * md.stderr_() + 1e-4);
  }
}

TEST_CASE("ROC curve") {
  for (const auto& p : {TargetPrior{0.5, {1.0, 0.0}, 0.0}, TargetPrior{0.1, {1.0, 0.0}, 0.1},
                        TargetPrior{0.3, {0.0, 0.0}, 1.0}}) {
    const auto roc = roc_curve(p, Snr::from_db(5.0), 256);
    REQUIRE(roc.size() == 258);
    CHECK(roc.front().p_fa == 1.0);
    CHECK(roc.front().p_d == 1.0);
    CHECK(roc.back().p_fa == 0.0);
    CHECK(roc.back().p_d == 0.0);
    for (std::size_t i = 1; i < roc.size(); ++i) {
      CHECK(roc[i].p_fa <= roc[i - 1].p_fa);
      CHECK(roc[i].p_d <= roc[i - 1].p_d);
      // a likelihood-ratio test is never worse than guessing
      CHECK(roc[i].p_d >= roc[i].p_fa - 1e-12);
    }
  }
  CHECK_THROWS_AS((roc_curve({0.5, {1, 0}, 0.0}, Snr(1.0), 1)), std::invalid_argument);
}

TEST_CASE("ROC improves with snr") {
  const TargetPrior p{0.2, {1.0, 0.0}, 0.1};
  for (double ld : {-2.0, 0.0, 1.0, 3.0}) {
    const auto th = DetectorThreshold::from_log(ld);
    const auto lo = error_probs(p, Snr::from_db(0.0), th);
    // at the false-alarm rate of the low-snr detector, the high-snr ROC detects more
    const auto roc = roc_curve(p, Snr::from_db(10.0), 2048);
    double best = 0.0;
    for (const auto& pt : roc) {
      if (pt.p_fa <= lo.p_fa) best = std::max(best, pt.p_d);
    }
    CHECK(best >= lo.p_d() - 1e-9);
  }
}

TEST_CASE("MAP operating point lies on the ROC and minimises error") {
  const TargetPrior p{0.3, {1.0, 0.0}, 0.2};
  const Snr snr(5.0);
  const auto map = error_probs(p, snr, DetectorThreshold::map(p));
  for (const auto& pt : roc_curve(p, snr, 512)) {
    const double pe = p.gamma * (1.0 - pt.p_d) + (1.0 - p.gamma) * pt.p_fa;
    CHECK(map.p_e(p.gamma) <= pe + 1e-12);
  }

  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const TargetPrior q{0.05 + 0.9 * u(rng), std::polar(2.0 * u(rng), 6.0 * u(rng)),
                        trial % 2 ? 0.0 : 2.0 * u(rng)};
    const Snr s = Snr::from_db(-5.0 + 25.0 * u(rng));
    const double best = error_probs(q, s, DetectorThreshold::map(q)).p_e(q.gamma);
    for (double ld = -8.0; ld <= 8.0; ld += 0.25) {
      CHECK(best <= error_probs(q, s, DetectorThreshold::from_log(ld)).p_e(q.gamma) + 1e-12);
    }
  }
}

TEST_CASE("threshold for a misdetection level") {
  const TargetPrior p{0.4, {1.0, 0.0}, 0.3};
  const Snr snr(6.0);
  for (double alpha : {0.01, 0.1, 0.5, 0.9}) {
    const auto th = threshold_for_pmd(p, snr, alpha);
    CHECK(std::abs(error_probs(p, snr, th).p_md - alpha) <= 1e-7);
  }
  // zero-mean amplitude: P_MD = 1 - exp(-r^2 / v) about the origin, so alpha = 1/2 at r^2 = v ln 2
  const TargetPrior z{0.5, {0.0, 0.0}, 1.0};
  const auto th = threshold_for_pmd(z, Snr(3.0), 0.5);
  const auto region = acceptance_region(z, Snr(3.0), th);
  REQUIRE(region.kind == AcceptanceRegion::Kind::disk_exterior);
  CHECK(std::abs(region.centre) == 0.0);
  CHECK(region.radius * region.radius == doctest::Approx(4.0 * std::log(2.0)).epsilon(1e-6));

  CHECK_THROWS_AS((threshold_for_pmd(p, snr, 0.0)), std::invalid_argument);
  CHECK_THROWS_AS((threshold_for_pmd(p, snr, 1.0)), std::invalid_argument);
  // at zero snr with a deterministic amplitude no threshold separates the hypotheses
  CHECK_THROWS_AS((threshold_for_pmd({0.5, {1.0, 0.0}, 0.0}, Snr(0.0), 0.3)), InfeasibleThreshold);
}

TEST_CASE("presence-level rule equals the NP test at the mapped threshold") {
  const TargetPrior p{0.25, {0.5, 0.5}, 0.4};
  const Snr snr(4.0);
  for (double level : {0.1, 0.5, 0.8}) {
    const auto th = DetectorThreshold::for_presence_level(p, level);
    SignalSampler s(p, snr, 33);
    int mismatch = 0;
    for (int i = 0; i < 20000; ++i) {
      const Complex y = s.next().y;
      mismatch += presence_level_decide(y, p, snr, level) != np_decide(y, p, snr, th);
    }
    CHECK(mismatch == 0);
  }
}

TEST_CASE("phase invariance of error probabilities") {
  const TargetPrior p{0.4, {0.9, 0.0}, 0.2};
  const auto base = error_probs(p, Snr(5.0), DetectorThreshold(1.5));
  for (double theta : {0.7, 2.2}) {
    TargetPrior q = p;
    q.mu_t *= std::polar(1.0, theta);
    const auto e = error_probs(q, Snr(5.0), DetectorThreshold(1.5));
    CHECK(e.p_fa == doctest::Approx(base.p_fa).epsilon(1e-12));
    CHECK(e.p_md == doctest::Approx(base.p_md).epsilon(1e-12));
  }
}
