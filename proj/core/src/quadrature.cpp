#include "isac/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace isac::detail {

const KronrodRule& kronrod21() {
  using gk = boost::math::quadrature::gauss_kronrod<double, 21>;
  using g = boost::math::quadrature::gauss<double, 10>;
  static const KronrodRule rule{
      std::span<const double>(gk::abscissa().data(), gk::abscissa().size()),
      std::span<const double>(gk::weights().data(), gk::weights().size()),
      std::span<const double>(g::weights().data(), g::weights().size())};
  return rule;
}

const GaussRule& gauss_legendre16() {
  using g = boost::math::quadrature::gauss<double, 16>;
  static const GaussRule rule{
      std::span<const double>(g::abscissa().data(), g::abscissa().size()),
      std::span<const double>(g::weights().data(), g::weights().size())};
  return rule;
}

}  // namespace isac::detail
