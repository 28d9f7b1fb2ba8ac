#pragma once

#include <boost/math/quadrature/gauss.hpp>

#include <cstddef>
#include <vector>

#include "hweno/errors.hpp"

namespace hweno {

/// Gauss-Legendre rule on the reference interval [-1/2, 1/2]; weights sum to 1.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const noexcept { return nodes.size(); }
};

namespace detail {

template <unsigned N>
GaussRule make_gauss_rule() {
  using Rule = boost::math::quadrature::gauss<double, N>;
  const auto& abscissa = Rule::abscissa();
  const auto& weight = Rule::weights();
  GaussRule rule;
  // Boost stores the non-negative half; a zero node appears once for odd N.
  for (std::size_t k = abscissa.size(); k-- > 0;) {
    if (abscissa[k] == 0.0) continue;
    rule.nodes.push_back(-0.5 * abscissa[k]);
    rule.weights.push_back(0.5 * weight[k]);
  }
  for (std::size_t k = 0; k < abscissa.size(); ++k) {
    rule.nodes.push_back(0.5 * abscissa[k]);
    rule.weights.push_back(0.5 * weight[k]);
  }
  return rule;
}

}  // namespace detail

/// Rule with `points` nodes (exact for polynomials of degree 2*points - 1).
inline const GaussRule& gauss_legendre(int points) {
  static const GaussRule rules[] = {
      detail::make_gauss_rule<1>(), detail::make_gauss_rule<2>(), detail::make_gauss_rule<3>(),
      detail::make_gauss_rule<4>(), detail::make_gauss_rule<5>(), detail::make_gauss_rule<6>(),
      detail::make_gauss_rule<7>(), detail::make_gauss_rule<8>(),
  };
  if (points < 1 || points > 8) {
    throw InvalidArgument("gauss_legendre: supported point counts are 1..8");
  }
  return rules[points - 1];
}

}  // namespace hweno
