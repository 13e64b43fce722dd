#pragma once

#include <boost/math/quadrature/gauss.hpp>

#include <cmath>
#include <cstddef>

namespace lpr::quadrature {

constexpr unsigned kGaussPoints = 16;
using GaussRule = boost::math::quadrature::gauss<double, kGaussPoints>;

/// Calls visit(node, weight) for every node of a composite Gauss-Legendre
/// rule with `panels` equal panels on [lo, hi].
template <class Visit>
void for_each_node(double lo, double hi, std::size_t panels, Visit&& visit) {
  const auto& x = GaussRule::abscissa();
  const auto& w = GaussRule::weights();
  const double h = (hi - lo) / static_cast<double>(panels);
  for (std::size_t p = 0; p < panels; ++p) {
    const double mid = lo + (static_cast<double>(p) + 0.5) * h;
    const double half = 0.5 * h;
    // Boost stores the non-negative half of a symmetric rule; for an even
    // point count the first abscissa is not zero.
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i] == 0.0) {
        visit(mid, w[i] * half);
        continue;
      }
      visit(mid - half * x[i], w[i] * half);
      visit(mid + half * x[i], w[i] * half);
    }
  }
}

template <class F>
double composite_gauss(F&& f, double lo, double hi, std::size_t panels) {
  double sum = 0.0;
  for_each_node(lo, hi, panels, [&](double x, double w) { sum += w * f(x); });
  return sum;
}

}  // namespace lpr::quadrature
