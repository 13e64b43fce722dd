#pragma once

// Slow, independently coded reference computations. Nothing here calls
// the library routine it is used to check.

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

#include "lpr/bump.hpp"
#include "lpr/interval.hpp"

namespace oracle {

using lpr::Interval;
using lpr::Rational;
using Complex = std::complex<double>;

/// Positive-measure overlap of (a1, b1] and (a2, b2] from the endpoints.
inline bool overlaps(const Interval& x, const Interval& y) {
  if (x.is_empty() || y.is_empty()) return false;
  const Rational lo = x.lower() > y.lower() ? x.lower() : y.lower();
  const Rational hi = x.upper() < y.upper() ? x.upper() : y.upper();
  return hi - lo > 0;
}

/// All-pairs overlap count maximum.
inline std::size_t degree(const std::vector<Interval>& xs) {
  std::size_t best = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    std::size_t c = 0;
    for (std::size_t j = 0; j < xs.size(); ++j)
      if (i != j && overlaps(xs[i], xs[j])) ++c;
    best = std::max(best, c);
  }
  return best;
}

/// Every periodic window (s, l) is enumerated; for each member t the window
/// statistic is recomputed from scratch.
template <class Stat>
std::vector<double> window_sup(std::size_t n, Stat&& stat) {
  std::vector<double> out(n, 0.0);
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t l = 1; l <= n; ++l) {
      std::vector<std::size_t> idx;
      for (std::size_t o = 0; o < l; ++o) idx.push_back((s + o) % n);
      const double v = stat(idx);
      for (std::size_t t : idx) out[t] = std::max(out[t], v);
    }
  return out;
}

inline std::vector<double> maximal(const std::vector<Complex>& f, double q) {
  return window_sup(f.size(), [&](const std::vector<std::size_t>& idx) {
    double s = 0.0;
    for (std::size_t i : idx) s += std::pow(std::abs(f[i]), q);
    return std::pow(s / static_cast<double>(idx.size()), 1.0 / q);
  });
}

/// Sharp function with the l^r norm of the deviation, values row-major N x d.
inline std::vector<double> sharp(const std::vector<Complex>& v, std::size_t d, double r) {
  const std::size_t n = v.size() / d;
  return window_sup(n, [&](const std::vector<std::size_t>& idx) {
    std::vector<Complex> mean(d);
    for (std::size_t i : idx)
      for (std::size_t w = 0; w < d; ++w) mean[w] += v[i * d + w];
    for (auto& m : mean) m /= static_cast<double>(idx.size());
    double osc = 0.0;
    for (std::size_t i : idx) {
      double acc = 0.0;
      for (std::size_t w = 0; w < d; ++w) acc += std::pow(std::abs(v[i * d + w] - mean[w]), r);
      osc += std::pow(acc, 1.0 / r);
    }
    return osc / static_cast<double>(idx.size());
  });
}

/// E || sum_j eps_j x_j ||_r^p over all 2^n sign patterns, raised to 1/p.
inline double rademacher(const std::vector<std::vector<Complex>>& xs, double r, double p) {
  const std::size_t n = xs.size(), d = xs.empty() ? 0 : xs[0].size();
  double total = 0.0;
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    double acc = 0.0;
    for (std::size_t w = 0; w < d; ++w) {
      Complex s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += ((mask >> j) & 1U) ? -xs[j][w] : xs[j][w];
      acc += std::pow(std::abs(s), r);
    }
    total += std::pow(std::pow(acc, 1.0 / r), p);
  }
  return std::pow(total / std::pow(2.0, static_cast<double>(n)), 1.0 / p);
}

/// int_lo^hi |sum_j alpha_j e^{2 pi i gamma_j y}|^2 dy in closed form.
inline double dirichlet_integral(const std::vector<double>& gamma, const std::vector<Complex>& alpha,
                                 double lo, double hi) {
  Complex total = 0.0;
  for (std::size_t j = 0; j < gamma.size(); ++j)
    for (std::size_t l = 0; l < gamma.size(); ++l) {
      const double w = 2.0 * std::numbers::pi * (gamma[j] - gamma[l]);
      Complex integral = w == 0.0 ? Complex(hi - lo)
                                  : (std::exp(Complex(0.0, w * hi)) - std::exp(Complex(0.0, w * lo))) /
                                        Complex(0.0, w);
      total += alpha[j] * std::conj(alpha[l]) * integral;
    }
  return total.real();
}

/// psi(x) = 2 int_0^1 psi_hat(xi) cos(2 pi xi x) dxi: the plateau in closed
/// form, the transition by Gauss-Kronrod on panels short against the
/// oscillation period.
inline double psi(double x) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  const double plateau = x == 0.0 ? 1.0 : std::sin(std::numbers::pi * x) / (std::numbers::pi * x);
  auto f = [x](double xi) {
    return 2.0 * lpr::AdaptedBump::spectral(xi) * std::cos(2.0 * std::numbers::pi * xi * x);
  };
  const int panels = 2 + static_cast<int>(std::ceil(std::abs(x)));
  double sum = 0.0;
  for (int i = 0; i < panels; ++i) {
    const double lo = 0.5 + 0.5 * i / panels, hi = 0.5 + 0.5 * (i + 1) / panels;
    sum += GK::integrate(f, lo, hi, 6, 1e-13);
  }
  return plateau + sum;
}

/// int 2^{2k} |psi(2^k(x - y)) - psi(2^k(z - y))|^2 dy over [lo, hi].
inline double kernel_difference(unsigned k, double x, double z, double lo, double hi) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  const double s = std::ldexp(1.0, static_cast<int>(k));
  auto f = [&](double y) {
    const double v = psi(s * (x - y)) - psi(s * (z - y));
    return s * s * v * v;
  };
  return GK::integrate(f, lo, hi, 20, 1e-10);
}

}  // namespace oracle
