#pragma once

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

#include "lpr/error.hpp"
#include "lpr/quadrature.hpp"

namespace lpr {

/// Schwartz bump with chi_[-1/2,1/2] <= psi_hat <= chi_[-1,1].
///
/// psi_hat(xi) = 1 on |xi| <= 1/2, h(2|xi| - 1) on 1/2 < |xi| < 1, and 0
/// beyond, where h(s) = g(1-s) / (g(s) + g(1-s)) with g(s) = exp(-1/s).
/// The spatial profile psi is real and even. It is tabulated once on a
/// uniform grid (trapezoidal rule on [-1, 1], evaluated by FFT) and
/// interpolated with cubic Hermite splines; `spatial_reference` evaluates
/// it independently by adaptive composite Gauss-Legendre quadrature.
class AdaptedBump {
 public:
  /// |x| beyond which psi is below 1e-15 and is taken as zero.
  static constexpr double kCutoff = 160.0;
  /// Table spacing.
  static constexpr double kStep = 1.0 / 128.0;

  AdaptedBump() { build_table(); }

  static double glue(double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; }

  /// Transition profile on [0, 1]: h(0) = 1, h(1) = 0, h(s) + h(1 - s) = 1.
  static double transition(double s) {
    if (s <= 0.0) return 1.0;
    if (s >= 1.0) return 0.0;
    const double up = glue(1.0 - s);
    return up / (glue(s) + up);
  }

  static double spectral(double xi) {
    const double a = std::abs(xi);
    if (a <= 0.5) return 1.0;
    if (a >= 1.0) return 0.0;
    return transition(2.0 * a - 1.0);
  }

  /// psi(x) from the cached table; exactly 0 for |x| >= kCutoff.
  double spatial(double x) const {
    const double a = std::abs(x);
    if (a >= kCutoff) return 0.0;
    const double u = a / kStep;
    const auto i = static_cast<std::size_t>(u);
    const double t = u - static_cast<double>(i);
    const double p0 = value_[i], p1 = value_[i + 1];
    const double m0 = slope_[i] * kStep, m1 = slope_[i + 1] * kStep;
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * p0 + (t3 - 2 * t2 + t) * m0 + (-2 * t3 + 3 * t2) * p1 +
           (t3 - t2) * m1;
  }

  /// psi(x) = 2 * int_0^1 psi_hat(xi) cos(2 pi xi x) dxi by composite
  /// Gauss-Legendre quadrature, doubling the panel count until successive
  /// values differ by less than `tol`.
  static double spatial_reference(double x, double tol = 1e-10) {
    const auto integrand = [x](double xi) {
      return 2.0 * spectral(xi) * std::cos(2.0 * std::numbers::pi * xi * x);
    };
    std::size_t panels = 4 + static_cast<std::size_t>(std::ceil(2.0 * std::abs(x)));
    double prev = quadrature::composite_gauss(integrand, 0.0, 1.0, panels);
    for (int round = 0; round < 16; ++round) {
      panels *= 2;
      const double cur = quadrature::composite_gauss(integrand, 0.0, 1.0, panels);
      if (std::abs(cur - prev) < tol) return cur;
      prev = cur;
    }
    throw NumericalError("AdaptedBump::spatial_reference: no convergence");
  }

  /// max |x|^2 |psi(x)| over the tabulated range.
  double decay_constant() const { return decay_constant_; }
  double cutoff() const { return kCutoff; }

 private:
  void build_table() {
    constexpr std::size_t kHalfBand = 4096;          // xi spacing 1/4096
    constexpr std::size_t kSize = kHalfBand * 128;   // x spacing 1/128
    static_assert(kSize * kStep == kHalfBand);
    std::vector<std::complex<double>> a(kSize), da(kSize);
    for (std::size_t m = 0; m <= kHalfBand; ++m) {
      const double xi = static_cast<double>(m) / kHalfBand;
      const double v = spectral(xi);
      const std::complex<double> dv(0.0, 2.0 * std::numbers::pi * xi * v);
      a[m] = v;
      da[m] = dv;
      if (m > 0) {
        a[kSize - m] = v;
        da[kSize - m] = -dv;
      }
    }
    Eigen::FFT<double> fft;
    fft.SetFlag(Eigen::FFT<double>::Unscaled);
    std::vector<std::complex<double>> b, db;
    fft.inv(b, a);
    fft.inv(db, da);

    const std::size_t count = static_cast<std::size_t>(kCutoff / kStep) + 2;
    value_.resize(count);
    slope_.resize(count);
    decay_constant_ = 0.0;
    for (std::size_t n = 0; n < count; ++n) {
      value_[n] = b[n].real() / kHalfBand;
      slope_[n] = db[n].real() / kHalfBand;
      const double x = static_cast<double>(n) * kStep;
      decay_constant_ = std::max(decay_constant_, x * x * std::abs(value_[n]));
    }
  }

  std::vector<double> value_;
  std::vector<double> slope_;
  double decay_constant_ = 0.0;
};

inline AdaptedBump make_adapted_bump() { return AdaptedBump(); }

/// Shared immutable instance.
inline const AdaptedBump& standard_bump() {
  static const AdaptedBump bump;
  return bump;
}

}  // namespace lpr
