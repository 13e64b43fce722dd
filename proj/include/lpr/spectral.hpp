#pragma once

#include <unsupported/Eigen/FFT>

#include <complex>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "lpr/bump.hpp"
#include "lpr/interval.hpp"

namespace lpr {

using Complex = std::complex<double>;

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline void check_grid(std::size_t n, const Rational& period) {
  if (!is_power_of_two(n) || n < 8)
    throw PreconditionError("grid size must be a power of two >= 8, got " + std::to_string(n));
  if (period <= 0) throw PreconditionError("grid period must be positive");
}

/// Bin k of an N-point grid, k in [-N/2, N/2), in FFT storage order.
inline long bin_of(std::size_t index, std::size_t n) {
  return index < n / 2 ? static_cast<long>(index) : static_cast<long>(index) - static_cast<long>(n);
}
inline std::size_t index_of(long bin, std::size_t n) {
  return bin >= 0 ? static_cast<std::size_t>(bin) : static_cast<std::size_t>(bin + static_cast<long>(n));
}

/// N complex samples of a function with period L at t_n = n L / N.
/// Bin k carries frequency k / L.
class GridSignal {
 public:
  GridSignal(Rational period, std::vector<Complex> samples)
      : period_(std::move(period)), samples_(std::move(samples)) {
    check_grid(samples_.size(), period_);
    period_value_ = to_double(period_);
  }

  static GridSignal zeros(Rational period, std::size_t n) {
    return GridSignal(std::move(period), std::vector<Complex>(n));
  }

  std::size_t size() const { return samples_.size(); }
  const Rational& period() const { return period_; }
  double period_value() const { return period_value_; }
  double time(std::size_t n) const { return period_value_ * static_cast<double>(n) / size(); }

  Complex& operator[](std::size_t n) { return samples_[n]; }
  const Complex& operator[](std::size_t n) const { return samples_[n]; }
  const std::vector<Complex>& samples() const { return samples_; }
  std::vector<Complex>& samples() { return samples_; }

 private:
  Rational period_;
  std::vector<Complex> samples_;
  double period_value_ = 1.0;
};

/// Coefficients f_hat(k) = (1/N) sum_n f(n) exp(-2 pi i k n / N), stored in
/// FFT order.
struct Spectrum {
  Rational period;
  std::vector<Complex> coeffs;

  std::size_t size() const { return coeffs.size(); }
  Complex& at_bin(long k) { return coeffs[index_of(k, size())]; }
  const Complex& at_bin(long k) const { return coeffs[index_of(k, size())]; }
};

namespace detail {
inline Eigen::FFT<double>& fft_engine() {
  thread_local Eigen::FFT<double> fft = [] {
    Eigen::FFT<double> f;
    f.SetFlag(Eigen::FFT<double>::Unscaled);
    return f;
  }();
  return fft;
}
}  // namespace detail

inline void forward_dft(const std::vector<Complex>& samples, std::vector<Complex>& out) {
  detail::fft_engine().fwd(out, samples);
  const double scale = 1.0 / static_cast<double>(samples.size());
  for (auto& c : out) c *= scale;
}

inline void inverse_dft(const std::vector<Complex>& coeffs, std::vector<Complex>& out) {
  detail::fft_engine().inv(out, coeffs);
}

inline Spectrum dft(const GridSignal& f) {
  Spectrum s{f.period(), {}};
  forward_dft(f.samples(), s.coeffs);
  return s;
}

inline GridSignal idft(const Spectrum& s) {
  std::vector<Complex> out;
  inverse_dft(s.coeffs, out);
  return GridSignal(s.period, std::move(out));
}

inline Integer ceil(const Rational& r) { return -lpr::floor(-r); }

/// Bins k in [-N/2, N/2) with lo <(=) k/L <(=) hi, as an inclusive range.
inline std::optional<std::pair<long, long>> clip_bins(const Integer& first, const Integer& last,
                                                      std::size_t n) {
  const long half = static_cast<long>(n / 2);
  Integer lo = first < -half ? Integer(-half) : first;
  Integer hi = last > half - 1 ? Integer(half - 1) : last;
  if (lo > hi) return std::nullopt;
  return std::make_pair(lo.convert_to<long>(), hi.convert_to<long>());
}

/// Bins whose frequency k/L lies in the half-open interval I.
inline std::optional<std::pair<long, long>> bin_range(const Interval& interval,
                                                      const Rational& period, std::size_t n) {
  if (interval.is_empty()) return std::nullopt;
  return clip_bins(lpr::floor(interval.lower() * period) + 1, lpr::floor(interval.upper() * period),
                   n);
}

inline Spectrum sharp_project(const Spectrum& s, const Interval& interval) {
  Spectrum out{s.period, std::vector<Complex>(s.size())};
  if (auto bins = bin_range(interval, s.period, s.size()))
    for (long k = bins->first; k <= bins->second; ++k) out.at_bin(k) = s.at_bin(k);
  return out;
}

/// S_I f: keeps exactly the bins with k/L in I.
inline GridSignal sharp_project(const GridSignal& f, const Interval& interval) {
  return idft(sharp_project(dft(f), interval));
}

/// Multiplier psi_hat((k/L - centre) / width) on the N bins, FFT order.
/// Bins with |k/L - centre| <= width/2 get exactly 1 and bins with
/// |k/L - centre| >= width get exactly 0, decided in rational arithmetic.
inline std::vector<double> adapted_multiplier(const Rational& centre, const Rational& width,
                                              const Rational& period, std::size_t n,
                                              const AdaptedBump& bump) {
  if (width <= 0) throw DomainError("adapted_multiplier: width must be positive");
  std::vector<double> m(n, 0.0);
  const Rational cl = centre * period;
  const Rational wl = width * period;
  // Open support (c - w, c + w) in bin units.
  auto support = clip_bins(lpr::floor(cl - wl) + 1, ceil(cl + wl) - 1, n);
  if (!support) return m;
  const double cd = to_double(cl), wd = to_double(wl);
  for (long k = support->first; k <= support->second; ++k)
    m[index_of(k, n)] = bump.spectral((static_cast<double>(k) - cd) / wd);
  if (auto plateau = clip_bins(ceil(cl - wl / 2), lpr::floor(cl + wl / 2), n))
    for (long k = plateau->first; k <= plateau->second; ++k) m[index_of(k, n)] = 1.0;
  return m;
}

/// Multiplier of psi_I with chi_I <= psi_I_hat <= chi_{2I}.
inline std::vector<double> adapted_multiplier(const Interval& interval, const Rational& period,
                                              std::size_t n, const AdaptedBump& bump) {
  if (interval.is_empty()) return std::vector<double>(n, 0.0);
  return adapted_multiplier(interval.centre(), interval.length(), period, n, bump);
}

inline Spectrum apply_multiplier(const Spectrum& s, const std::vector<double>& m) {
  Spectrum out{s.period, s.coeffs};
  for (std::size_t i = 0; i < out.size(); ++i) out.coeffs[i] *= m[i];
  return out;
}

/// psi_I * f realised as the multiplier psi_hat((xi - c_I) / |I|).
inline GridSignal smooth_project(const GridSignal& f, const Interval& interval,
                                 const AdaptedBump& bump = standard_bump()) {
  return idft(apply_multiplier(dft(f), adapted_multiplier(interval, f.period(), f.size(), bump)));
}

}  // namespace lpr
