#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "lpr/spectral.hpp"

namespace lpr {

constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// The value space X = l^r_d.
struct LatticeSpec {
  std::size_t d = 1;
  double r = 2.0;

  void validate() const {
    if (d == 0) throw PreconditionError("LatticeSpec: dimension must be positive");
    if (!(r >= 1.0)) throw PreconditionError("LatticeSpec: exponent r must lie in [1, inf]");
  }

  /// X_(2) is a Banach lattice iff X is 2-convex iff r >= 2.
  bool two_convex() const { return r >= 2.0; }

  /// X* = l^{r'}_d with 1/r + 1/r' = 1.
  LatticeSpec dual() const {
    if (r == 1.0) return {d, kInfinity};
    if (std::isinf(r)) return {d, 1.0};
    return {d, r / (r - 1.0)};
  }

  /// X_(2) = l^{r/2}_d.
  LatticeSpec concavified() const { return {d, r / 2.0}; }

  friend bool operator==(const LatticeSpec&, const LatticeSpec&) = default;
};

/// l^r norm of a d-vector.
inline double lattice_norm(std::span<const Complex> v, double r) {
  if (std::isinf(r)) {
    double m = 0.0;
    for (const auto& c : v) m = std::max(m, std::abs(c));
    return m;
  }
  if (r == 2.0) {
    double s = 0.0;
    for (const auto& c : v) s += std::norm(c);
    return std::sqrt(s);
  }
  if (r == 1.0) {
    double s = 0.0;
    for (const auto& c : v) s += std::abs(c);
    return s;
  }
  double scale = 0.0;
  for (const auto& c : v) scale = std::max(scale, std::abs(c));
  if (scale == 0.0) return 0.0;
  double s = 0.0;
  for (const auto& c : v) s += std::pow(std::abs(c) / scale, r);
  return scale * std::pow(s, 1.0 / r);
}

inline double lattice_norm(std::span<const Complex> v, const LatticeSpec& spec) {
  return lattice_norm(v, spec.r);
}

/// N x d values on a periodic grid: entry (t, w) is coordinate w of f(t_n).
class LatticeSignal {
 public:
  LatticeSignal(LatticeSpec spec, Rational period, std::size_t n, std::vector<Complex> values)
      : spec_(spec), period_(std::move(period)), n_(n), values_(std::move(values)) {
    spec_.validate();
    check_grid(n_, period_);
    if (values_.size() != n_ * spec_.d)
      throw PreconditionError("LatticeSignal: value array must have N*d entries");
  }

  static LatticeSignal zeros(LatticeSpec spec, Rational period, std::size_t n) {
    return LatticeSignal(spec, std::move(period), n, std::vector<Complex>(n * spec.d));
  }

  /// Builds a signal from d scalar channels on a common grid.
  static LatticeSignal from_channels(LatticeSpec spec, const std::vector<GridSignal>& channels) {
    if (channels.size() != spec.d || channels.empty())
      throw PreconditionError("LatticeSignal::from_channels: need exactly d channels");
    const std::size_t n = channels.front().size();
    LatticeSignal out = zeros(spec, channels.front().period(), n);
    for (std::size_t w = 0; w < spec.d; ++w) {
      if (channels[w].size() != n || channels[w].period() != channels.front().period())
        throw PreconditionError("LatticeSignal::from_channels: grid mismatch");
      for (std::size_t t = 0; t < n; ++t) out.at(t, w) = channels[w][t];
    }
    return out;
  }

  const LatticeSpec& spec() const { return spec_; }
  const Rational& period() const { return period_; }
  std::size_t size() const { return n_; }
  std::size_t dim() const { return spec_.d; }

  Complex& at(std::size_t t, std::size_t w) { return values_[t * spec_.d + w]; }
  const Complex& at(std::size_t t, std::size_t w) const { return values_[t * spec_.d + w]; }
  std::span<const Complex> row(std::size_t t) const {
    return {values_.data() + t * spec_.d, spec_.d};
  }
  const std::vector<Complex>& values() const { return values_; }
  std::vector<Complex>& values() { return values_; }

  GridSignal channel(std::size_t w) const {
    std::vector<Complex> out(n_);
    for (std::size_t t = 0; t < n_; ++t) out[t] = at(t, w);
    return GridSignal(period_, std::move(out));
  }

  bool same_grid(const LatticeSignal& o) const {
    return n_ == o.n_ && spec_ == o.spec_ && period_ == o.period_;
  }

 private:
  LatticeSpec spec_;
  Rational period_;
  std::size_t n_;
  std::vector<Complex> values_;
};

/// ((1/N) sum_t ||F(t)||_r^p)^{1/p}, or max_t ||F(t)||_r when p = inf, using
/// the lattice exponent `r`.
inline double mixed_norm(const LatticeSignal& f, double p, double r) {
  if (!(p >= 1.0)) throw PreconditionError("mixed_norm: p must lie in [1, inf]");
  const std::size_t n = f.size();
  std::vector<double> norms(n);
  double top = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    norms[t] = lattice_norm(f.row(t), r);
    top = std::max(top, norms[t]);
  }
  if (std::isinf(p) || top == 0.0) return top;
  double s = 0.0;
  for (double v : norms) s += std::pow(v / top, p);
  return top * std::pow(s / static_cast<double>(n), 1.0 / p);
}

/// Norm of F in L^p(grid; X) with the normalized counting measure.
inline double mixed_norm(const LatticeSignal& f, double p) { return mixed_norm(f, p, f.spec().r); }

/// Pointwise, coordinatewise (sum_j |g_j(t, w)|^2)^{1/2}.
inline LatticeSignal square_sum(const std::vector<LatticeSignal>& gs) {
  if (gs.empty()) throw PreconditionError("square_sum: empty list");
  std::vector<double> acc(gs.front().values().size(), 0.0);
  for (const auto& g : gs) {
    if (!g.same_grid(gs.front())) throw PreconditionError("square_sum: shape mismatch");
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += std::norm(g.values()[i]);
  }
  LatticeSignal out = LatticeSignal::zeros(gs.front().spec(), gs.front().period(), gs.front().size());
  for (std::size_t i = 0; i < acc.size(); ++i) out.values()[i] = std::sqrt(acc[i]);
  return out;
}

/// Norm of F in L^p(grid; X_(2)) where X_(2) = l^{r/2}_d; requires r >= 2.
/// Pointwise ||f||_{X_(2)} = || |f|^{1/2} ||_X^2.
inline double concavified_norm(const LatticeSignal& f, double p) {
  if (!f.spec().two_convex())
    throw PreconditionError("concavified_norm: X_(2) is a lattice only when r >= 2");
  return mixed_norm(f, p, f.spec().r / 2.0);
}

/// || |v|^{1/2} ||_X^2, the concavified quasi-norm of one value.
inline double concavified_value_norm(std::span<const Complex> v, const LatticeSpec& spec) {
  std::vector<Complex> root(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) root[i] = std::sqrt(std::abs(v[i]));
  const double n = lattice_norm(root, spec.r);
  return n * n;
}

/// Coordinatewise |f|.
inline LatticeSignal modulus(const LatticeSignal& f) {
  LatticeSignal out = f;
  for (auto& c : out.values()) c = std::abs(c);
  return out;
}

inline LatticeSignal sharp_project(const LatticeSignal& f, const Interval& interval) {
  std::vector<GridSignal> channels;
  for (std::size_t w = 0; w < f.dim(); ++w) channels.push_back(sharp_project(f.channel(w), interval));
  return LatticeSignal::from_channels(f.spec(), channels);
}

inline LatticeSignal smooth_project(const LatticeSignal& f, const Interval& interval,
                                    const AdaptedBump& bump = standard_bump()) {
  std::vector<GridSignal> channels;
  for (std::size_t w = 0; w < f.dim(); ++w)
    channels.push_back(smooth_project(f.channel(w), interval, bump));
  return LatticeSignal::from_channels(f.spec(), channels);
}

/// Spectra of every channel, computed once for repeated projections.
struct LatticeSpectrum {
  LatticeSpec spec;
  Rational period;
  std::size_t n = 0;
  std::vector<Spectrum> channels;

  explicit LatticeSpectrum(const LatticeSignal& f) : spec(f.spec()), period(f.period()), n(f.size()) {
    for (std::size_t w = 0; w < f.dim(); ++w) channels.push_back(dft(f.channel(w)));
  }

  /// Inverse transform of the channel spectra multiplied by `m`.
  LatticeSignal synthesize(const std::vector<double>& m) const {
    LatticeSignal out = LatticeSignal::zeros(spec, period, n);
    std::vector<Complex> buf(n), time;
    for (std::size_t w = 0; w < channels.size(); ++w) {
      for (std::size_t i = 0; i < n; ++i) buf[i] = channels[w].coeffs[i] * m[i];
      inverse_dft(buf, time);
      for (std::size_t t = 0; t < n; ++t) out.at(t, w) = time[t];
    }
    return out;
  }

  /// Indicator multiplier of the bins with k/L in I.
  std::vector<double> indicator(const Interval& interval) const {
    std::vector<double> m(n, 0.0);
    if (auto bins = bin_range(interval, period, n))
      for (long k = bins->first; k <= bins->second; ++k) m[index_of(k, n)] = 1.0;
    return m;
  }
};

}  // namespace lpr
