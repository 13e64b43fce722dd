#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "lpr/dyadic.hpp"
#include "lpr/lattice.hpp"
#include "lpr/random.hpp"

namespace lpr::corpus {

using random::CounterEngine;

inline std::int64_t uniform_int(CounterEngine& rng, std::int64_t lo, std::int64_t hi) {
  return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
}

/// Families with exact rational endpoints and lengths in [min_length, max_length].
struct RationalFamilyParams {
  std::size_t min_count = 1;
  std::size_t max_count = 8;
  double min_length = 4.0;
  double max_length = 65536.0;
  std::int64_t max_denominator = 16;
  double max_gap = 64.0;
  std::int64_t origin_range = 1024;
};

/// A random non-negative rational in [lo, hi] with denominator at most max_den.
inline Rational random_rational(CounterEngine& rng, double lo, double hi, std::int64_t max_den) {
  const std::int64_t den = uniform_int(rng, 1, max_den);
  const auto first = static_cast<std::int64_t>(std::ceil(lo * static_cast<double>(den)));
  const auto last = static_cast<std::int64_t>(std::floor(hi * static_cast<double>(den)));
  return make_rational(uniform_int(rng, first, std::max(first, last)), den);
}

/// Members have log-uniform lengths, are placed left to right with random
/// non-negative gaps, and start near a random origin.
inline DisjointFamily random_rational_family(CounterEngine& rng, const RationalFamilyParams& prm = {}) {
  const auto count = static_cast<std::size_t>(uniform_int(rng, static_cast<std::int64_t>(prm.min_count),
                                                          static_cast<std::int64_t>(prm.max_count)));
  std::uniform_real_distribution<double> log_len(std::log2(prm.min_length), std::log2(prm.max_length));
  Rational cursor = make_rational(uniform_int(rng, -prm.origin_range, prm.origin_range));
  std::vector<Interval> out;
  for (std::size_t j = 0; j < count; ++j) {
    const double target = std::exp2(log_len(rng));
    Rational len = random_rational(rng, target, target, prm.max_denominator);
    len = std::clamp(len, Rational(prm.min_length), Rational(prm.max_length));
    if (j > 0) cursor += random_rational(rng, 0.0, prm.max_gap, prm.max_denominator);
    out.emplace_back(cursor, cursor + len);
    cursor += len;
  }
  return DisjointFamily(std::move(out));
}

/// `count` disjoint frequency intervals on an N-bin grid of period L.
/// Endpoints sit at half-bin offsets (c + 1/2) / L, so membership of every
/// bin frequency k / L is unambiguous. Each member holds at least one bin.
inline DisjointFamily random_frequency_family(CounterEngine& rng, std::size_t n, const Rational& period,
                                              std::size_t count) {
  const auto half = static_cast<std::int64_t>(n / 2);
  count = std::min(count, n / 2);
  std::vector<std::int64_t> cuts;
  while (cuts.size() < 2 * count) {
    const std::int64_t c = uniform_int(rng, -half - 1, half - 1);
    if (std::find(cuts.begin(), cuts.end(), c) == cuts.end()) cuts.push_back(c);
  }
  std::sort(cuts.begin(), cuts.end());
  std::vector<Interval> out;
  for (std::size_t i = 0; i < count; ++i)
    out.emplace_back((Rational(cuts[2 * i]) + Rational(1, 2)) / period,
                     (Rational(cuts[2 * i + 1]) + Rational(1, 2)) / period);
  return DisjointFamily(std::move(out));
}

/// A family partitioning every bin of the grid into `count` runs.
inline DisjointFamily random_covering_family(CounterEngine& rng, std::size_t n, const Rational& period,
                                             std::size_t count) {
  const auto half = static_cast<std::int64_t>(n / 2);
  count = std::clamp<std::size_t>(count, 1, n);
  std::vector<std::int64_t> cuts{-half - 1, half - 1};
  while (cuts.size() < count + 1) {
    const std::int64_t c = uniform_int(rng, -half, half - 2);
    if (std::find(cuts.begin(), cuts.end(), c) == cuts.end()) cuts.push_back(c);
  }
  std::sort(cuts.begin(), cuts.end());
  std::vector<Interval> out;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    out.emplace_back((Rational(cuts[i]) + Rational(1, 2)) / period,
                     (Rational(cuts[i + 1]) + Rational(1, 2)) / period);
  return DisjointFamily(std::move(out));
}

/// 1..max_count disjoint intervals of at least `min_bins` bins inside the
/// central half of the grid, endpoints at half-bin offsets, in frequency
/// units.
inline DisjointFamily random_long_family(CounterEngine& rng, std::size_t n, const Rational& period,
                                         std::size_t max_count, std::int64_t min_bins = 4) {
  const auto quarter = static_cast<std::int64_t>(n / 4);
  const auto count = static_cast<std::size_t>(uniform_int(rng, 1, static_cast<std::int64_t>(max_count)));
  std::vector<std::int64_t> cuts;
  while (cuts.size() < 2 * count) {
    const std::int64_t c = uniform_int(rng, -quarter, quarter);
    if (std::find(cuts.begin(), cuts.end(), c) == cuts.end()) cuts.push_back(c);
  }
  std::sort(cuts.begin(), cuts.end());
  std::vector<Interval> out;
  for (std::size_t i = 0; i < count; ++i) {
    const Rational lo = Rational(cuts[2 * i]) + Rational(1, 2);
    const Rational hi = Rational(std::max(cuts[2 * i + 1], cuts[2 * i] + min_bins)) + Rational(1, 2);
    if (!out.empty() && lo / period < out.back().upper()) continue;
    out.emplace_back(lo / period, hi / period);
  }
  return DisjointFamily(std::move(out));
}

/// Decomposition pieces (one side) of a random family of intervals at
/// least 4 bins long, in frequency units. Such piece families are well
/// distributed.
inline DisjointFamily random_piece_family(CounterEngine& rng, std::size_t n, const Rational& period,
                                          std::size_t max_count, Side side) {
  const DisjointFamily bins = random_long_family(rng, n, Rational(1), max_count);
  std::vector<Interval> out;
  for (const auto& p : dyadic_decompose(bins).side_pieces(side)) out.push_back(p.scaled(1 / period));
  return DisjointFamily(std::move(out));
}

struct SignalParams {
  /// Highest bin |k| carrying energy; 0 means every bin.
  std::size_t band = 0;
  bool real = false;
  bool mean_zero = false;

  friend bool operator==(const SignalParams&, const SignalParams&) = default;
};

/// Random trigonometric polynomial with independent complex Gaussian
/// coefficients. Coefficients are drawn in the order k = 0, 1, -1, 2, -2, ...
/// per channel, so the same seed and band give the same function on any
/// grid fine enough to hold it.
inline LatticeSignal random_trig_signal(CounterEngine& rng, const LatticeSpec& spec, const Rational& period,
                                        std::size_t n, const SignalParams& prm = {}) {
  check_grid(n, period);
  const auto top = static_cast<long>(prm.band == 0 ? n / 2 - 1 : std::min(prm.band, n / 2 - 1));
  std::normal_distribution<double> gauss(0.0, 1.0);
  LatticeSignal out = LatticeSignal::zeros(spec, period, n);
  std::vector<Complex> coeffs(n), time;
  const double scale = 1.0 / std::sqrt(2.0 * static_cast<double>(top) + 1.0);
  for (std::size_t w = 0; w < spec.d; ++w) {
    std::fill(coeffs.begin(), coeffs.end(), Complex{});
    for (long k = 0; k <= top; ++k) {
      const Complex c(gauss(rng) * scale, gauss(rng) * scale);
      const Complex c_neg(gauss(rng) * scale, gauss(rng) * scale);
      if (prm.real) {
        coeffs[index_of(k, n)] = k == 0 ? Complex(c.real()) : c;
        if (k > 0) coeffs[index_of(-k, n)] = std::conj(c);
      } else {
        coeffs[index_of(k, n)] = c;
        if (k > 0) coeffs[index_of(-k, n)] = c_neg;
      }
    }
    if (prm.mean_zero) coeffs[0] = 0.0;
    inverse_dft(coeffs, time);
    for (std::size_t t = 0; t < n; ++t) out.at(t, w) = prm.real ? Complex(time[t].real()) : time[t];
  }
  return out;
}

/// Independent standard complex Gaussian samples (real if requested).
inline LatticeSignal random_noise_signal(CounterEngine& rng, const LatticeSpec& spec, const Rational& period,
                                         std::size_t n, bool real = false) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  LatticeSignal out = LatticeSignal::zeros(spec, period, n);
  for (auto& c : out.values()) {
    const double re = gauss(rng);
    c = real ? Complex(re) : Complex(re, gauss(rng));
  }
  return out;
}

}  // namespace lpr::corpus
