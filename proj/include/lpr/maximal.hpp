#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <vector>

#include "lpr/lattice.hpp"

namespace lpr {

// Discrete maximal operators over every contiguous periodic window
// {s, s+1, ..., s+l-1} (mod N), 1 <= l <= N.

namespace detail {

/// For each start s, `window_stat(s, stats)` fills stats[l] (l = 1..N) with
/// the statistic of window (s, l). The result at t is the maximum of the
/// statistic over all windows containing t.
template <class WindowStat>
std::vector<double> sup_over_windows(std::size_t n, WindowStat&& window_stat) {
  std::vector<double> out(n, 0.0);
  std::vector<double> stat(n + 1, 0.0), suffix(n + 2, 0.0);
  for (std::size_t s = 0; s < n; ++s) {
    window_stat(s, stat);
    suffix[n] = stat[n];
    for (std::size_t l = n - 1; l >= 1; --l) suffix[l] = std::max(stat[l], suffix[l + 1]);
    // t = s + o lies in (s, l) iff l > o.
    for (std::size_t o = 0; o < n; ++o) {
      const std::size_t t = (s + o) % n;
      out[t] = std::max(out[t], suffix[o + 1]);
    }
  }
  return out;
}

/// Binary indexed tree over value ranks holding counts and sums.
class RankTree {
 public:
  explicit RankTree(std::size_t n) : count_(n + 1), sum_(n + 1) {}
  void clear() {
    std::fill(count_.begin(), count_.end(), 0);
    std::fill(sum_.begin(), sum_.end(), 0.0);
  }
  void add(std::size_t rank, double v) {
    for (std::size_t i = rank + 1; i < count_.size(); i += i & (~i + 1)) {
      ++count_[i];
      sum_[i] += v;
    }
  }
  /// Count and sum of entries with rank < r.
  std::pair<std::size_t, double> prefix(std::size_t r) const {
    std::size_t c = 0;
    double s = 0.0;
    for (std::size_t i = r; i > 0; i -= i & (~i + 1)) {
      c += count_[i];
      s += sum_[i];
    }
    return {c, s};
  }

 private:
  std::vector<std::size_t> count_;
  std::vector<double> sum_;
};

}  // namespace detail

/// M(u)(t) for a non-negative sequence u.
inline std::vector<double> maximal_mean(std::span<const double> u) {
  const std::size_t n = u.size();
  return detail::sup_over_windows(n, [&](std::size_t s, std::vector<double>& stat) {
    double run = 0.0;
    for (std::size_t l = 1; l <= n; ++l) {
      run += u[(s + l - 1) % n];
      stat[l] = run / static_cast<double>(l);
    }
  });
}

/// M_q applied to |f|: (M |f|^q)^{1/q}.
inline std::vector<double> mq_maximal(std::span<const Complex> f, double q) {
  if (!(q >= 1.0) || std::isinf(q)) throw PreconditionError("mq_maximal: q must lie in [1, inf)");
  std::vector<double> u(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) u[i] = std::pow(std::abs(f[i]), q);
  auto m = maximal_mean(u);
  if (q != 1.0)
    for (auto& v : m) v = std::pow(v, 1.0 / q);
  return m;
}

inline std::vector<double> mq_maximal(const GridSignal& f, double q) {
  return mq_maximal(std::span<const Complex>(f.samples()), q);
}

enum class MaximalMode {
  /// (t, w) -> M_q(f(., w))(t): each coordinate separately.
  coordinatewise,
  /// t -> M_q(||f(.)||_X)(t): one scalar channel.
  norm,
};

/// Lattice-valued M_q. The result has the input's spec in coordinatewise
/// mode and is a single channel in norm mode.
inline LatticeSignal mq_maximal(const LatticeSignal& f, double q, MaximalMode mode) {
  if (mode == MaximalMode::norm) {
    std::vector<Complex> norms(f.size());
    for (std::size_t t = 0; t < f.size(); ++t) norms[t] = lattice_norm(f.row(t), f.spec());
    auto m = mq_maximal(norms, q);
    return LatticeSignal({1, f.spec().r}, f.period(), f.size(), std::vector<Complex>(m.begin(), m.end()));
  }
  LatticeSignal out = LatticeSignal::zeros(f.spec(), f.period(), f.size());
  for (std::size_t w = 0; w < f.dim(); ++w) {
    auto m = mq_maximal(f.channel(w), q);
    for (std::size_t t = 0; t < f.size(); ++t) out.at(t, w) = m[t];
  }
  return out;
}

/// Sharp function of a real sequence in O(N^2 log N): per window the
/// values above and below the window mean are summed with a rank tree.
inline std::vector<double> sharp_function_real(std::span<const double> v) {
  const std::size_t n = v.size();
  std::vector<double> sorted(v.begin(), v.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::size_t> rank(n);
  for (std::size_t i = 0; i < n; ++i)
    rank[i] = static_cast<std::size_t>(std::lower_bound(sorted.begin(), sorted.end(), v[i]) - sorted.begin());
  detail::RankTree tree(n);
  return detail::sup_over_windows(n, [&](std::size_t s, std::vector<double>& stat) {
    tree.clear();
    double total = 0.0;
    for (std::size_t l = 1; l <= n; ++l) {
      const std::size_t i = (s + l - 1) % n;
      tree.add(rank[i], v[i]);
      total += v[i];
      const double len = static_cast<double>(l);
      const double mean = total / len;
      const auto below = static_cast<std::size_t>(
          std::upper_bound(sorted.begin(), sorted.end(), mean) - sorted.begin());
      const auto [c_lo, s_lo] = tree.prefix(below);
      const double c = static_cast<double>(c_lo);
      const double dev = (mean * c - s_lo) + ((total - s_lo) - mean * (len - c));
      stat[l] = std::max(0.0, dev / len);
    }
  });
}

/// Sharp function of a vector-valued signal by direct evaluation of every
/// window's mean oscillation in the lattice norm; O(N^3 d).
inline std::vector<double> sharp_function_direct(const LatticeSignal& f) {
  const std::size_t n = f.size(), d = f.dim();
  std::vector<Complex> sum(d), diff(d);
  return detail::sup_over_windows(n, [&](std::size_t s, std::vector<double>& stat) {
    std::fill(sum.begin(), sum.end(), Complex{});
    for (std::size_t l = 1; l <= n; ++l) {
      const auto row = f.row((s + l - 1) % n);
      for (std::size_t w = 0; w < d; ++w) sum[w] += row[w];
      double osc = 0.0;
      for (std::size_t o = 0; o < l; ++o) {
        const auto x = f.row((s + o) % n);
        for (std::size_t w = 0; w < d; ++w) diff[w] = x[w] - sum[w] / static_cast<double>(l);
        osc += lattice_norm(diff, f.spec());
      }
      stat[l] = osc / static_cast<double>(l);
    }
  });
}

inline bool is_real(std::span<const Complex> v) {
  return std::all_of(v.begin(), v.end(), [](const Complex& c) { return c.imag() == 0.0; });
}

/// f_sharp(t) = max over windows W containing t of mean_W ||f - mean_W f||.
inline std::vector<double> sharp_function(const LatticeSignal& f) {
  if (f.dim() == 1 && is_real(f.values())) {
    std::vector<double> v(f.size());
    for (std::size_t t = 0; t < f.size(); ++t) v[t] = f.at(t, 0).real();
    return sharp_function_real(v);
  }
  return sharp_function_direct(f);
}

inline std::vector<double> sharp_function(const GridSignal& f) {
  return sharp_function(LatticeSignal({1, 2.0}, f.period(), f.size(), f.samples()));
}

/// (t, w) -> f(., w)_sharp(t).
inline LatticeSignal sharp_function_coordinatewise(const LatticeSignal& f) {
  LatticeSignal out = LatticeSignal::zeros(f.spec(), f.period(), f.size());
  for (std::size_t w = 0; w < f.dim(); ++w) {
    auto s = sharp_function(f.channel(w));
    for (std::size_t t = 0; t < f.size(); ++t) out.at(t, w) = s[t];
  }
  return out;
}

/// ((1/N) sum |u_t|^p)^{1/p}.
inline double lp_norm(std::span<const double> u, double p) {
  double top = 0.0;
  for (double x : u) top = std::max(top, std::abs(x));
  if (std::isinf(p) || top == 0.0) return top;
  double s = 0.0;
  for (double x : u) s += std::pow(std::abs(x) / top, p);
  return top * std::pow(s / static_cast<double>(u.size()), 1.0 / p);
}

struct MaximalNormReport {
  double p = 2.0;
  double q = 2.0;
  /// ||f||_p / ||f_sharp||_p; only for mean-zero f.
  std::optional<double> fs_ratio;
  /// ||M_q f||_p / ||f||_p; only for p > q.
  std::optional<double> mq_bound;
  /// ||M_2 f||^2_{L^p(X)} and ||M(|f|^2)||_{L^{p/2}(X_(2))}; only for r >= 2, p >= 2.
  std::optional<double> identity_lhs;
  std::optional<double> identity_rhs;
};

inline bool mean_zero(const LatticeSignal& f, double tol = 1e-12) {
  std::vector<Complex> mean(f.dim());
  double scale = 0.0;
  for (std::size_t t = 0; t < f.size(); ++t) {
    scale = std::max(scale, lattice_norm(f.row(t), f.spec()));
    for (std::size_t w = 0; w < f.dim(); ++w) mean[w] += f.at(t, w);
  }
  for (auto& c : mean) c /= static_cast<double>(f.size());
  return lattice_norm(mean, f.spec()) <= tol * std::max(scale, 1e-300);
}

/// One report per exponent in `ps`; the sharp function and the maximal
/// functions are computed once and shared.
inline std::vector<MaximalNormReport> maximal_norm_reports(const LatticeSignal& f, std::span<const double> ps,
                                                           double q) {
  std::vector<MaximalNormReport> out;
  const bool centred = mean_zero(f);
  std::optional<std::vector<double>> sharp;
  std::optional<LatticeSignal> mq, m2, msq;
  for (double p : ps) {
    MaximalNormReport rep{p, q};
    const double fp = mixed_norm(f, p);
    if (centred && fp > 0.0) {
      if (!sharp) sharp = sharp_function(f);
      const double sp = lp_norm(*sharp, p);
      if (sp > 0.0) rep.fs_ratio = fp / sp;
    }
    if (p > q && fp > 0.0) {
      if (!mq) mq = mq_maximal(f, q, MaximalMode::coordinatewise);
      rep.mq_bound = mixed_norm(*mq, p) / fp;
    }
    if (f.spec().two_convex() && p >= 2.0) {
      if (!m2) {
        m2 = mq_maximal(f, 2.0, MaximalMode::coordinatewise);
        LatticeSignal sq = modulus(f);
        for (auto& c : sq.values()) c *= c;
        msq = mq_maximal(sq, 1.0, MaximalMode::coordinatewise);
      }
      const double n2 = mixed_norm(*m2, p);
      rep.identity_lhs = n2 * n2;
      rep.identity_rhs = concavified_norm(*msq, p / 2.0);
    }
    out.push_back(rep);
  }
  return out;
}

inline MaximalNormReport maximal_norm_report(const LatticeSignal& f, double p, double q) {
  return maximal_norm_reports(f, std::span<const double>(&p, 1), q).front();
}

}  // namespace lpr
