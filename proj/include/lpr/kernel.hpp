#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "lpr/dyadic.hpp"
#include "lpr/quadrature.hpp"
#include "lpr/rademacher.hpp"

namespace lpr {

/// The kernels K_{j,k}(x, y) = 2^k psi(2^k (x - y)) exp(-2 pi i c_{j,k} y)
/// attached to the a-side pieces of a normalized family, with centres
/// c_{j,k} = a_j - 2 + 2^k + 2^{k-1}.
class KernelSpec {
 public:
  struct Term {
    std::size_t j;
    unsigned k;
    Rational centre;
    double centre_value;
  };

  explicit KernelSpec(const DisjointFamily& family, const AdaptedBump& bump = standard_bump())
      : family_(family), decomposition_(dyadic_decompose(family)), bump_(&bump) {
    for (std::size_t j = 0; j < decomposition_.intervals.size(); ++j) {
      const auto& d = decomposition_.intervals[j];
      max_n_ = std::max(max_n_, d.n);
      for (unsigned k = 1; k <= d.n; ++k) {
        if (d.piece(Side::a, k).is_empty()) continue;
        Rational c = centre(j, k);
        terms_.push_back({j, k, c, to_double(c)});
        max_k_ = std::max(max_k_, k);
      }
    }
  }

  const DisjointFamily& family() const { return family_; }
  const DyadicDecomposition& decomposition() const { return decomposition_; }
  const AdaptedBump& bump() const { return *bump_; }
  const std::vector<Term>& terms() const { return terms_; }
  std::size_t sources() const { return family_.size(); }
  /// Largest depth n_j; coefficient arrays are J x max_depth.
  unsigned max_depth() const { return max_n_; }
  /// Largest k with a non-empty piece.
  unsigned max_k() const { return max_k_; }

  Rational centre(std::size_t j, unsigned k) const {
    return family_[j].lower() - 2 + pow2(k) + pow2(k) / 2;
  }

  bool has_piece(std::size_t j, unsigned k) const {
    if (j >= decomposition_.intervals.size()) return false;
    const auto& d = decomposition_.intervals[j];
    return k >= 1 && k <= d.n && !d.piece(Side::a, k).is_empty();
  }

  /// c_{j,k} - c_{j',k} = a_j - a_{j'} and c_{j,k} - c_{j,k'} independent of j.
  bool splitting_holds() const {
    for (const auto& s : terms_)
      for (const auto& t : terms_) {
        if (s.k == t.k && s.centre - t.centre != family_[s.j].lower() - family_[t.j].lower()) return false;
        if (s.j == t.j && s.centre - t.centre != pow2(s.k) + pow2(s.k) / 2 - pow2(t.k) - pow2(t.k) / 2)
          return false;
      }
    return true;
  }

  struct GapViolation {
    std::size_t j1, j2;
    unsigned k;
    Rational gap;
  };

  /// Pairs with |c_{j,k} - c_{j',k}| < 2^k.
  std::vector<GapViolation> gap_violations() const {
    std::vector<GapViolation> out;
    for (std::size_t s = 0; s < terms_.size(); ++s)
      for (std::size_t t = s + 1; t < terms_.size(); ++t) {
        if (terms_[s].k != terms_[t].k) continue;
        Rational gap = terms_[s].centre - terms_[t].centre;
        if (gap < 0) gap = -gap;
        if (gap < pow2(terms_[s].k)) out.push_back({terms_[s].j, terms_[t].j, terms_[s].k, gap});
      }
    return out;
  }

 private:
  DisjointFamily family_;
  DyadicDecomposition decomposition_;
  const AdaptedBump* bump_;
  std::vector<Term> terms_;
  unsigned max_n_ = 0;
  unsigned max_k_ = 0;
};

inline Complex kernel_value(const KernelSpec& spec, std::size_t j, unsigned k, double x, double y) {
  if (!spec.has_piece(j, k))
    throw DomainError("kernel_value: piece (" + std::to_string(j) + ", " + std::to_string(k) + ") is empty");
  const double s = std::ldexp(1.0, static_cast<int>(k));
  const double c = to_double(spec.centre(j, k));
  return s * spec.bump().spatial(s * (x - y)) * std::polar(1.0, -2.0 * std::numbers::pi * c * y);
}

/// I_m(x, z) = {y : 2^m |x - z| < |y - z| <= 2^{m+1} |x - z|} as
/// [left_lo, left_hi) U (right_lo, right_hi].
struct ShellSpec {
  double x = 0.0, z = 1.0;
  unsigned m = 1;
  double left_lo = 0.0, left_hi = 0.0, right_lo = 0.0, right_hi = 0.0;
  /// Smallest k >= 1 with 2^{-k} <= 2^m |x - z|, and with 2^{-k} <= 2^{2m/3} |x - z|.
  unsigned k0 = 1, k1 = 1;

  double distance() const { return std::abs(x - z); }
  double measure() const { return (left_hi - left_lo) + (right_hi - right_lo); }
};

inline ShellSpec shell(double x, double z, unsigned m) {
  if (x == z) throw DomainError("shell: x and z must differ");
  if (m < 1) throw DomainError("shell: m must be at least 1");
  ShellSpec s;
  s.x = x;
  s.z = z;
  s.m = m;
  const double d = std::abs(x - z);
  const double inner = std::ldexp(d, static_cast<int>(m)), outer = 2.0 * inner;
  s.left_lo = z - outer;
  s.left_hi = z - inner;
  s.right_lo = z + inner;
  s.right_hi = z + outer;
  auto first_k = [](double bound) {
    unsigned k = 1;
    while (std::ldexp(1.0, -static_cast<int>(k)) > bound) ++k;
    return k;
  };
  s.k0 = first_k(inner);
  s.k1 = first_k(std::exp2(2.0 * m / 3.0) * d);
  return s;
}

/// lambda[j][k-1] in C^d; entries of empty pieces are ignored.
using KernelCoefficients = std::vector<std::vector<std::vector<Complex>>>;

struct KernelIntegral {
  double value = 0.0;
  /// Rad_2 norm of the raw coefficients (p = 2); the integral uses lambda / rad2.
  RadEstimate rad2;
  /// mu_k = || sum_j eps_j lambda_{j,k} ||_{Rad(X*)} after normalization, k = 1..max depth.
  std::vector<double> mu;
  double sum_mu2 = 0.0;
  std::size_t nodes = 0;
};

namespace detail {

inline void check_kernel_inputs(const KernelSpec& spec, const LatticeSpec& x_spec, const KernelCoefficients& lam) {
  if (!x_spec.two_convex()) throw PreconditionError("kernel analysis needs r >= 2 so that X* has cotype 2");
  if (lam.size() != spec.sources()) throw PreconditionError("kernel analysis: one coefficient row per interval");
  for (std::size_t j = 0; j < lam.size(); ++j)
    for (unsigned k = 1; k <= lam[j].size(); ++k)
      if (spec.has_piece(j, k) && lam[j][k - 1].size() != x_spec.d)
        throw PreconditionError("kernel analysis: coefficient of wrong dimension");
  for (const auto& t : spec.terms())
    if (lam[t.j].size() < t.k) throw PreconditionError("kernel analysis: coefficient missing for a piece");
}

/// Rad_2 norm at p = 2: exhaustive up to 12 sign columns, else 512 Monte Carlo trials.
inline RadEstimate rad2_p2(const std::vector<std::vector<std::vector<Complex>>>& x, const LatticeSpec& spec,
                           std::uint64_t seed) {
  std::size_t max_k = 0;
  for (const auto& row : x) max_k = std::max(max_k, row.size());
  return rad2_norm_mc(x, spec, 2.0, SignEnsemble::automatic(double_index_columns(x.size(), max_k), seed, 512));
}

/// Coefficients restricted to non-empty pieces, zero elsewhere, shape J x max_depth.
inline KernelCoefficients masked(const KernelSpec& spec, const KernelCoefficients& lam, std::size_t d) {
  KernelCoefficients out(spec.sources(), std::vector<std::vector<Complex>>(spec.max_depth(), std::vector<Complex>(d)));
  for (const auto& t : spec.terms()) out[t.j][t.k - 1] = lam[t.j][t.k - 1];
  return out;
}

/// Integrals over the shell of || sum_{j,k} [K_{j,k}(x,y) - K_{j,k}(z,y)] lambda^s_{j,k} ||^2
/// for each coefficient set s (already normalized), by composite
/// Gauss-Legendre on spline-aligned panels, split until every value is
/// stable to 1e-8 relative.
inline std::vector<double> shell_integrals(const KernelSpec& spec, const ShellSpec& sh, double dual_r,
                                           const std::vector<KernelCoefficients>& lams, std::size_t* nodes_used) {
  const auto& terms = spec.terms();
  const std::size_t d = terms.empty() || lams.empty() ? 1 : lams[0][terms[0].j][terms[0].k - 1].size();
  // psi vanishes beyond the cutoff, so y further than cutoff / 2^{k_min}
  // from both x and z contributes nothing.
  unsigned k_min = spec.max_k();
  for (const auto& t : terms) k_min = std::min(k_min, t.k);
  const double reach = AdaptedBump::kCutoff / std::ldexp(1.0, static_cast<int>(k_min));
  const double lo_clip = std::min(sh.x, sh.z) - reach, hi_clip = std::max(sh.x, sh.z) + reach;
  struct Piece {
    double lo, hi;
  };
  std::vector<Piece> pieces;
  for (Piece p : {Piece{sh.left_lo, sh.left_hi}, Piece{sh.right_lo, sh.right_hi}}) {
    p.lo = std::max(p.lo, lo_clip);
    p.hi = std::min(p.hi, hi_clip);
    if (p.lo < p.hi) pieces.push_back(p);
  }
  // The cached psi is a cubic spline in its argument with knot spacing
  // kStep, so the integrand is smooth between the knots of psi(2^k(x - y))
  // and psi(2^k(z - y)). Those knots all lie on x + delta Z or z + delta Z,
  // delta = kStep / 2^{k_max}; panels run between consecutive grid points.
  const double delta = AdaptedBump::kStep / std::ldexp(1.0, static_cast<int>(spec.max_k()));
  auto breakpoints = [&](const Piece& p) {
    std::vector<double> b{p.lo, p.hi};
    for (double anchor : {sh.x, sh.z}) {
      for (double i = std::ceil((p.lo - anchor) / delta); anchor + i * delta < p.hi; i += 1.0)
        if (anchor + i * delta > p.lo) b.push_back(anchor + i * delta);
    }
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    return b;
  };
  std::vector<std::vector<double>> grids;
  for (const auto& p : pieces) grids.push_back(breakpoints(p));

  std::vector<double> diff(terms.size());
  std::vector<Complex> phase(terms.size()), acc(d);
  auto evaluate = [&](std::size_t split) {
    std::vector<double> out(lams.size(), 0.0);
    std::size_t count = 0;
    for (const auto& grid : grids)
      for (std::size_t g = 0; g + 1 < grid.size(); ++g)
      quadrature::for_each_node(grid[g], grid[g + 1], split, [&](double y, double w) {
        ++count;
        bool any = false;
        for (std::size_t i = 0; i < terms.size(); ++i) {
          const double s = std::ldexp(1.0, static_cast<int>(terms[i].k));
          diff[i] = s * (spec.bump().spatial(s * (sh.x - y)) - spec.bump().spatial(s * (sh.z - y)));
          any = any || diff[i] != 0.0;
          phase[i] = std::polar(diff[i], -2.0 * std::numbers::pi * terms[i].centre_value * y);
        }
        if (!any) return;
        for (std::size_t s = 0; s < lams.size(); ++s) {
          std::fill(acc.begin(), acc.end(), Complex{});
          for (std::size_t i = 0; i < terms.size(); ++i) {
            const auto& l = lams[s][terms[i].j][terms[i].k - 1];
            for (std::size_t wd = 0; wd < d; ++wd) acc[wd] += phase[i] * l[wd];
          }
          const double nv = lattice_norm(acc, dual_r);
          out[s] += w * nv * nv;
        }
      });
    if (nodes_used) *nodes_used = count;
    return out;
  };

  std::size_t split = 1;
  std::vector<double> prev = evaluate(split);
  for (int round = 0; round < 4; ++round) {
    split *= 2;
    std::vector<double> cur = evaluate(split);
    bool stable = true;
    for (std::size_t s = 0; s < cur.size(); ++s)
      if (std::abs(cur[s] - prev[s]) > 1e-8 * std::abs(cur[s]) && std::abs(cur[s] - prev[s]) > 1e-300)
        stable = false;
    if (stable) return cur;
    prev = std::move(cur);
  }
  throw NumericalError("kernel shell integral did not stabilise");
}

}  // namespace detail

/// The shell integral of || sum_{j,k} [K_{j,k}(x,y) - K_{j,k}(z,y)] lambda_{j,k} ||_{X*}^2
/// with lambda normalized to unit Rad_2(X*) norm. X = l^r_d, r >= 2.
inline KernelIntegral kernel_difference_integral(const KernelSpec& spec, const LatticeSpec& x_spec, double x,
                                                 double z, unsigned m, const KernelCoefficients& lam,
                                                 std::uint64_t seed = 0) {
  detail::check_kernel_inputs(spec, x_spec, lam);
  const LatticeSpec dual = x_spec.dual();
  KernelCoefficients l = detail::masked(spec, lam, x_spec.d);
  KernelIntegral out;
  out.rad2 = detail::rad2_p2(l, dual, seed);
  out.mu.assign(spec.max_depth(), 0.0);
  if (out.rad2.value == 0.0 || x == z) return out;
  for (auto& row : l)
    for (auto& v : row)
      for (auto& c : v) c /= out.rad2.value;
  for (unsigned k = 1; k <= spec.max_depth(); ++k) {
    std::vector<std::vector<Complex>> col;
    for (const auto& row : l) col.push_back(row[k - 1]);
    out.mu[k - 1] = rad_norm_mc(col, dual, 2.0, SignEnsemble::automatic(col.size(), seed, 512)).value;
    out.sum_mu2 += out.mu[k - 1] * out.mu[k - 1];
  }
  out.value = detail::shell_integrals(spec, shell(x, z, m), dual.r, {l}, &out.nodes)[0];
  return out;
}

/// Per-k contribution alpha_k = 2^{2k} sup_{y in I_m} |psi(2^k(x-y)) - psi(2^k(z-y))|^2 int_{I_m} ||q_k||^2
/// and the regime bound it is compared with.
struct AlphaOverlay {
  unsigned k = 0;
  double alpha = 0.0;
  double bound = 0.0;  // 2^{3k}|x-z|^2, 2^{4k} 2^m |x-z|^3 or 2^{-2k} 2^{-3m} |x-z|^{-3}
  int regime = 0;      // 0: k <= k0, 1: k0 < k < k1, 2: k >= k1
};

struct DecayRow {
  unsigned m = 0;
  double a_m = 0.0;
  double r_m = 0.0;
  unsigned k0 = 0, k1 = 0;
  std::vector<AlphaOverlay> overlay;
  /// max alpha_k / bound_k over k.
  double overlay_constant = 0.0;
};

struct DecayReport {
  double x = 0.0, z = 1.0;
  std::vector<DecayRow> rows;
  /// Least-squares slope of log2 A_m against m over rows with A_m > 0.
  std::optional<double> slope;
  double max_r = 0.0;
  double cutoff = AdaptedBump::kCutoff;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  double max_sum_mu2 = 0.0;
};

/// Random complex Gaussian coefficients, one set per sample.
inline std::vector<KernelCoefficients> random_coefficients(const KernelSpec& spec, std::size_t d,
                                                           std::size_t samples, std::uint64_t seed) {
  std::vector<KernelCoefficients> out;
  for (std::size_t s = 0; s < samples; ++s) {
    auto rng = random::CounterEngine::stream(seed, s);
    std::normal_distribution<double> g(0.0, 1.0);
    KernelCoefficients l(spec.sources(),
                         std::vector<std::vector<Complex>>(spec.max_depth(), std::vector<Complex>(d)));
    for (auto& row : l)
      for (auto& v : row)
        for (auto& c : v) c = Complex(g(rng), g(rng));
    out.push_back(detail::masked(spec, l, d));
  }
  return out;
}

/// A_m = max over the given lambda sets (each normalized to unit Rad_2 norm;
/// zero sets stay zero) of the shell integral, and r_m = A_m 2^{5m/3} |x - z|,
/// for m in [m_first, m_last] within [1, 12].
inline DecayReport decay_fit(const KernelSpec& spec, const LatticeSpec& x_spec, double x, double z, unsigned m_first,
                             unsigned m_last, std::vector<KernelCoefficients> lams, std::uint64_t seed = 0) {
  if (m_first < 1 || m_last > 12 || m_first > m_last) throw PreconditionError("decay_fit: m range must lie in [1, 12]");
  if (!x_spec.two_convex()) throw PreconditionError("decay_fit: needs r >= 2");
  for (const auto& l : lams) detail::check_kernel_inputs(spec, x_spec, l);
  const LatticeSpec dual = x_spec.dual();
  DecayReport rep;
  rep.x = x;
  rep.z = z;
  const std::size_t samples = lams.size();
  rep.samples = samples;
  rep.seed = seed;
  // q_k for each sample: mu_k^{-1} sum_j lambda_{j,k} e^{-2 pi i c_{j,k} y}.
  std::vector<std::vector<double>> mu(samples);
  for (std::size_t s = 0; s < samples; ++s) {
    lams[s] = detail::masked(spec, lams[s], x_spec.d);
    const double norm = detail::rad2_p2(lams[s], dual, seed).value;
    if (norm > 0.0)
      for (auto& row : lams[s])
        for (auto& v : row)
          for (auto& c : v) c /= norm;
    double sum = 0.0;
    for (unsigned k = 1; k <= spec.max_depth(); ++k) {
      std::vector<std::vector<Complex>> col;
      for (const auto& row : lams[s]) col.push_back(row[k - 1]);
      mu[s].push_back(rad_norm_mc(col, dual, 2.0, SignEnsemble::automatic(col.size(), seed, 512)).value);
      sum += mu[s].back() * mu[s].back();
    }
    rep.max_sum_mu2 = std::max(rep.max_sum_mu2, sum);
  }
  const double dist = std::abs(x - z);
  for (unsigned m = m_first; m <= m_last; ++m) {
    const ShellSpec sh = shell(x, z, m);
    DecayRow row;
    row.m = m;
    row.k0 = sh.k0;
    row.k1 = sh.k1;
    const auto vals = detail::shell_integrals(spec, sh, dual.r, lams, nullptr);
    for (double v : vals) row.a_m = std::max(row.a_m, v);
    row.r_m = row.a_m * std::exp2(5.0 * m / 3.0) * dist;

    // Overlay: per-k single-scale integrals with lambda restricted to column k.
    for (unsigned k = 1; k <= spec.max_k(); ++k) {
      AlphaOverlay ov;
      ov.k = k;
      double sup = 0.0;
      const double s2 = std::ldexp(1.0, static_cast<int>(k));
      for (int i = 0; i <= 256; ++i) {
        for (double y : {sh.left_lo + (sh.left_hi - sh.left_lo) * i / 256.0,
                         sh.right_lo + (sh.right_hi - sh.right_lo) * i / 256.0}) {
          const double v = spec.bump().spatial(s2 * (x - y)) - spec.bump().spatial(s2 * (z - y));
          sup = std::max(sup, v * v);
        }
      }
      std::vector<KernelCoefficients> col_lams;
      std::vector<std::size_t> owner;
      for (std::size_t s = 0; s < samples; ++s) {
        if (mu[s][k - 1] == 0.0) continue;
        KernelCoefficients q = lams[s];
        for (std::size_t j = 0; j < q.size(); ++j)
          for (unsigned kk = 1; kk <= q[j].size(); ++kk)
            for (auto& c : q[j][kk - 1]) c = kk == k ? c / mu[s][k - 1] : Complex{};
        col_lams.push_back(std::move(q));
        owner.push_back(s);
      }
      // int_{I_m} ||q_k||^2 is the shell integral of a kernel with psi
      // differences replaced by 1; evaluated by the same rule on a unit kernel.
      double q_int = 0.0;
      for (const auto& q : col_lams) {
        double acc = 0.0;
        const double len = sh.measure() / 2.0;
        const std::size_t panels = static_cast<std::size_t>(std::ceil(len * 64.0 * s2 / quadrature::kGaussPoints)) + 1;
        for (auto [lo, hi] : {std::pair{sh.left_lo, sh.left_hi}, std::pair{sh.right_lo, sh.right_hi}}) {
          quadrature::for_each_node(lo, hi, panels, [&](double y, double w) {
            std::vector<Complex> v(x_spec.d);
            for (const auto& t : spec.terms()) {
              if (t.k != k) continue;
              const Complex ph = std::polar(1.0, -2.0 * std::numbers::pi * t.centre_value * y);
              for (std::size_t wd = 0; wd < x_spec.d; ++wd) v[wd] += ph * q[t.j][k - 1][wd];
            }
            const double nv = lattice_norm(v, dual.r);
            acc += w * nv * nv;
          });
        }
        q_int = std::max(q_int, acc);
      }
      ov.alpha = s2 * s2 * sup * q_int;
      if (k <= sh.k0) {
        ov.regime = 0;
        ov.bound = std::ldexp(1.0, 3 * static_cast<int>(k)) * dist * dist;
      } else if (k < sh.k1) {
        ov.regime = 1;
        ov.bound = std::ldexp(1.0, 4 * static_cast<int>(k) + static_cast<int>(m)) * dist * dist * dist;
      } else {
        ov.regime = 2;
        ov.bound = std::ldexp(1.0, -2 * static_cast<int>(k) - 3 * static_cast<int>(m)) / (dist * dist * dist);
      }
      row.overlay_constant = std::max(row.overlay_constant, ov.alpha / ov.bound);
      row.overlay.push_back(ov);
    }
    rep.max_r = std::max(rep.max_r, row.r_m);
    rep.rows.push_back(std::move(row));
  }
  // Least-squares slope of log2 A_m.
  double n = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& r : rep.rows) {
    if (!(r.a_m > 0.0)) continue;
    const double ly = std::log2(r.a_m);
    n += 1;
    sx += r.m;
    sy += ly;
    sxx += static_cast<double>(r.m) * r.m;
    sxy += r.m * ly;
  }
  if (n >= 2) rep.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return rep;
}

/// decay_fit over `samples` random complex Gaussian lambda sets.
inline DecayReport decay_fit(const KernelSpec& spec, const LatticeSpec& x_spec, double x, double z, unsigned m_first,
                             unsigned m_last, std::size_t samples, std::uint64_t seed) {
  return decay_fit(spec, x_spec, x, z, m_first, m_last, random_coefficients(spec, x_spec.d, samples, seed), seed);
}

/// int_I |sum_j alpha_j e^{2 pi i gamma_j y}|^2 dy / (max(|I|, 1) sum_j |alpha_j|^2)
/// by composite Gauss-Legendre refined to 1e-13 relative.
inline double dirichlet_gap_ratio(const std::vector<double>& gamma, const std::vector<Complex>& alpha,
                                  const Interval& interval) {
  if (gamma.size() != alpha.size()) throw PreconditionError("dirichlet_gap_ratio: size mismatch");
  for (std::size_t j = 1; j < gamma.size(); ++j)
    if (!(gamma[j] - gamma[j - 1] >= 1.0))
      throw PreconditionError("dirichlet_gap_ratio: frequencies must increase with gaps >= 1");
  if (interval.is_empty()) return 0.0;
  double mass = 0.0, top = 0.0;
  for (std::size_t j = 0; j < alpha.size(); ++j) {
    mass += std::norm(alpha[j]);
    top = std::max(top, std::abs(gamma[j]));
  }
  if (mass == 0.0) return 0.0;
  const double lo = to_double(interval.lower()), hi = to_double(interval.upper());
  auto integrand = [&](double y) {
    Complex s = 0.0;
    for (std::size_t j = 0; j < gamma.size(); ++j) s += alpha[j] * std::polar(1.0, 2.0 * std::numbers::pi * gamma[j] * y);
    return std::norm(s);
  };
  auto panels = static_cast<std::size_t>(std::ceil((hi - lo) * (top + 1.0))) + 1;
  double prev = quadrature::composite_gauss(integrand, lo, hi, panels);
  for (int round = 0; round < 12; ++round) {
    panels *= 2;
    const double cur = quadrature::composite_gauss(integrand, lo, hi, panels);
    if (std::abs(cur - prev) <= 1e-13 * std::abs(cur)) return cur / (std::max(hi - lo, 1.0) * mass);
    prev = cur;
  }
  throw NumericalError("dirichlet_gap_ratio: quadrature did not stabilise");
}

/// f sampled on cells [origin + n h, origin + (n+1) h), h = L / N, and zero
/// outside the window.
struct WindowedSignal {
  LatticeSignal f;
  double origin = 0.0;

  double step() const { return to_double(f.period()) / static_cast<double>(f.size()); }
  double node(std::size_t n) const { return origin + (static_cast<double>(n) + 0.5) * step(); }
};

struct BmoReport {
  Interval interval;
  double a = 0.0;
  double b = 0.0;
  std::uint64_t seed = 0;
  bool exhaustive = true;
  std::size_t x_nodes = 0;
};

/// A = (1/|I|) int_I || int_{(2I)^c} [K(x,y) - K(z,y)] f(y) dy ||_{Rad_2(X)} dx and
/// B = (1/|I|) int_I || int_{2I} K(x,y) f(y) dy ||_{Rad_2(X)} dx, z the centre of I.
/// y is integrated by the midpoint rule on the signal cells, x by 4-panel
/// Gauss-Legendre on I.
inline BmoReport bmo_oscillation_report(const KernelSpec& spec, const WindowedSignal& ws, const Interval& interval,
                                        std::uint64_t seed) {
  const LatticeSignal& f = ws.f;
  for (std::size_t t = 0; t < f.size(); ++t)
    if (lattice_norm(f.row(t), f.spec()) > 1.0 + 1e-12)
      throw PreconditionError("bmo_oscillation_report: ||f||_inf must not exceed 1");
  if (interval.is_empty()) throw DomainError("bmo_oscillation_report: empty interval");
  BmoReport rep{interval};
  rep.seed = seed;
  const double lo = to_double(interval.lower()), hi = to_double(interval.upper());
  const double zc = 0.5 * (lo + hi), len = hi - lo;
  const Interval dbl = interval.doubled();
  const double dlo = to_double(dbl.lower()), dhi = to_double(dbl.upper());
  const auto& terms = spec.terms();
  const std::size_t d = f.dim(), N = f.size();
  const double h = ws.step();

  // Nonzero samples split by membership of the node in 2I, with phases.
  struct Node {
    double y;
    bool inside;
    std::vector<Complex> weighted;  // per term: h e^{-2 pi i c y} f(y), d entries each
  };
  std::vector<Node> nodes;
  for (std::size_t n = 0; n < N; ++n) {
    const auto row = f.row(n);
    if (std::all_of(row.begin(), row.end(), [](const Complex& c) { return c == Complex{}; })) continue;
    Node nd{ws.node(n), false, {}};
    nd.inside = dlo < nd.y && nd.y <= dhi;
    nd.weighted.resize(terms.size() * d);
    for (std::size_t i = 0; i < terms.size(); ++i) {
      const Complex ph = h * std::polar(1.0, -2.0 * std::numbers::pi * terms[i].centre_value * nd.y);
      for (std::size_t w = 0; w < d; ++w) nd.weighted[i * d + w] = ph * row[w];
    }
    nodes.push_back(std::move(nd));
  }

  std::size_t max_k = 0;
  for (const auto& t : terms) max_k = std::max<std::size_t>(max_k, t.k);
  const SignEnsemble ens = SignEnsemble::automatic(double_index_columns(spec.sources(), max_k), seed, 512);
  rep.exhaustive = ens.is_exhaustive();

  // v_i(x) = int K_{term i}(x, y) f(y) dy over the chosen part.
  auto integrals = [&](double x, bool inside) {
    std::vector<Complex> v(terms.size() * d);
    for (const auto& nd : nodes) {
      if (nd.inside != inside) continue;
      for (std::size_t i = 0; i < terms.size(); ++i) {
        const double s = std::ldexp(1.0, static_cast<int>(terms[i].k));
        const double kv = s * spec.bump().spatial(s * (x - nd.y));
        if (kv == 0.0) continue;
        for (std::size_t w = 0; w < d; ++w) v[i * d + w] += kv * nd.weighted[i * d + w];
      }
    }
    return v;
  };
  auto rad2 = [&](const std::vector<Complex>& v) {
    std::vector<std::vector<std::vector<Complex>>> x(spec.sources(),
                                                     std::vector<std::vector<Complex>>(max_k, std::vector<Complex>(d)));
    for (std::size_t i = 0; i < terms.size(); ++i)
      for (std::size_t w = 0; w < d; ++w) x[terms[i].j][terms[i].k - 1][w] = v[i * d + w];
    return rad2_norm_mc(x, f.spec(), 2.0, ens).value;
  };

  const std::vector<Complex> outer_z = integrals(zc, false);
  quadrature::for_each_node(lo, hi, 4, [&](double x, double w) {
    ++rep.x_nodes;
    std::vector<Complex> outer = integrals(x, false);
    for (std::size_t i = 0; i < outer.size(); ++i) outer[i] -= outer_z[i];
    rep.a += w * rad2(outer);
    rep.b += w * rad2(integrals(x, true));
  });
  rep.a /= len;
  rep.b /= len;
  return rep;
}

}  // namespace lpr
