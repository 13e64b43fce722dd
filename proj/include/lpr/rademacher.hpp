#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "lpr/lattice.hpp"
#include "lpr/random.hpp"

namespace lpr {

/// A T x C matrix of +-1 entries. Either every one of the 2^C patterns once
/// (exhaustive) or T Monte Carlo rows, row t drawn from counter stream
/// (seed, t).
class SignEnsemble {
 public:
  static constexpr std::size_t kExhaustiveLimit = 12;  // 2^12 = 4096 patterns
  static constexpr std::size_t kMinTrials = 64;

  static SignEnsemble exhaustive(std::size_t cols) {
    if (cols > 24) throw PreconditionError("SignEnsemble::exhaustive: too many columns");
    SignEnsemble e;
    e.cols_ = cols;
    e.trials_ = std::size_t{1} << cols;
    e.exhaustive_ = true;
    e.signs_.resize(e.trials_ * cols);
    for (std::size_t t = 0; t < e.trials_; ++t)
      for (std::size_t c = 0; c < cols; ++c) e.signs_[t * cols + c] = ((t >> c) & 1U) ? -1 : 1;
    return e;
  }

  static SignEnsemble monte_carlo(std::size_t cols, std::size_t trials, std::uint64_t seed) {
    if (trials < kMinTrials)
      throw PreconditionError("SignEnsemble: Monte Carlo needs at least 64 trials");
    SignEnsemble e;
    e.cols_ = cols;
    e.trials_ = trials;
    e.seed_ = seed;
    e.signs_.resize(trials * cols);
    for (std::size_t t = 0; t < trials; ++t) {
      const auto stream = random::CounterEngine::stream(seed, t);
      for (std::size_t c = 0; c < cols; ++c) {
        const std::uint64_t word = stream.at(c / 64 + 1);
        e.signs_[t * cols + c] = ((word >> (c % 64)) & 1U) ? -1 : 1;
      }
    }
    return e;
  }

  /// Exhaustive when 2^cols <= 4096, Monte Carlo otherwise.
  static SignEnsemble automatic(std::size_t cols, std::uint64_t seed, std::size_t trials = 1024) {
    return cols <= kExhaustiveLimit ? exhaustive(cols) : monte_carlo(cols, trials, seed);
  }

  std::size_t trials() const { return trials_; }
  std::size_t cols() const { return cols_; }
  int sign(std::size_t t, std::size_t c) const { return signs_[t * cols_ + c]; }
  std::uint64_t seed() const { return seed_; }
  bool is_exhaustive() const { return exhaustive_; }
  std::string generator() const { return exhaustive_ ? "exhaustive" : "splitmix64-counter"; }

 private:
  SignEnsemble() = default;
  std::size_t cols_ = 0;
  std::size_t trials_ = 0;
  std::uint64_t seed_ = 0;
  bool exhaustive_ = false;
  std::vector<signed char> signs_;
};

/// Seed and Monte Carlo trial count from which ensembles of any width are made.
struct SignSource {
  std::uint64_t seed = 0;
  std::size_t trials = 1024;

  SignEnsemble ensemble(std::size_t cols) const { return SignEnsemble::automatic(cols, seed, trials); }
};

/// ((1/T) sum_t || sum_j s_tj x_j ||^p)^{1/p} with a bootstrap standard error.
struct RadEstimate {
  double value = 0.0;
  double std_error = 0.0;
  double p = 2.0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  bool exhaustive = true;
};

/// Coefficients x_{point, term} in C^d, stored point-major.
struct RadTerms {
  std::size_t points = 1;
  std::size_t terms = 0;
  std::size_t dim = 1;
  std::vector<Complex> data;
  /// Sign columns multiplied into each term; `second` is npos for single signs.
  std::vector<std::size_t> first;
  std::vector<std::size_t> second;

  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

  Complex& at(std::size_t pt, std::size_t term, std::size_t w) {
    return data[(pt * terms + term) * dim + w];
  }
  std::size_t sign_columns() const {
    std::size_t c = 0;
    for (std::size_t i = 0; i < terms; ++i) {
      c = std::max(c, first[i] + 1);
      if (second[i] != npos) c = std::max(c, second[i] + 1);
    }
    return c;
  }
};

namespace detail {

inline std::vector<double> per_trial_moments(const RadTerms& x, double r, double p,
                                             const SignEnsemble& ens) {
  if (ens.cols() < x.sign_columns())
    throw PreconditionError("rademacher: ensemble has too few sign columns");
  std::vector<double> moments(ens.trials(), 0.0);
  std::vector<Complex> acc(x.dim);
  std::vector<int> s(x.terms);
  for (std::size_t t = 0; t < ens.trials(); ++t) {
    for (std::size_t i = 0; i < x.terms; ++i) {
      s[i] = ens.sign(t, x.first[i]);
      if (x.second[i] != RadTerms::npos) s[i] *= ens.sign(t, x.second[i]);
    }
    double total = 0.0;
    for (std::size_t pt = 0; pt < x.points; ++pt) {
      std::fill(acc.begin(), acc.end(), Complex{});
      const Complex* row = x.data.data() + pt * x.terms * x.dim;
      for (std::size_t i = 0; i < x.terms; ++i) {
        const Complex* v = row + i * x.dim;
        if (s[i] > 0)
          for (std::size_t w = 0; w < x.dim; ++w) acc[w] += v[w];
        else
          for (std::size_t w = 0; w < x.dim; ++w) acc[w] -= v[w];
      }
      total += std::pow(lattice_norm(acc, r), p);
    }
    moments[t] = total / static_cast<double>(x.points);
  }
  return moments;
}

inline RadEstimate summarize(const std::vector<double>& moments, double p, const SignEnsemble& ens) {
  RadEstimate est;
  est.p = p;
  est.trials = ens.trials();
  est.seed = ens.seed();
  est.exhaustive = ens.is_exhaustive();
  double mean = 0.0;
  for (double m : moments) mean += m;
  mean /= static_cast<double>(moments.size());
  est.value = std::pow(mean, 1.0 / p);
  if (ens.is_exhaustive()) return est;

  constexpr std::size_t kResamples = 200;
  random::CounterEngine engine = random::CounterEngine::stream(ens.seed(), 0xB007B007ULL);
  std::uniform_int_distribution<std::size_t> pick(0, moments.size() - 1);
  double s1 = 0.0, s2 = 0.0;
  for (std::size_t b = 0; b < kResamples; ++b) {
    double m = 0.0;
    for (std::size_t i = 0; i < moments.size(); ++i) m += moments[pick(engine)];
    const double v = std::pow(m / static_cast<double>(moments.size()), 1.0 / p);
    s1 += v;
    s2 += v * v;
  }
  const double mu = s1 / kResamples;
  est.std_error = std::sqrt(std::max(0.0, s2 / kResamples - mu * mu));
  return est;
}

}  // namespace detail

inline RadEstimate rad_norm(const RadTerms& x, double r, double p, const SignEnsemble& ens) {
  if (!(p >= 1.0) || std::isinf(p)) throw PreconditionError("rad_norm: p must lie in [1, inf)");
  if (x.terms == 0) {
    RadEstimate e;
    e.p = p;
    e.trials = ens.trials();
    e.seed = ens.seed();
    e.exhaustive = ens.is_exhaustive();
    return e;
  }
  return detail::summarize(detail::per_trial_moments(x, r, p, ens), p, ens);
}

/// Terms for || sum_j eps_j x_j || with x_j in C^d.
inline RadTerms single_index_terms(const std::vector<std::vector<Complex>>& xs) {
  RadTerms t;
  t.terms = xs.size();
  t.dim = xs.empty() ? 1 : xs.front().size();
  t.data.reserve(t.terms * t.dim);
  for (std::size_t j = 0; j < xs.size(); ++j) {
    if (xs[j].size() != t.dim) throw PreconditionError("rad_norm: vectors of unequal dimension");
    t.data.insert(t.data.end(), xs[j].begin(), xs[j].end());
    t.first.push_back(j);
    t.second.push_back(RadTerms::npos);
  }
  return t;
}

/// Terms for || sum_j eps_j g_j ||_{L^p(grid; Rad(X))}.
inline RadTerms single_index_terms(const std::vector<LatticeSignal>& gs) {
  RadTerms t;
  if (gs.empty()) return t;
  t.points = gs.front().size();
  t.terms = gs.size();
  t.dim = gs.front().dim();
  t.data.resize(t.points * t.terms * t.dim);
  for (std::size_t j = 0; j < gs.size(); ++j) {
    if (!gs[j].same_grid(gs.front())) throw PreconditionError("rad_norm: shape mismatch");
    for (std::size_t pt = 0; pt < t.points; ++pt)
      for (std::size_t w = 0; w < t.dim; ++w) t.at(pt, j, w) = gs[j].at(pt, w);
    t.first.push_back(j);
    t.second.push_back(RadTerms::npos);
  }
  return t;
}

/// Terms for || sum_{j,k} eps_j eps'_k x_{jk} ||; rows may be ragged.
/// Column j carries eps_j and column J + k carries eps'_k.
template <class T>
RadTerms double_index_terms(const std::vector<std::vector<T>>& x) {
  std::vector<T> flat;
  std::size_t max_k = 0;
  for (const auto& row : x) max_k = std::max(max_k, row.size());
  RadTerms t;
  std::vector<std::size_t> first, second;
  for (std::size_t j = 0; j < x.size(); ++j)
    for (std::size_t k = 0; k < x[j].size(); ++k) {
      flat.push_back(x[j][k]);
      first.push_back(j);
      second.push_back(x.size() + k);
    }
  t = single_index_terms(flat);
  t.first = std::move(first);
  t.second = std::move(second);
  return t;
}

/// Terms for || sum_{j,k} eps_{jk} x_{jk} || with independent signs.
template <class T>
RadTerms independent_index_terms(const std::vector<std::vector<T>>& x) {
  std::vector<T> flat;
  for (const auto& row : x) flat.insert(flat.end(), row.begin(), row.end());
  return single_index_terms(flat);
}

inline std::size_t double_index_columns(std::size_t rows, std::size_t max_cols) {
  return rows + max_cols;
}

inline RadEstimate rad_norm_mc(const std::vector<std::vector<Complex>>& xs, const LatticeSpec& spec,
                               double p, const SignEnsemble& ens) {
  return rad_norm(single_index_terms(xs), spec.r, p, ens);
}

inline RadEstimate rad_norm_mc(const std::vector<LatticeSignal>& gs, double p,
                               const SignEnsemble& ens) {
  if (gs.empty()) return rad_norm(RadTerms{}, 2.0, p, ens);
  return rad_norm(single_index_terms(gs), gs.front().spec().r, p, ens);
}

/// Rad_2 norm with independent eps_j, eps'_k (columns j and J + k).
inline RadEstimate rad2_norm_mc(const std::vector<std::vector<std::vector<Complex>>>& x,
                                const LatticeSpec& spec, double p, const SignEnsemble& ens) {
  return rad_norm(double_index_terms(x), spec.r, p, ens);
}

inline RadEstimate rad2_norm_mc(const std::vector<std::vector<LatticeSignal>>& x, double p,
                                const SignEnsemble& ens) {
  double r = 2.0;
  for (const auto& row : x)
    if (!row.empty()) r = row.front().spec().r;
  return rad_norm(double_index_terms(x), r, p, ens);
}

struct ContractionReport {
  double ratio = 0.0;
  RadEstimate scaled;
  RadEstimate original;
  bool real_coefficients = true;
  /// Real case only: ratio <= 1 + 3 * combined standard error.
  bool within_bound = true;
};

/// || sum alpha_j eps_j x_j || / || sum eps_j x_j || on a shared ensemble.
inline ContractionReport contraction_check(const std::vector<std::vector<Complex>>& xs,
                                           const std::vector<Complex>& alpha,
                                           const LatticeSpec& spec, double p,
                                           const SignEnsemble& ens) {
  if (alpha.size() != xs.size()) throw PreconditionError("contraction_check: size mismatch");
  ContractionReport rep;
  std::vector<std::vector<Complex>> scaled = xs;
  for (std::size_t j = 0; j < xs.size(); ++j) {
    if (std::abs(alpha[j]) > 1.0)
      throw PreconditionError("contraction_check: |alpha_j| must not exceed 1");
    if (alpha[j].imag() != 0.0) rep.real_coefficients = false;
    for (auto& c : scaled[j]) c *= alpha[j];
  }
  rep.scaled = rad_norm_mc(scaled, spec, p, ens);
  rep.original = rad_norm_mc(xs, spec, p, ens);
  if (rep.original.value == 0.0) return rep;
  rep.ratio = rep.scaled.value / rep.original.value;
  if (rep.real_coefficients) {
    double rel = 0.0;
    if (rep.scaled.value > 0.0) rel += std::pow(rep.scaled.std_error / rep.scaled.value, 2);
    rel += std::pow(rep.original.std_error / rep.original.value, 2);
    rep.within_bound = rep.ratio <= 1.0 + 3.0 * rep.ratio * std::sqrt(rel);
  }
  return rep;
}

struct KhintchineAlphaReport {
  double rad_vs_square = 0.0;
  double alpha_property = 0.0;
  RadEstimate rad;
  double square_norm = 0.0;
  RadEstimate rad2;
  RadEstimate independent;
};

/// For a J x K array g_{jk} of lattice signals: the ratio of the Rademacher
/// norm to the square-function norm (all terms, single signs), and the
/// ratio of the eps_j eps'_k norm to the independent eps_{jk} norm.
inline KhintchineAlphaReport khintchine_alpha_report(const std::vector<std::vector<LatticeSignal>>& gs,
                                                     double p, const SignSource& source) {
  KhintchineAlphaReport rep;
  std::vector<LatticeSignal> flat;
  std::size_t max_k = 0;
  for (const auto& row : gs) {
    flat.insert(flat.end(), row.begin(), row.end());
    max_k = std::max(max_k, row.size());
  }
  if (flat.empty()) throw PreconditionError("khintchine_alpha_report: no terms");
  rep.rad = rad_norm_mc(flat, p, source.ensemble(flat.size()));
  rep.square_norm = mixed_norm(square_sum(flat), p);
  rep.rad_vs_square = rep.square_norm == 0.0 ? 0.0 : rep.rad.value / rep.square_norm;
  rep.rad2 = rad2_norm_mc(gs, p, source.ensemble(double_index_columns(gs.size(), max_k)));
  rep.independent = rep.rad;
  rep.alpha_property = rep.independent.value == 0.0 ? 0.0 : rep.rad2.value / rep.independent.value;
  return rep;
}

struct RieszTransferReport {
  double c_row = 0.0;
  double lhs = 0.0;
  RadEstimate rhs;
  double ratio = 0.0;
};

/// Compares || sum_j h_j a_j ||_{L^2(Sigma; Y)} with c_row times the
/// Rademacher average of (a_j), Y = l^r_d with r <= 2 (cotype 2).
/// Row j of `h` is h_j on a counting-measure space; c_row is the largest
/// singular value of h.
inline RieszTransferReport riesz_transfer_check(const Eigen::MatrixXcd& h,
                                                const std::vector<std::vector<Complex>>& as,
                                                const LatticeSpec& spec, const SignEnsemble& ens) {
  if (spec.r > 2.0) throw PreconditionError("riesz_transfer_check: Y must have cotype 2 (r <= 2)");
  if (static_cast<std::size_t>(h.rows()) != as.size())
    throw PreconditionError("riesz_transfer_check: one row of h per vector");
  RieszTransferReport rep;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(h);
  rep.c_row = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
  double sum = 0.0;
  std::vector<Complex> acc(spec.d);
  for (Eigen::Index s = 0; s < h.cols(); ++s) {
    std::fill(acc.begin(), acc.end(), Complex{});
    for (std::size_t j = 0; j < as.size(); ++j)
      for (std::size_t w = 0; w < spec.d; ++w) acc[w] += h(static_cast<Eigen::Index>(j), s) * as[j][w];
    const double n = lattice_norm(acc, spec);
    sum += n * n;
  }
  rep.lhs = std::sqrt(sum);
  rep.rhs = rad_norm_mc(as, spec, 2.0, ens);
  const double denom = rep.c_row * rep.rhs.value;
  rep.ratio = denom == 0.0 ? 0.0 : rep.lhs / denom;
  return rep;
}

}  // namespace lpr
