#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "lpr/corpus.hpp"
#include "lpr/dyadic.hpp"
#include "lpr/maximal.hpp"
#include "lpr/parallel.hpp"
#include "lpr/rademacher.hpp"

namespace lpr {

inline void require_lpr_exponent(double p) {
  if (!(p >= 2.0)) throw PreconditionError("LPR experiments need p >= 2");
}

/// (sum_j |S_{I_j} f|^2)^{1/2}, coordinatewise.
inline LatticeSignal square_function(const LatticeSignal& f, const DisjointFamily& family) {
  const LatticeSpectrum spectrum(f);
  std::vector<double> acc(f.values().size(), 0.0);
  for (const auto& i : family) {
    const LatticeSignal g = spectrum.synthesize(spectrum.indicator(i));
    for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += std::norm(g.values()[k]);
  }
  LatticeSignal out = LatticeSignal::zeros(f.spec(), f.period(), f.size());
  for (std::size_t k = 0; k < acc.size(); ++k) out.values()[k] = std::sqrt(acc[k]);
  return out;
}

/// ||(sum_j |S_{I_j} f|^2)^{1/2}||_{L^p(X)} / ||f||_{L^p(X)}; 0 for f = 0.
inline double lpr_square_ratio(const LatticeSignal& f, const DisjointFamily& family, double p) {
  require_lpr_exponent(p);
  const double fn = mixed_norm(f, p);
  if (fn == 0.0) return 0.0;
  return mixed_norm(square_function(f, family), p) / fn;
}

enum class RadMode { direct, dyadic };

inline const char* to_string(RadMode m) { return m == RadMode::direct ? "direct" : "dyadic"; }

struct RadRatio {
  RadMode mode = RadMode::direct;
  double ratio = 0.0;
  double std_error = 0.0;
  double f_norm = 0.0;
  RadEstimate estimate;
  /// Dyadic mode: the side attaining the maximum.
  Side side = Side::a;
};

/// Direct: || sum_j eps_j S_{I_j} f ||_{L^p(Rad X)} / ||f||. Dyadic: the
/// larger over u = a, b of || sum_{j,k} eps_j eps'_k S_{I^u_{j,k}} f || / ||f||,
/// which needs every |I_j| >= 4.
inline RadRatio lpr_rad_ratio(const LatticeSignal& f, const DisjointFamily& family, double p,
                              const SignSource& signs, RadMode mode) {
  require_lpr_exponent(p);
  if (mode == RadMode::dyadic && !family.empty() && family.min_length() < 4)
    throw PreconditionError("lpr_rad_ratio: dyadic mode needs every |I_j| >= 4");
  RadRatio out;
  out.mode = mode;
  out.f_norm = mixed_norm(f, p);
  const LatticeSpectrum spectrum(f);
  auto project = [&](const Interval& i) {
    return i.is_empty() ? LatticeSignal::zeros(f.spec(), f.period(), f.size())
                        : spectrum.synthesize(spectrum.indicator(i));
  };
  if (mode == RadMode::direct) {
    std::vector<LatticeSignal> gs;
    for (const auto& i : family) gs.push_back(project(i));
    out.estimate = rad_norm_mc(gs, p, signs.ensemble(gs.size()));
  } else {
    const DyadicDecomposition dec = dyadic_decompose(family);
    bool first = true;
    for (Side side : {Side::a, Side::b}) {
      std::vector<std::vector<LatticeSignal>> x;
      std::size_t max_k = 0;
      for (const auto& d : dec.intervals) {
        std::vector<LatticeSignal> row;
        for (const auto& piece : d.pieces(side)) row.push_back(project(piece));
        max_k = std::max(max_k, row.size());
        x.push_back(std::move(row));
      }
      const RadEstimate est = rad2_norm_mc(x, p, signs.ensemble(double_index_columns(x.size(), max_k)));
      if (first || est.value > out.estimate.value) {
        out.estimate = est;
        out.side = side;
      }
      first = false;
    }
  }
  if (out.f_norm > 0.0) {
    out.ratio = out.estimate.value / out.f_norm;
    out.std_error = out.estimate.std_error / out.f_norm;
  }
  return out;
}

struct DominationReport {
  LatticeSignal g;
  /// max over (t, w) with M_2 f(t, w) > 0 of G(f)_sharp(t, w) / M_2 f(t, w).
  double dom_ratio = 0.0;
  std::size_t degree = 0;
};

/// G(f) = (sum_I |psi_I * f|^2)^{1/2} and its pointwise domination ratio,
/// both per coordinate.
inline DominationReport g_domination_report(const LatticeSignal& f, const DisjointFamily& family,
                                            const AdaptedBump& bump = standard_bump()) {
  const LatticeSpectrum spectrum(f);
  std::vector<double> acc(f.values().size(), 0.0);
  for (const auto& i : family) {
    const LatticeSignal g = spectrum.synthesize(adapted_multiplier(i, f.period(), f.size(), bump));
    for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += std::norm(g.values()[k]);
  }
  LatticeSignal g = LatticeSignal::zeros(f.spec(), f.period(), f.size());
  for (std::size_t k = 0; k < acc.size(); ++k) g.values()[k] = std::sqrt(acc[k]);

  DominationReport out{g, 0.0, family.empty() ? 0 : well_distributed_degree(family)};
  const LatticeSignal sharp = sharp_function_coordinatewise(g);
  const LatticeSignal m2 = mq_maximal(f, 2.0, MaximalMode::coordinatewise);
  for (std::size_t k = 0; k < acc.size(); ++k) {
    const double m = m2.values()[k].real();
    if (m > 0.0) out.dom_ratio = std::max(out.dom_ratio, sharp.values()[k].real() / m);
  }
  return out;
}

enum class FamilyKind { random, covering, pieces, long_intervals };
enum class SignalKind { noise, trig };

/// Everything that determines a corpus of (signal, family) cases.
struct ExperimentConfig {
  std::size_t n = 1024;
  Rational period = 1;
  double p = 4.0;
  LatticeSpec spec{1, 2.0};
  FamilyKind family = FamilyKind::random;
  std::size_t min_count = 1;
  std::size_t max_count = 8;
  /// Grid on which families are drawn; 0 means n. Fixing it keeps families
  /// unchanged when n is refined.
  std::size_t family_grid = 0;
  SignalKind signal = SignalKind::noise;
  corpus::SignalParams signal_params;
  std::size_t trials = 1024;
  std::uint64_t seed = 7;
  std::size_t cases = 100;
  std::size_t refine_rounds = 100;
  std::size_t jobs = 1;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Seed of case `id`; every random choice of the case flows from it.
inline std::uint64_t case_seed(std::uint64_t master, std::uint64_t id) { return random::derive(master, id); }

struct CaseInput {
  DisjointFamily family;
  LatticeSignal signal;
};

inline CaseInput make_case(const ExperimentConfig& cfg, std::uint64_t seed) {
  auto fam_rng = random::CounterEngine::stream(seed, 1);
  auto sig_rng = random::CounterEngine::stream(seed, 2);
  const std::size_t grid = cfg.family_grid == 0 ? cfg.n : cfg.family_grid;
  const auto count = static_cast<std::size_t>(corpus::uniform_int(
      fam_rng, static_cast<std::int64_t>(cfg.min_count), static_cast<std::int64_t>(cfg.max_count)));
  DisjointFamily fam;
  switch (cfg.family) {
    case FamilyKind::random: fam = corpus::random_frequency_family(fam_rng, grid, cfg.period, count); break;
    case FamilyKind::covering: fam = corpus::random_covering_family(fam_rng, grid, cfg.period, count); break;
    case FamilyKind::pieces:
      fam = corpus::random_piece_family(fam_rng, grid, cfg.period, cfg.max_count, Side::a);
      break;
    case FamilyKind::long_intervals:
      fam = corpus::random_long_family(fam_rng, grid, cfg.period, cfg.max_count);
      break;
  }
  LatticeSignal f = cfg.signal == SignalKind::noise
                        ? corpus::random_noise_signal(sig_rng, cfg.spec, cfg.period, cfg.n, cfg.signal_params.real)
                        : corpus::random_trig_signal(sig_rng, cfg.spec, cfg.period, cfg.n, cfg.signal_params);
  return {std::move(fam), std::move(f)};
}

inline SignSource case_signs(const ExperimentConfig& cfg, std::uint64_t seed) {
  return {random::derive(seed, 3), cfg.trials};
}

struct CaseRatio {
  std::size_t id = 0;
  std::uint64_t seed = 0;
  double ratio = 0.0;
  std::size_t family_size = 0;
};

struct RatioReport {
  double p = 0.0;
  LatticeSpec spec;
  std::uint64_t master_seed = 0;
  std::vector<CaseRatio> cases;
  double max = 0.0;
  std::size_t argmax_id = 0;
  std::uint64_t argmax_seed = 0;
  /// Wall-clock seconds; never serialized.
  double runtime = 0.0;

  /// Recomputes the maximum; ties go to the earliest case in list order.
  void reduce() {
    max = 0.0;
    argmax_id = 0;
    argmax_seed = 0;
    bool first = true;
    for (const auto& c : cases)
      if (first || c.ratio > max) {
        max = c.ratio;
        argmax_id = c.id;
        argmax_seed = c.seed;
        first = false;
      }
  }
};

/// Union of two reports over disjoint case sets, cases kept in id order.
inline RatioReport merge_reports(const RatioReport& x, const RatioReport& y) {
  RatioReport out = x;
  out.cases.insert(out.cases.end(), y.cases.begin(), y.cases.end());
  std::stable_sort(out.cases.begin(), out.cases.end(),
                   [](const CaseRatio& a, const CaseRatio& b) { return a.id < b.id; });
  out.reduce();
  out.runtime = x.runtime + y.runtime;
  return out;
}

/// Runs `ratio_of(seed)` for cases first .. first + count - 1 and reduces in
/// case order.
template <class RatioOf>
RatioReport run_corpus(const ExperimentConfig& cfg, std::size_t first, std::size_t count, RatioOf&& ratio_of) {
  const auto start = std::chrono::steady_clock::now();
  RatioReport rep;
  rep.p = cfg.p;
  rep.spec = cfg.spec;
  rep.master_seed = cfg.seed;
  rep.cases = parallel_map(count, cfg.jobs, [&](std::size_t i) {
    const std::size_t id = first + i;
    const std::uint64_t seed = case_seed(cfg.seed, id);
    const auto [ratio, size] = ratio_of(seed);
    return CaseRatio{id, seed, ratio, size};
  });
  rep.reduce();
  rep.runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

/// Square-function ratio of one case, after `refine_rounds` greedy steps:
/// f is perturbed by 0.1 rms(f) Gaussian noise and the change is kept when
/// the ratio grows.
inline std::pair<double, std::size_t> square_case_ratio(const ExperimentConfig& cfg, std::uint64_t seed) {
  CaseInput in = make_case(cfg, seed);
  double best = lpr_square_ratio(in.signal, in.family, cfg.p);
  if (cfg.refine_rounds > 0) {
    auto rng = random::CounterEngine::stream(seed, 4);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (std::size_t r = 0; r < cfg.refine_rounds; ++r) {
      double energy = 0.0;
      for (const auto& c : in.signal.values()) energy += std::norm(c);
      const double rms = std::sqrt(energy / static_cast<double>(in.signal.values().size()));
      LatticeSignal trial = in.signal;
      for (auto& c : trial.values()) c += 0.1 * rms * Complex(gauss(rng), gauss(rng));
      const double ratio = lpr_square_ratio(trial, in.family, cfg.p);
      if (ratio > best) {
        best = ratio;
        in.signal = std::move(trial);
      }
    }
  }
  return {best, in.family.size()};
}

/// Corpus maximum of the square-function ratio over cases first .. first + count - 1.
inline RatioReport estimate_constant(const ExperimentConfig& cfg, std::size_t first, std::size_t count) {
  return run_corpus(cfg, first, count, [&](std::uint64_t seed) { return square_case_ratio(cfg, seed); });
}

inline RatioReport estimate_constant(const ExperimentConfig& cfg) { return estimate_constant(cfg, 0, cfg.cases); }

inline RadRatio rad_case(const ExperimentConfig& cfg, std::uint64_t seed, RadMode mode) {
  const CaseInput in = make_case(cfg, seed);
  return lpr_rad_ratio(in.signal, in.family, cfg.p, case_signs(cfg, seed), mode);
}

inline DominationReport domination_case(const ExperimentConfig& cfg, std::uint64_t seed) {
  const CaseInput in = make_case(cfg, seed);
  return g_domination_report(in.signal, in.family);
}

}  // namespace lpr
