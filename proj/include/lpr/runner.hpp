#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "lpr/config.hpp"
#include "lpr/kernel.hpp"
#include "lpr/lpr_experiments.hpp"
#include "lpr/maximal.hpp"
#include "lpr/parallel.hpp"

namespace lpr::runner {

using config::ExperimentId;
using io::json;

enum ExitCode : int { kOk = 0, kIoFailure = 1, kValidation = 2, kNumerical = 3 };

struct RunManifest {
  ExperimentId experiment = ExperimentId::decompose;
  /// Empty path: every config field takes its default.
  std::filesystem::path config_path;
  std::filesystem::path out;
  std::uint64_t seed = 7;
  std::size_t jobs = 1;
};

/// Rows one case contributes to cases.csv plus the numbers reducers need.
struct CaseOut {
  std::vector<std::vector<std::string>> rows;
  /// Headline per-case value (ratio, degree, ...).
  double value = 0.0;
  std::size_t size = 0;
  bool flag = true;
  std::vector<double> extra;
};

struct Experiment {
  std::string name;
  json config;
  std::vector<std::string> header;
  std::vector<std::string> plot_header;
  std::size_t cases = 0;
  /// Every row belongs to case 0 (kernel-decay, bmo); otherwise column 0 is the case id.
  bool single_case = false;
  std::function<CaseOut(std::size_t id, std::uint64_t seed)> run_case;
  std::function<json(const std::vector<CaseOut>&, io::Csv& plot)> summarize;
};

inline std::string fmt(double v) { return io::format_double(v); }
inline std::string fmt(std::size_t v) { return std::to_string(v); }
inline std::string fmt(std::uint64_t v, bool) { return std::to_string(v); }
inline std::string fmt_bool(bool b) { return b ? "true" : "false"; }

/// Largest value and the earliest case attaining it.
inline json argmax_record(const std::vector<CaseOut>& outs, std::uint64_t master) {
  double best = 0.0;
  std::size_t arg = 0;
  bool first = true;
  for (std::size_t i = 0; i < outs.size(); ++i)
    if (first || outs[i].value > best) {
      best = outs[i].value;
      arg = i;
      first = false;
    }
  if (outs.empty()) return {{"max", nullptr}, {"argmax_case", nullptr}, {"argmax_seed", nullptr}};
  return {{"max", best}, {"argmax_case", arg}, {"argmax_seed", case_seed(master, arg)}};
}

/// (size, max value over cases of that size) pairs in increasing size.
inline void size_plot(const std::vector<CaseOut>& outs, io::Csv& plot, std::uint64_t master) {
  std::map<std::size_t, double> best;
  for (const auto& o : outs) {
    auto [it, fresh] = best.emplace(o.size, o.value);
    if (!fresh) it->second = std::max(it->second, o.value);
  }
  for (const auto& [s, v] : best) plot.add({fmt(s), fmt(v), fmt(master, true)});
}

// ---------------------------------------------------------------------------

inline Experiment decompose_experiment(const json& raw, std::uint64_t master) {
  const config::DecomposeConfig c = config::decompose_from_json(raw);
  Experiment e;
  e.name = "decompose";
  e.config = config::to_json(c);
  e.header = {"case_id", "seed", "member", "source_lower", "source_upper", "n", "side", "k", "piece_lower", "piece_upper"};
  e.plot_header = {"n", "members", "seed"};
  e.cases = c.families.size() + c.random_cases;
  e.run_case = [c](std::size_t id, std::uint64_t seed) {
    DisjointFamily fam;
    if (id < c.families.size()) {
      fam = c.families[id];
    } else {
      auto rng = random::CounterEngine::stream(seed, 1);
      fam = corpus::random_rational_family(rng, c.random);
    }
    const DyadicDecomposition dec = dyadic_decompose(fam);
    CaseOut out;
    out.size = fam.size();
    for (std::size_t j = 0; j < dec.intervals.size(); ++j) {
      const auto& d = dec.intervals[j];
      out.value += static_cast<double>(invariant_violations(d).size());
      for (Side side : {Side::a, Side::b})
        for (unsigned k = 1; k <= d.n; ++k) {
          const Interval& p = d.piece(side, k);
          out.rows.push_back({fmt(id), fmt(seed, true), fmt(j), to_string(d.source.lower()),
                              to_string(d.source.upper()), fmt(std::size_t{d.n}), to_string(side), fmt(std::size_t{k}),
                              p.is_empty() ? "" : to_string(p.lower()), p.is_empty() ? "" : to_string(p.upper())});
        }
      out.extra.push_back(d.n);
    }
    return out;
  };
  e.summarize = [master](const std::vector<CaseOut>& outs, io::Csv& plot) {
    std::size_t violations = 0, pieces = 0;
    json failing = json::array();
    std::map<std::size_t, std::size_t> depth;
    for (std::size_t i = 0; i < outs.size(); ++i) {
      violations += static_cast<std::size_t>(outs[i].value);
      pieces += outs[i].rows.size();
      if (outs[i].value > 0) failing.push_back(i);
      for (double n : outs[i].extra) ++depth[static_cast<std::size_t>(n)];
    }
    for (const auto& [n, count] : depth) plot.add({fmt(n), fmt(count), fmt(master, true)});
    return json{{"pieces", pieces}, {"violations", violations}, {"failing_cases", failing}};
  };
  return e;
}

inline Experiment degree_experiment(const json& raw, std::uint64_t master) {
  const config::DegreeConfig c = config::degree_from_json(raw);
  Experiment e;
  e.name = "degree";
  e.config = config::to_json(c);
  e.header = {"case_id", "seed",   "members", "violations",    "degree_a",
              "degree_b", "mod3_a", "mod3_b",  "mod3_within_a", "mod3_within_b"};
  e.plot_header = {"members", "max_degree", "seed"};
  e.cases = c.cases;
  e.run_case = [c](std::size_t id, std::uint64_t seed) {
    auto rng = random::CounterEngine::stream(seed, 1);
    const DisjointFamily fam = corpus::random_rational_family(rng, c.family);
    const DyadicDecomposition dec = dyadic_decompose(fam);
    std::size_t violations = 0;
    for (const auto& d : dec.intervals) violations += invariant_violations(d).size();
    std::size_t deg[2];
    bool mod3[2], within[2];
    for (Side side : {Side::a, Side::b}) {
      const int s = side == Side::a ? 0 : 1;
      deg[s] = well_distributed_degree(dec.side_family(side));
      mod3[s] = within[s] = true;
      for (const auto& cls : split_mod3(dec, side)) {
        mod3[s] = mod3[s] && cls.disjoint;
        within[s] = within[s] && cls.disjoint_within_source;
      }
    }
    CaseOut out;
    out.size = fam.size();
    out.value = static_cast<double>(std::max(deg[0], deg[1]));
    out.flag = mod3[0] && mod3[1];
    out.extra = {static_cast<double>(violations), within[0] && within[1] ? 1.0 : 0.0};
    out.rows.push_back({fmt(id), fmt(seed, true), fmt(fam.size()), fmt(violations), fmt(deg[0]), fmt(deg[1]),
                        fmt_bool(mod3[0]), fmt_bool(mod3[1]), fmt_bool(within[0]), fmt_bool(within[1])});
    return out;
  };
  e.summarize = [master](const std::vector<CaseOut>& outs, io::Csv& plot) {
    std::size_t violations = 0, mod3 = 0, within = 0;
    double max_degree = 0.0;
    json failures = json::array();
    for (std::size_t i = 0; i < outs.size(); ++i) {
      violations += static_cast<std::size_t>(outs[i].extra[0]);
      within += outs[i].extra[1] > 0 ? 1 : 0;
      max_degree = std::max(max_degree, outs[i].value);
      if (outs[i].flag) ++mod3;
      else failures.push_back({{"case", i}, {"seed", case_seed(master, i)}});
    }
    size_plot(outs, plot, master);
    const double n = outs.empty() ? 1.0 : static_cast<double>(outs.size());
    return json{{"violations", violations},
                {"max_degree", static_cast<std::size_t>(max_degree)},
                {"mod3_fraction", static_cast<double>(mod3) / n},
                {"mod3_within_source_fraction", static_cast<double>(within) / n},
                {"mod3_failures", failures}};
  };
  return e;
}

inline std::vector<std::string> ratio_row(std::size_t id, std::uint64_t seed, const ExperimentConfig& cfg) {
  return {fmt(id), fmt(seed, true), fmt(cfg.p), fmt(cfg.spec.d), fmt(cfg.spec.r)};
}

inline Experiment lpr_square_experiment(const json& raw, std::uint64_t master) {
  config::LprConfig c = config::lpr_from_json(raw, false, "lpr-square");
  c.exp.seed = master;
  Experiment e;
  e.name = "lpr-square";
  e.config = config::to_json(c, false);
  e.header = {"case_id", "seed", "p", "d", "r", "ratio", "family_size"};
  e.plot_header = {"family_size", "max_ratio", "seed"};
  e.cases = c.exp.cases;
  e.run_case = [c](std::size_t id, std::uint64_t seed) {
    const auto [ratio, size] = square_case_ratio(c.exp, seed);
    CaseOut out;
    out.value = ratio;
    out.size = size;
    auto row = ratio_row(id, seed, c.exp);
    row.push_back(fmt(ratio));
    row.push_back(fmt(size));
    out.rows.push_back(std::move(row));
    return out;
  };
  e.summarize = [master](const std::vector<CaseOut>& outs, io::Csv& plot) {
    size_plot(outs, plot, master);
    return argmax_record(outs, master);
  };
  return e;
}

inline Experiment lpr_rad_experiment(const json& raw, std::uint64_t master) {
  config::LprConfig c = config::lpr_from_json(raw, true, "lpr-rad", FamilyKind::long_intervals);
  c.exp.seed = master;
  std::vector<RadMode> modes;
  if (c.modes != config::RadModes::dyadic) modes.push_back(RadMode::direct);
  if (c.modes != config::RadModes::direct) modes.push_back(RadMode::dyadic);
  Experiment e;
  e.name = "lpr-rad";
  e.config = config::to_json(c, true);
  e.header = {"case_id", "seed", "p", "d", "r", "mode", "ratio", "std_error", "family_size"};
  e.plot_header = {"family_size", "max_ratio", "seed"};
  e.cases = c.exp.cases;
  e.run_case = [c, modes](std::size_t id, std::uint64_t seed) {
    CaseOut out;
    const CaseInput in = make_case(c.exp, seed);
    out.size = in.family.size();
    for (RadMode m : modes) {
      const RadRatio r = lpr_rad_ratio(in.signal, in.family, c.exp.p, case_signs(c.exp, seed), m);
      out.extra.push_back(r.ratio);
      auto row = ratio_row(id, seed, c.exp);
      row.insert(row.end(), {to_string(m), fmt(r.ratio), fmt(r.std_error), fmt(out.size)});
      out.rows.push_back(std::move(row));
    }
    out.value = *std::max_element(out.extra.begin(), out.extra.end());
    return out;
  };
  e.summarize = [master, modes](const std::vector<CaseOut>& outs, io::Csv& plot) {
    size_plot(outs, plot, master);
    json s = json::object();
    for (std::size_t m = 0; m < modes.size(); ++m) {
      std::vector<CaseOut> per(outs.size());
      for (std::size_t i = 0; i < outs.size(); ++i) per[i].value = outs[i].extra[m];
      s[to_string(modes[m])] = argmax_record(per, master);
    }
    if (modes.size() == 2) {
      // Two-sided comparability constant max(direct / dyadic, dyadic / direct).
      double k = 0.0;
      for (const auto& o : outs)
        if (o.extra[0] > 0.0 && o.extra[1] > 0.0) k = std::max({k, o.extra[0] / o.extra[1], o.extra[1] / o.extra[0]});
      s["comparability"] = k;
    }
    return s;
  };
  return e;
}

inline Experiment domination_experiment(const json& raw, std::uint64_t master) {
  config::LprConfig c = config::lpr_from_json(raw, false, "domination", FamilyKind::pieces);
  c.exp.seed = master;
  Experiment e;
  e.name = "domination";
  e.config = config::to_json(c, false);
  e.header = {"case_id", "seed", "p", "d", "r", "ratio", "family_size", "degree"};
  e.plot_header = {"family_size", "max_ratio", "seed"};
  e.cases = c.exp.cases;
  e.run_case = [c](std::size_t id, std::uint64_t seed) {
    const DominationReport rep = domination_case(c.exp, seed);
    const CaseInput in = make_case(c.exp, seed);
    CaseOut out;
    out.value = rep.dom_ratio;
    out.size = in.family.size();
    out.extra = {static_cast<double>(rep.degree)};
    auto row = ratio_row(id, seed, c.exp);
    row.insert(row.end(), {fmt(rep.dom_ratio), fmt(out.size), fmt(rep.degree)});
    out.rows.push_back(std::move(row));
    return out;
  };
  e.summarize = [master](const std::vector<CaseOut>& outs, io::Csv& plot) {
    size_plot(outs, plot, master);
    json s = argmax_record(outs, master);
    double deg = 0.0;
    for (const auto& o : outs) deg = std::max(deg, o.extra[0]);
    s["max_degree"] = static_cast<std::size_t>(deg);
    return s;
  };
  return e;
}

inline Experiment kernel_decay_experiment(const json& raw, std::uint64_t master) {
  const config::DecayConfig c = config::decay_from_json(raw);
  Experiment e;
  e.name = "kernel-decay";
  e.config = config::to_json(c);
  e.header = {"m", "A_m", "r_m", "slope", "seed"};
  e.plot_header = {"m", "log2_A_m", "seed"};
  e.cases = 1;
  e.single_case = true;
  auto details = std::make_shared<json>();
  e.run_case = [c, master, details](std::size_t, std::uint64_t) {
    const KernelSpec spec(c.family);
    CaseOut out;
    json log = json::array();
    for (const auto& v : spec.gap_violations())
      log.push_back({{"j1", v.j1}, {"j2", v.j2}, {"k", v.k}, {"gap", to_string(v.gap)}});
    *details = {{"gap_violations", log}, {"excluded", !log.empty()}, {"x_max", AdaptedBump::kCutoff}};
    if (!log.empty()) return out;
    const DecayReport rep = decay_fit(spec, c.spec, c.x, c.z, c.m_first, c.m_last, c.samples, master);
    const std::string slope = rep.slope ? fmt(*rep.slope) : "";
    json overlay = json::array();
    for (const auto& r : rep.rows) {
      out.rows.push_back({fmt(std::size_t{r.m}), fmt(r.a_m), fmt(r.r_m), slope, fmt(master, true)});
      out.extra.push_back(r.a_m);
      overlay.push_back({{"m", r.m}, {"k0", r.k0}, {"k1", r.k1}, {"overlay_constant", r.overlay_constant}});
    }
    out.value = rep.max_r;
    (*details)["slope"] = rep.slope ? json(*rep.slope) : json(nullptr);
    (*details)["max_r"] = rep.max_r;
    (*details)["max_sum_mu2"] = rep.max_sum_mu2;
    (*details)["overlay"] = overlay;
    return out;
  };
  e.summarize = [c, master, details](const std::vector<CaseOut>& outs, io::Csv& plot) {
    if (!outs.empty())
      for (std::size_t i = 0; i < outs[0].extra.size(); ++i)
        if (outs[0].extra[i] > 0.0)
          plot.add({fmt(std::size_t{c.m_first + i}), fmt(std::log2(outs[0].extra[i])), fmt(master, true)});
    return *details;
  };
  return e;
}

/// Random instance of case `seed`: frequencies with gaps >= 1, Gaussian
/// coefficients, and an interval with dyadic-rational endpoints.
struct DirichletInstance {
  std::vector<double> gamma;
  std::vector<Complex> alpha;
  Interval interval{Rational(0), Rational(1)};
};

inline DirichletInstance dirichlet_instance(const config::DirichletConfig& c, std::uint64_t seed) {
  auto rng = random::CounterEngine::stream(seed, 1);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  DirichletInstance in;
  const auto terms = static_cast<std::size_t>(corpus::uniform_int(rng, 1, static_cast<std::int64_t>(c.max_terms)));
  if (c.integer) {
    std::vector<std::int64_t> freq;
    while (freq.size() < terms) {
      const std::int64_t k = corpus::uniform_int(rng, -32, 32);
      if (std::find(freq.begin(), freq.end(), k) == freq.end()) freq.push_back(k);
    }
    std::sort(freq.begin(), freq.end());
    for (auto k : freq) in.gamma.push_back(static_cast<double>(k));
  } else {
    double at = -8.0 + 16.0 * u(rng);
    for (std::size_t j = 0; j < terms; ++j) {
      in.gamma.push_back(at);
      at += 1.0 + c.max_extra_gap * u(rng);
    }
    const double len = std::exp2(std::log2(c.min_length) + (std::log2(c.max_length) - std::log2(c.min_length)) * u(rng));
    const Rational lower(corpus::uniform_int(rng, -64, 64), 16);
    const Rational length = Rational(std::max<std::int64_t>(1, static_cast<std::int64_t>(std::llround(len * 16))), 16);
    in.interval = Interval(lower, lower + length);
  }
  for (std::size_t j = 0; j < terms; ++j) in.alpha.emplace_back(g(rng), g(rng));
  return in;
}

inline Experiment dirichlet_experiment(const json& raw, std::uint64_t master) {
  const config::DirichletConfig c = config::dirichlet_from_json(raw);
  Experiment e;
  e.name = "dirichlet-gap";
  e.config = config::to_json(c);
  e.header = {"case_id", "seed", "terms", "length", "ratio"};
  e.plot_header = {"terms", "max_ratio", "seed"};
  e.cases = c.cases;
  e.run_case = [c](std::size_t id, std::uint64_t seed) {
    const DirichletInstance in = dirichlet_instance(c, seed);
    CaseOut out;
    out.value = dirichlet_gap_ratio(in.gamma, in.alpha, in.interval);
    out.size = in.gamma.size();
    out.rows.push_back({fmt(id), fmt(seed, true), fmt(out.size), to_string(in.interval.length()), fmt(out.value)});
    return out;
  };
  e.summarize = [master](const std::vector<CaseOut>& outs, io::Csv& plot) {
    size_plot(outs, plot, master);
    json s = argmax_record(outs, master);
    double dev = 0.0;
    for (const auto& o : outs) dev = std::max(dev, std::abs(o.value - 1.0));
    s["max_abs_deviation_from_1"] = dev;
    return s;
  };
  return e;
}

inline Experiment maximal_experiment(const json& raw, std::uint64_t master) {
  const config::MaximalConfig c = config::maximal_from_json(raw);
  Experiment e;
  e.name = "maximal";
  e.config = config::to_json(c);
  e.header = {"case_id", "seed", "p", "q", "d", "r", "fs_ratio", "mq_bound", "identity_error"};
  e.plot_header = {"p", "max_fs_ratio", "max_mq_bound", "seed"};
  e.cases = c.cases;
  e.run_case = [c](std::size_t id, std::uint64_t seed) {
    auto rng = random::CounterEngine::stream(seed, 2);
    corpus::SignalParams prm;
    prm.band = c.band;
    prm.mean_zero = true;
    const LatticeSignal f = corpus::random_trig_signal(rng, c.spec, c.period, c.n, prm);
    CaseOut out;
    for (const MaximalNormReport& rep : maximal_norm_reports(f, c.ps, c.q)) {
      const double p = rep.p;
      double err = 0.0;
      if (rep.identity_lhs && *rep.identity_lhs > 0.0)
        err = std::abs(*rep.identity_lhs - *rep.identity_rhs) / *rep.identity_lhs;
      out.extra.insert(out.extra.end(), {rep.fs_ratio.value_or(0.0), rep.mq_bound.value_or(0.0), err});
      out.rows.push_back({fmt(id), fmt(seed, true), fmt(p), fmt(c.q), fmt(c.spec.d), fmt(c.spec.r),
                          rep.fs_ratio ? fmt(*rep.fs_ratio) : "", rep.mq_bound ? fmt(*rep.mq_bound) : "",
                          rep.identity_lhs ? fmt(err) : ""});
    }
    return out;
  };
  e.summarize = [c, master](const std::vector<CaseOut>& outs, io::Csv& plot) {
    json per = json::array();
    for (std::size_t k = 0; k < c.ps.size(); ++k) {
      double fs = 0.0, mq = 0.0, err = 0.0;
      for (const auto& o : outs) {
        fs = std::max(fs, o.extra[3 * k]);
        mq = std::max(mq, o.extra[3 * k + 1]);
        err = std::max(err, o.extra[3 * k + 2]);
      }
      per.push_back({{"p", c.ps[k]}, {"max_fs_ratio", fs}, {"max_mq_bound", mq}, {"max_identity_error", err}});
      plot.add({fmt(c.ps[k]), fmt(fs), fmt(mq), fmt(master, true)});
    }
    return json{{"per_p", per}};
  };
  return e;
}

inline WindowedSignal bmo_signal(const config::BmoConfig& c, std::uint64_t seed) {
  LatticeSignal f = LatticeSignal::zeros(c.spec, c.window_length, c.n);
  if (c.signal == "ones") {
    const double v = std::isinf(c.spec.r) ? 1.0 : std::pow(static_cast<double>(c.spec.d), -1.0 / c.spec.r);
    for (auto& x : f.values()) x = v;
  } else {
    auto rng = random::CounterEngine::stream(seed, 2);
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<Complex> row(c.spec.d);
    for (std::size_t t = 0; t < c.n; ++t) {
      for (auto& x : row) x = Complex(g(rng), g(rng));
      const double norm = lattice_norm(row, c.spec);
      for (std::size_t w = 0; w < c.spec.d; ++w) f.at(t, w) = norm > 0 ? row[w] / norm : Complex{};
    }
  }
  return {std::move(f), to_double(c.window_lower)};
}

inline Experiment bmo_experiment(const json& raw, std::uint64_t master) {
  const config::BmoConfig c = config::bmo_from_json(raw);
  Experiment e;
  e.name = "bmo";
  e.config = config::to_json(c);
  e.header = {"interval_lower", "interval_upper", "A", "B", "A_plus_B", "exhaustive", "seed"};
  e.plot_header = {"part", "value", "seed"};
  e.cases = 1;
  e.single_case = true;
  e.run_case = [c, master](std::size_t, std::uint64_t) {
    const KernelSpec spec(c.family);
    const BmoReport rep = bmo_oscillation_report(spec, bmo_signal(c, master), c.interval, master);
    CaseOut out;
    out.value = rep.a + rep.b;
    out.extra = {rep.a, rep.b};
    out.rows.push_back({to_string(c.interval.lower()), to_string(c.interval.upper()), fmt(rep.a), fmt(rep.b),
                        fmt(rep.a + rep.b), fmt_bool(rep.exhaustive), fmt(master, true)});
    return out;
  };
  e.summarize = [master](const std::vector<CaseOut>& outs, io::Csv& plot) {
    if (outs.empty()) return json::object();
    plot.add({"A", fmt(outs[0].extra[0]), fmt(master, true)});
    plot.add({"B", fmt(outs[0].extra[1]), fmt(master, true)});
    return json{{"A", outs[0].extra[0]}, {"B", outs[0].extra[1]}, {"A_plus_B", outs[0].value}};
  };
  return e;
}

inline Experiment make_experiment(ExperimentId id, const json& raw, std::uint64_t master) {
  switch (id) {
    case ExperimentId::decompose: return decompose_experiment(raw, master);
    case ExperimentId::degree: return degree_experiment(raw, master);
    case ExperimentId::lpr_square: return lpr_square_experiment(raw, master);
    case ExperimentId::lpr_rad: return lpr_rad_experiment(raw, master);
    case ExperimentId::domination: return domination_experiment(raw, master);
    case ExperimentId::kernel_decay: return kernel_decay_experiment(raw, master);
    case ExperimentId::dirichlet_gap: return dirichlet_experiment(raw, master);
    case ExperimentId::maximal: return maximal_experiment(raw, master);
    case ExperimentId::bmo: return bmo_experiment(raw, master);
  }
  throw ConfigError("unknown experiment");
}

/// Evaluated experiment: outputs held in memory so they can be compared or written.
struct RunResult {
  std::string summary_json;
  std::string cases_csv;
  std::string plot_csv;
  json summary;
};

inline RunResult evaluate(ExperimentId id, const json& raw, std::uint64_t master, std::size_t jobs) {
  Experiment e = make_experiment(id, raw, master);
  const auto outs = parallel_map(e.cases, jobs, [&](std::size_t i) { return e.run_case(i, case_seed(master, i)); });
  io::Csv cases(e.header), plot(e.plot_header);
  for (const auto& o : outs)
    for (const auto& r : o.rows) cases.add(r);
  RunResult res;
  res.summary = {{"schema_version", io::kSchemaVersion},
                 {"experiment", e.name},
                 {"seed", master},
                 {"config", e.config},
                 {"cases", e.cases},
                 {"summary", e.summarize(outs, plot)}};
  res.summary_json = res.summary.dump(2) + "\n";
  res.cases_csv = cases.str();
  res.plot_csv = plot.str();
  return res;
}

/// Width from LPR_JOBS when set to a positive integer, else `fallback`.
inline std::size_t jobs_from_env(std::size_t fallback) {
  if (const char* v = std::getenv("LPR_JOBS")) {
    char* end = nullptr;
    const unsigned long long n = std::strtoull(v, &end, 10);
    if (end && *end == '\0' && n > 0) return static_cast<std::size_t>(n);
  }
  return fallback;
}

inline json load_config(const std::filesystem::path& path) {
  if (path.empty()) return json::object();
  return io::read_json(path);
}

template <class Body>
int guarded(std::ostream& log, Body&& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    log << "validation error: " << e.what() << "\n";
    return kValidation;
  } catch (const PreconditionError& e) {
    log << "validation error: " << e.what() << "\n";
    return kValidation;
  } catch (const DomainError& e) {
    log << "validation error: " << e.what() << "\n";
    return kValidation;
  } catch (const NumericalError& e) {
    log << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  } catch (const IoError& e) {
    log << "i/o failure: " << e.what() << "\n";
    return kIoFailure;
  } catch (const std::filesystem::filesystem_error& e) {
    log << "i/o failure: " << e.what() << "\n";
    return kIoFailure;
  }
}

/// Writes summary.json, cases.csv and plot.csv into manifest.out.
inline int run_experiment(const RunManifest& m, std::ostream& log) {
  return guarded(log, [&] {
    const json raw = load_config(m.config_path);
    const RunResult res = evaluate(m.experiment, raw, m.seed, m.jobs);
    std::filesystem::create_directories(m.out);
    io::write_file(m.out / "summary.json", res.summary_json);
    io::write_file(m.out / "cases.csv", res.cases_csv);
    io::write_file(m.out / "plot.csv", res.plot_csv);
    return static_cast<int>(kOk);
  });
}

/// Largest absolute difference between numeric fields; non-numeric fields must match exactly.
inline double row_distance(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == b[i]) continue;
    try {
      worst = std::max(worst, std::abs(io::parse_double(a[i]) - io::parse_double(b[i])));
    } catch (const ConfigError&) {
      return std::numeric_limits<double>::infinity();
    }
  }
  return worst;
}

constexpr double kReplayTolerance = 1e-12;

/// Re-runs case `id` of the run recorded in `dir` from its seed, compares
/// against cases.csv and writes replay_<id>.json.
inline int replay_case(std::size_t id, const std::filesystem::path& dir, std::ostream& log) {
  return guarded(log, [&]() -> int {
    const json summary = io::read_json(dir / "summary.json");
    if (!summary.contains("experiment") || !summary.contains("seed") || !summary.contains("config"))
      throw ConfigError("summary.json lacks experiment, seed or config");
    const ExperimentId eid = config::parse_experiment(summary["experiment"].get<std::string>());
    const auto master = summary["seed"].get<std::uint64_t>();
    Experiment e = make_experiment(eid, summary["config"], master);
    if (id >= e.cases) throw ConfigError("case " + std::to_string(id) + " out of range");
    const std::uint64_t seed = case_seed(master, id);
    const CaseOut out = e.run_case(id, seed);

    const io::Csv recorded = io::Csv::parse(io::read_file(dir / "cases.csv"));
    std::vector<std::vector<std::string>> rows;
    for (const auto& r : recorded.rows())
      if (e.single_case || (!r.empty() && r[0] == std::to_string(id))) rows.push_back(r);
    double worst = rows.size() == out.rows.size() ? 0.0 : std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < std::min(rows.size(), out.rows.size()); ++i)
      worst = std::max(worst, row_distance(rows[i], out.rows[i]));
    const bool match = worst <= kReplayTolerance;
    json rep{{"schema_version", io::kSchemaVersion}, {"experiment", e.name}, {"seed", master},
             {"case_id", id},          {"case_seed", seed}, {"rows", out.rows.size()},
             {"max_abs_difference", std::isinf(worst) ? json("inf") : json(worst)}, {"match", match}};
    const auto& header = recorded.header();
    if (auto it = std::find(header.begin(), header.end(), "ratio"); it != header.end() && !rows.empty()) {
      const std::size_t col = static_cast<std::size_t>(it - header.begin());
      rep["ratio_recorded"] = rows[0][col];
      rep["ratio_replayed"] = out.rows.empty() ? "" : out.rows[0][col];
    }
    io::write_file(dir / ("replay_" + std::to_string(id) + ".json"), rep.dump(2) + "\n");
    log << (match ? "replay matches" : "replay differs") << " (max abs difference " << io::format_double(worst)
        << ")\n";
    return match ? kOk : kNumerical;
  });
}

}  // namespace lpr::runner
