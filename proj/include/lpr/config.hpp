#pragma once

#include <string>
#include <vector>

#include "lpr/corpus.hpp"
#include "lpr/io.hpp"
#include "lpr/lpr_experiments.hpp"

namespace lpr::config {

using io::json;

/// Fixed experiment enumeration.
enum class ExperimentId { decompose, degree, lpr_square, lpr_rad, domination, kernel_decay, dirichlet_gap, maximal, bmo };

inline const std::vector<std::pair<ExperimentId, std::string>>& experiment_names() {
  static const std::vector<std::pair<ExperimentId, std::string>> names{
      {ExperimentId::decompose, "decompose"},         {ExperimentId::degree, "degree"},
      {ExperimentId::lpr_square, "lpr-square"},       {ExperimentId::lpr_rad, "lpr-rad"},
      {ExperimentId::domination, "domination"},       {ExperimentId::kernel_decay, "kernel-decay"},
      {ExperimentId::dirichlet_gap, "dirichlet-gap"}, {ExperimentId::maximal, "maximal"},
      {ExperimentId::bmo, "bmo"}};
  return names;
}

inline std::string to_string(ExperimentId id) {
  for (const auto& [e, name] : experiment_names())
    if (e == id) return name;
  return "unknown";
}

inline ExperimentId parse_experiment(const std::string& name) {
  for (const auto& [e, n] : experiment_names())
    if (n == name) return e;
  throw ConfigError("unknown experiment id '" + name + "'");
}

inline const char* family_kind_name(FamilyKind k) {
  switch (k) {
    case FamilyKind::random: return "random";
    case FamilyKind::covering: return "covering";
    case FamilyKind::pieces: return "pieces";
    case FamilyKind::long_intervals: return "long";
  }
  return "random";
}

inline FamilyKind parse_family_kind(const json& j) {
  const std::string s = j.is_string() ? j.get<std::string>() : "";
  for (auto k : {FamilyKind::random, FamilyKind::covering, FamilyKind::pieces, FamilyKind::long_intervals})
    if (s == family_kind_name(k)) return k;
  throw ConfigError("family must be one of random, covering, pieces, long; got " + j.dump());
}

inline std::size_t parse_count(const json& j, const char* what) {
  if (!j.is_number_integer() || j.get<std::int64_t>() < 0) throw ConfigError(std::string(what) + ": expected a count");
  return j.get<std::size_t>();
}

// ---------------------------------------------------------------------------
// Random rational families (decompose, degree).

inline json to_json(const corpus::RationalFamilyParams& p) {
  return {{"min_count", p.min_count},   {"max_count", p.max_count},
          {"min_length", p.min_length}, {"max_length", p.max_length},
          {"max_denominator", p.max_denominator}, {"max_gap", p.max_gap},
          {"origin_range", p.origin_range}};
}

inline corpus::RationalFamilyParams family_params_from_json(const json& j) {
  corpus::RationalFamilyParams p;
  io::Reader r(j, "family_params");
  r.get("min_count", p.min_count);
  r.get("max_count", p.max_count);
  r.get("min_length", p.min_length);
  r.get("max_length", p.max_length);
  r.get("max_denominator", p.max_denominator);
  r.get("max_gap", p.max_gap);
  r.get("origin_range", p.origin_range);
  r.finish();
  if (p.min_count < 1 || p.min_count > p.max_count) throw ConfigError("family_params: need 1 <= min_count <= max_count");
  if (!(p.min_length >= 4.0) || !(p.max_length >= p.min_length))
    throw ConfigError("family_params: need 4 <= min_length <= max_length");
  if (p.max_denominator < 1 || p.max_gap < 0 || p.origin_range < 0) throw ConfigError("family_params: invalid ranges");
  return p;
}

inline bool same(const corpus::RationalFamilyParams& a, const corpus::RationalFamilyParams& b) {
  return to_json(a) == to_json(b);
}

struct DecomposeConfig {
  std::vector<DisjointFamily> families{DisjointFamily({Interval(Rational(0), Rational(20))})};
  std::size_t random_cases = 0;
  corpus::RationalFamilyParams random;

  friend bool operator==(const DecomposeConfig& a, const DecomposeConfig& b) {
    return a.families == b.families && a.random_cases == b.random_cases && same(a.random, b.random);
  }
};

inline json to_json(const DecomposeConfig& c) {
  json fams = json::array();
  for (const auto& f : c.families) fams.push_back(io::family_json(f));
  return {{"families", fams}, {"random_cases", c.random_cases}, {"family_params", to_json(c.random)}};
}

inline DecomposeConfig decompose_from_json(const json& j) {
  DecomposeConfig c;
  io::Reader r(j, "decompose");
  r.get_with("families", [&](const json& v) {
    if (!v.is_array()) throw ConfigError("decompose.families: expected an array of families");
    c.families.clear();
    for (const auto& f : v) c.families.push_back(io::parse_family(f));
  });
  r.get_with("random_cases", [&](const json& v) { c.random_cases = parse_count(v, "random_cases"); });
  r.get_with("family_params", [&](const json& v) { c.random = family_params_from_json(v); });
  r.finish();
  for (const auto& f : c.families)
    for (const auto& i : f)
      if (i.length() < 4) throw ConfigError("decompose: every interval needs length >= 4, got " + i.str());
  return c;
}

struct DegreeConfig {
  std::size_t cases = 10000;
  corpus::RationalFamilyParams family;

  friend bool operator==(const DegreeConfig& a, const DegreeConfig& b) {
    return a.cases == b.cases && same(a.family, b.family);
  }
};

inline json to_json(const DegreeConfig& c) { return {{"cases", c.cases}, {"family_params", to_json(c.family)}}; }

inline DegreeConfig degree_from_json(const json& j) {
  DegreeConfig c;
  io::Reader r(j, "degree");
  r.get_with("cases", [&](const json& v) { c.cases = parse_count(v, "cases"); });
  r.get_with("family_params", [&](const json& v) { c.family = family_params_from_json(v); });
  r.finish();
  return c;
}

// ---------------------------------------------------------------------------
// Signal corpora (lpr-square, lpr-rad, domination).

enum class RadModes { direct, dyadic, both };

inline const char* rad_modes_name(RadModes m) {
  return m == RadModes::direct ? "direct" : m == RadModes::dyadic ? "dyadic" : "both";
}

struct LprConfig {
  ExperimentConfig exp;
  RadModes modes = RadModes::both;

  friend bool operator==(const LprConfig&, const LprConfig&) = default;
};

/// Echo of everything that shapes the corpus; `jobs` is excluded so that
/// reports do not depend on the parallel width.
inline json to_json(const LprConfig& c, bool with_modes) {
  const ExperimentConfig& e = c.exp;
  json out{{"n", e.n},
           {"period", io::rational_json(e.period)},
           {"p", e.p},
           {"d", e.spec.d},
           {"r", io::exponent_json(e.spec.r)},
           {"family", family_kind_name(e.family)},
           {"min_count", e.min_count},
           {"max_count", e.max_count},
           {"family_grid", e.family_grid},
           {"signal", e.signal == SignalKind::noise ? "noise" : "trig"},
           {"band", e.signal_params.band},
           {"real", e.signal_params.real},
           {"mean_zero", e.signal_params.mean_zero},
           {"trials", e.trials},
           {"cases", e.cases},
           {"refine_rounds", e.refine_rounds}};
  if (with_modes) out["modes"] = rad_modes_name(c.modes);
  return out;
}

/// `family` is the default family kind of the experiment.
inline LprConfig lpr_from_json(const json& j, bool with_modes, const char* where,
                               FamilyKind family = FamilyKind::random) {
  LprConfig c;
  ExperimentConfig& e = c.exp;
  e.family = family;
  io::Reader r(j, where);
  r.get_with("n", [&](const json& v) { e.n = parse_count(v, "n"); });
  r.get_with("period", [&](const json& v) { e.period = io::parse_rational(v); });
  r.get("p", e.p);
  r.get_with("d", [&](const json& v) { e.spec.d = parse_count(v, "d"); });
  r.get_with("r", [&](const json& v) { e.spec.r = io::parse_exponent(v); });
  r.get_with("family", [&](const json& v) { e.family = parse_family_kind(v); });
  r.get_with("min_count", [&](const json& v) { e.min_count = parse_count(v, "min_count"); });
  r.get_with("max_count", [&](const json& v) { e.max_count = parse_count(v, "max_count"); });
  r.get_with("family_grid", [&](const json& v) { e.family_grid = parse_count(v, "family_grid"); });
  r.get_with("signal", [&](const json& v) {
    if (v == "noise") e.signal = SignalKind::noise;
    else if (v == "trig") e.signal = SignalKind::trig;
    else throw ConfigError(std::string(where) + ".signal must be noise or trig");
  });
  r.get_with("band", [&](const json& v) { e.signal_params.band = parse_count(v, "band"); });
  r.get("real", e.signal_params.real);
  r.get("mean_zero", e.signal_params.mean_zero);
  r.get_with("trials", [&](const json& v) { e.trials = parse_count(v, "trials"); });
  r.get_with("cases", [&](const json& v) { e.cases = parse_count(v, "cases"); });
  r.get_with("refine_rounds", [&](const json& v) { e.refine_rounds = parse_count(v, "refine_rounds"); });
  if (with_modes)
    r.get_with("modes", [&](const json& v) {
      if (v == "direct") c.modes = RadModes::direct;
      else if (v == "dyadic") c.modes = RadModes::dyadic;
      else if (v == "both") c.modes = RadModes::both;
      else throw ConfigError(std::string(where) + ".modes must be direct, dyadic or both");
    });
  r.finish();
  try {
    check_grid(e.n, e.period);
    e.spec.validate();
  } catch (const Error& err) {
    throw ConfigError(std::string(where) + ": " + err.what());
  }
  if (!(e.p >= 2.0) || std::isinf(e.p)) throw ConfigError(std::string(where) + ": need finite p >= 2");
  if (e.min_count < 1 || e.min_count > e.max_count) throw ConfigError(std::string(where) + ": need 1 <= min_count <= max_count");
  if (e.family_grid != 0 && e.family_grid > e.n) throw ConfigError(std::string(where) + ": family_grid exceeds n");
  if (with_modes && c.modes != RadModes::direct && e.family != FamilyKind::long_intervals)
    throw ConfigError(std::string(where) + ": dyadic mode needs family \"long\" (every interval of length >= 4)");
  if (e.trials < SignEnsemble::kMinTrials) throw ConfigError(std::string(where) + ": trials must be at least 64");
  return c;
}

// ---------------------------------------------------------------------------
// Kernel experiments.

inline const DisjointFamily& standard_kernel_family() {
  static const DisjointFamily fam({Interval(Rational(0), Rational(20)), Interval(Rational(30), Rational(50))});
  return fam;
}

struct DecayConfig {
  DisjointFamily family = standard_kernel_family();
  double x = 0.0, z = 1.0;
  unsigned m_first = 1, m_last = 8;
  std::size_t samples = 16;
  LatticeSpec spec{1, 2.0};

  friend bool operator==(const DecayConfig&, const DecayConfig&) = default;
};

inline json to_json(const DecayConfig& c) {
  return {{"family", io::family_json(c.family)},
          {"x", c.x},
          {"z", c.z},
          {"m_first", c.m_first},
          {"m_last", c.m_last},
          {"samples", c.samples},
          {"d", c.spec.d},
          {"r", io::exponent_json(c.spec.r)}};
}

inline DecayConfig decay_from_json(const json& j) {
  DecayConfig c;
  io::Reader r(j, "kernel-decay");
  r.get_with("family", [&](const json& v) { c.family = io::parse_family(v); });
  r.get("x", c.x);
  r.get("z", c.z);
  r.get("m_first", c.m_first);
  r.get("m_last", c.m_last);
  r.get_with("samples", [&](const json& v) { c.samples = parse_count(v, "samples"); });
  r.get_with("d", [&](const json& v) { c.spec.d = parse_count(v, "d"); });
  r.get_with("r", [&](const json& v) { c.spec.r = io::parse_exponent(v); });
  r.finish();
  if (c.family.empty() || c.family.min_length() < 4) throw ConfigError("kernel-decay: family members need length >= 4");
  if (c.x == c.z) throw ConfigError("kernel-decay: x and z must differ");
  if (c.m_first < 1 || c.m_last > 12 || c.m_first > c.m_last) throw ConfigError("kernel-decay: m range must lie in [1, 12]");
  if (!(c.spec.r >= 2.0) || c.spec.d < 1) throw ConfigError("kernel-decay: need d >= 1 and r >= 2");
  return c;
}

struct DirichletConfig {
  std::size_t cases = 1000;
  std::size_t max_terms = 12;
  double max_extra_gap = 2.0;
  double min_length = 0.25, max_length = 16.0;
  /// Integer frequencies on [0, 1] instead of random gaps and intervals.
  bool integer = false;

  friend bool operator==(const DirichletConfig&, const DirichletConfig&) = default;
};

inline json to_json(const DirichletConfig& c) {
  return {{"cases", c.cases},           {"max_terms", c.max_terms}, {"max_extra_gap", c.max_extra_gap},
          {"min_length", c.min_length}, {"max_length", c.max_length}, {"integer", c.integer}};
}

inline DirichletConfig dirichlet_from_json(const json& j) {
  DirichletConfig c;
  io::Reader r(j, "dirichlet-gap");
  r.get_with("cases", [&](const json& v) { c.cases = parse_count(v, "cases"); });
  r.get_with("max_terms", [&](const json& v) { c.max_terms = parse_count(v, "max_terms"); });
  r.get("max_extra_gap", c.max_extra_gap);
  r.get("min_length", c.min_length);
  r.get("max_length", c.max_length);
  r.get("integer", c.integer);
  r.finish();
  if (c.max_terms < 1 || !(c.max_extra_gap >= 0) || !(c.min_length > 0) || !(c.max_length >= c.min_length))
    throw ConfigError("dirichlet-gap: invalid ranges");
  return c;
}

struct MaximalConfig {
  std::size_t n = 256;
  Rational period = 1;
  std::vector<double> ps{4.0, 8.0};
  double q = 2.0;
  LatticeSpec spec{2, 3.0};
  std::size_t band = 0;
  std::size_t cases = 40;

  friend bool operator==(const MaximalConfig&, const MaximalConfig&) = default;
};

inline json to_json(const MaximalConfig& c) {
  return {{"n", c.n}, {"period", io::rational_json(c.period)}, {"ps", c.ps}, {"q", c.q}, {"d", c.spec.d},
          {"r", io::exponent_json(c.spec.r)}, {"band", c.band}, {"cases", c.cases}};
}

inline MaximalConfig maximal_from_json(const json& j) {
  MaximalConfig c;
  io::Reader r(j, "maximal");
  r.get_with("n", [&](const json& v) { c.n = parse_count(v, "n"); });
  r.get_with("period", [&](const json& v) { c.period = io::parse_rational(v); });
  r.get("ps", c.ps);
  r.get("q", c.q);
  r.get_with("d", [&](const json& v) { c.spec.d = parse_count(v, "d"); });
  r.get_with("r", [&](const json& v) { c.spec.r = io::parse_exponent(v); });
  r.get_with("band", [&](const json& v) { c.band = parse_count(v, "band"); });
  r.get_with("cases", [&](const json& v) { c.cases = parse_count(v, "cases"); });
  r.finish();
  try {
    check_grid(c.n, c.period);
    c.spec.validate();
  } catch (const Error& err) {
    throw ConfigError(std::string("maximal: ") + err.what());
  }
  if (!(c.q >= 1.0) || std::isinf(c.q)) throw ConfigError("maximal: need finite q >= 1");
  for (double p : c.ps)
    if (!(p >= 1.0) || std::isinf(p)) throw ConfigError("maximal: every p must be finite and >= 1");
  return c;
}

struct BmoConfig {
  DisjointFamily family = standard_kernel_family();
  Interval interval{Rational(0), Rational(4)};
  Rational window_lower = -16;
  Rational window_length = 32;
  std::size_t n = 65536;
  /// "ones": equal coordinates scaled to unit lattice norm; "random": Gaussian
  /// vectors scaled to unit lattice norm at every node.
  std::string signal = "ones";
  LatticeSpec spec{1, 2.0};

  friend bool operator==(const BmoConfig&, const BmoConfig&) = default;
};

inline json to_json(const BmoConfig& c) {
  return {{"family", io::family_json(c.family)},
          {"interval", io::interval_json(c.interval)},
          {"window_lower", io::rational_json(c.window_lower)},
          {"window_length", io::rational_json(c.window_length)},
          {"n", c.n},
          {"signal", c.signal},
          {"d", c.spec.d},
          {"r", io::exponent_json(c.spec.r)}};
}

inline BmoConfig bmo_from_json(const json& j) {
  BmoConfig c;
  io::Reader r(j, "bmo");
  r.get_with("family", [&](const json& v) { c.family = io::parse_family(v); });
  r.get_with("interval", [&](const json& v) { c.interval = io::parse_interval(v); });
  r.get_with("window_lower", [&](const json& v) { c.window_lower = io::parse_rational(v); });
  r.get_with("window_length", [&](const json& v) { c.window_length = io::parse_rational(v); });
  r.get_with("n", [&](const json& v) { c.n = parse_count(v, "n"); });
  r.get("signal", c.signal);
  r.get_with("d", [&](const json& v) { c.spec.d = parse_count(v, "d"); });
  r.get_with("r", [&](const json& v) { c.spec.r = io::parse_exponent(v); });
  r.finish();
  try {
    check_grid(c.n, c.window_length);
    c.spec.validate();
  } catch (const Error& err) {
    throw ConfigError(std::string("bmo: ") + err.what());
  }
  if (c.family.empty() || c.family.min_length() < 4) throw ConfigError("bmo: family members need length >= 4");
  if (c.signal != "ones" && c.signal != "random") throw ConfigError("bmo: signal must be ones or random");
  return c;
}

}  // namespace lpr::config
