#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "lpr/interval.hpp"

namespace lpr {

enum class Side { a, b };

inline const char* to_string(Side side) { return side == Side::a ? "a" : "b"; }

/// Dyadic split of one source interval (a_j, b_j].
///
/// `a_pieces[k-1]` is I^a_{j,k} = (a_j - 2 + 2^k, a_j - 2 + 2^{k+1}] for
/// k < n, with the last right endpoint replaced by the midpoint at k = n.
/// `b_pieces` mirror this from the right endpoint. A terminal piece may be
/// Empty.
struct DecomposedInterval {
  Interval source;
  unsigned n = 0;
  std::vector<Interval> a_pieces;
  std::vector<Interval> b_pieces;
  Interval tilde_a = Interval::empty();
  Interval tilde_b = Interval::empty();

  const std::vector<Interval>& pieces(Side side) const {
    return side == Side::a ? a_pieces : b_pieces;
  }
  const Interval& tilde(Side side) const { return side == Side::a ? tilde_a : tilde_b; }
  const Interval& piece(Side side, unsigned k) const { return pieces(side).at(k - 1); }
};

struct DyadicDecomposition {
  std::vector<DecomposedInterval> intervals;

  /// Every non-empty piece of the given side across all source intervals.
  std::vector<Interval> side_pieces(Side side) const {
    std::vector<Interval> out;
    for (const auto& d : intervals)
      for (const auto& p : d.pieces(side))
        if (!p.is_empty()) out.push_back(p);
    return out;
  }

  DisjointFamily side_family(Side side) const { return DisjointFamily(side_pieces(side)); }
};

/// n = max{n : 2^{n+1} <= length + 4}.
inline unsigned dyadic_depth(const Rational& length) {
  unsigned n = 1;
  while (pow2(n + 2) <= length + 4) ++n;
  return n;
}

inline DecomposedInterval decompose_interval(const Interval& source) {
  if (source.is_empty() || source.length() < 4)
    throw PreconditionError("dyadic_decompose: interval " + source.str() +
                            " is shorter than 4; normalize the family first");
  DecomposedInterval d{source};
  const Rational& a = source.lower();
  const Rational& b = source.upper();
  const Rational mid = source.centre();
  d.n = dyadic_depth(source.length());

  std::vector<Rational> a_ends, b_ends;  // a_{j,k}, b_{j,k} for k = 1..n+1
  for (unsigned k = 1; k <= d.n; ++k) {
    a_ends.push_back(a - 2 + pow2(k));
    b_ends.push_back(b + 2 - pow2(k));
  }
  a_ends.push_back(mid);
  b_ends.push_back(mid);

  for (unsigned k = 0; k < d.n; ++k) {
    d.a_pieces.push_back(Interval::between(a_ends[k], a_ends[k + 1]));
    d.b_pieces.push_back(Interval::between(b_ends[k + 1], b_ends[k]));
  }
  d.tilde_a = Interval(a - 2 + pow2(d.n), a - 2 + pow2(d.n + 1));
  d.tilde_b = Interval(b + 2 - pow2(d.n + 1), b + 2 - pow2(d.n));
  return d;
}

/// Splits every member of a normalized family (all lengths >= 4) into its
/// relative dyadic pieces.
inline DyadicDecomposition dyadic_decompose(const DisjointFamily& family) {
  DyadicDecomposition out;
  out.intervals.reserve(family.size());
  for (const auto& i : family) out.intervals.push_back(decompose_interval(i));
  return out;
}

/// Lists every violated structural invariant of `d`; empty when valid.
inline std::vector<std::string> invariant_violations(const DecomposedInterval& d) {
  std::vector<std::string> bad;
  const Interval& src = d.source;
  if (d.n != dyadic_depth(src.length())) bad.push_back("depth");
  if (d.a_pieces.size() != d.n || d.b_pieces.size() != d.n) {
    bad.push_back("piece count");
    return bad;
  }
  for (Side side : {Side::a, Side::b}) {
    const auto& ps = d.pieces(side);
    Rational total = 0;
    for (unsigned k = 1; k <= d.n; ++k) {
      const Interval& p = ps[k - 1];
      total += p.length();
      if (k < d.n && (p.is_empty() || p.length() != pow2(k)))
        bad.push_back(std::string("length ") + to_string(side) + std::to_string(k));
      if (k == d.n && p.length() >= pow2(d.n))
        bad.push_back(std::string("terminal length ") + to_string(side));
      if (!src.contains(p)) bad.push_back(std::string("containment ") + to_string(side));
    }
    if (total * 2 != src.length()) bad.push_back(std::string("half cover ") + to_string(side));
    if (!d.tilde(side).contains(ps[d.n - 1])) bad.push_back(std::string("tilde ") + to_string(side));
  }
  std::vector<Interval> all(d.a_pieces);
  all.insert(all.end(), d.b_pieces.begin(), d.b_pieces.end());
  if (!pairwise_disjoint(all)) bad.push_back("overlap");
  return bad;
}

/// One residue class {2 I_{j,k} : k = ell (mod 3)} of doubled pieces.
struct Mod3Class {
  struct Origin {
    std::size_t j;
    unsigned k;
  };
  std::vector<Interval> doubled;
  std::vector<Origin> origin;
  bool disjoint_within_source = true;
  bool disjoint = true;
};

/// Groups the doubled pieces of one side by k mod 3. Entry ell of the
/// result holds the pieces with k = ell (mod 3). Disjointness is measured,
/// not assumed.
inline std::array<Mod3Class, 3> split_mod3(const DyadicDecomposition& dec, Side side) {
  std::array<Mod3Class, 3> classes;
  for (std::size_t j = 0; j < dec.intervals.size(); ++j) {
    const auto& d = dec.intervals[j];
    std::array<std::vector<Interval>, 3> local;
    for (unsigned k = 1; k <= d.n; ++k) {
      const Interval& p = d.piece(side, k);
      if (p.is_empty()) continue;
      Interval dbl = p.doubled();
      classes[k % 3].doubled.push_back(dbl);
      classes[k % 3].origin.push_back({j, k});
      local[k % 3].push_back(dbl);
    }
    for (unsigned ell = 0; ell < 3; ++ell)
      if (!pairwise_disjoint(local[ell])) classes[ell].disjoint_within_source = false;
  }
  for (auto& c : classes) c.disjoint = pairwise_disjoint(c.doubled);
  return classes;
}

}  // namespace lpr
