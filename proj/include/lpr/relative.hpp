#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <set>
#include <vector>

#include "lpr/interval.hpp"

namespace lpr {

/// Completion of a family of subinterval lists whose relative positions
/// inside the source intervals do not depend on the source.
///
/// Positions s are 1-based and global: the relative pieces (given and
/// complement) are ordered left to right, and source j owns exactly the
/// prefix s = 1..count(j).
struct RelativeDecomposition {
  DisjointFamily family;
  std::vector<Interval> relative_pieces;        // global, left to right
  std::vector<std::optional<unsigned>> given_k;  // original index k, or nullopt for complements
  std::vector<std::size_t> given_count;          // n_j (present given pieces)
  std::vector<std::size_t> complement_count;     // m_j
  std::vector<std::vector<Interval>> pieces;     // per j, absolute, left to right
  std::set<std::size_t> K;
  std::set<std::size_t> L;

  std::size_t count(std::size_t j) const { return given_count[j] + complement_count[j]; }

  std::set<std::size_t> K_j(std::size_t j) const { return restrict(K, j); }
  std::set<std::size_t> L_j(std::size_t j) const { return restrict(L, j); }

 private:
  std::set<std::size_t> restrict(const std::set<std::size_t>& s, std::size_t j) const {
    std::set<std::size_t> out;
    for (std::size_t pos : s)
      if (pos <= count(j)) out.insert(pos);
    return out;
  }
};

/// `given[j][k-1]` is the k-th given subinterval of family[j] (absolute
/// coordinates; Empty means "absent for this j"). Relative positions
/// I_{j,k} - a_j must agree across every j where piece k is present, and a
/// relative piece lying inside (0, |I_j|] must be present for j.
///
/// The complement of the relative pieces in (0, max_j |I_j|] is cut into
/// maximal runs, additionally split at every point |I_j|, so no such point
/// is interior to a complement piece.
inline RelativeDecomposition complete_relative_decomposition(
    const DisjointFamily& family, const std::vector<std::vector<Interval>>& given) {
  if (family.empty()) throw DomainError("complete_relative_decomposition: empty family");
  if (given.size() != family.size())
    throw PreconditionError("complete_relative_decomposition: one given list per interval required");

  const std::size_t J = family.size();
  std::vector<Rational> lengths(J);
  std::size_t max_k = 0;
  for (std::size_t j = 0; j < J; ++j) {
    lengths[j] = family[j].length();
    max_k = std::max(max_k, given[j].size());
    if (!pairwise_disjoint(given[j]))
      throw PreconditionError("complete_relative_decomposition: given pieces overlap in interval " +
                              family[j].str());
    for (const auto& p : given[j])
      if (!family[j].contains(p))
        throw PreconditionError("complete_relative_decomposition: " + p.str() + " not inside " +
                                family[j].str());
  }

  // Relative pieces tilde I_k, taken from any j where piece k is present.
  std::vector<Interval> tilde(max_k, Interval::empty());
  for (std::size_t j = 0; j < J; ++j) {
    for (std::size_t k = 0; k < given[j].size(); ++k) {
      if (given[j][k].is_empty()) continue;
      Interval rel = given[j][k].shifted(-family[j].lower());
      if (tilde[k].is_empty())
        tilde[k] = rel;
      else if (tilde[k] != rel)
        throw PreconditionError("complete_relative_decomposition: relative position of piece " +
                                std::to_string(k + 1) + " differs between intervals");
    }
  }
  std::vector<Interval> present_tilde;
  for (const auto& t : tilde)
    if (!t.is_empty()) present_tilde.push_back(t);
  if (!pairwise_disjoint(present_tilde))
    throw PreconditionError("complete_relative_decomposition: relative pieces overlap");

  for (std::size_t j = 0; j < J; ++j) {
    for (std::size_t k = 0; k < max_k; ++k) {
      if (tilde[k].is_empty()) continue;
      bool present = k < given[j].size() && !given[j][k].is_empty();
      if (!present && tilde[k].lower() < lengths[j])
        throw PreconditionError("complete_relative_decomposition: relative piece " +
                                std::to_string(k + 1) + " falls inside interval " +
                                family[j].str() + " but is absent there");
    }
  }

  // Elementary segments between consecutive breakpoints; all lie in (0, max |I_j|].
  std::set<Rational> cuts(lengths.begin(), lengths.end());
  std::set<Rational> breaks = cuts;
  breaks.insert(Rational(0));
  for (const auto& t : present_tilde) {
    breaks.insert(t.lower());
    breaks.insert(t.upper());
  }
  std::vector<Interval> complement;
  std::optional<Rational> run_start;
  Rational prev = 0;
  for (const Rational& cur : breaks) {
    if (cur == 0) continue;
    Interval seg(prev, cur);
    bool covered = std::any_of(present_tilde.begin(), present_tilde.end(),
                               [&](const Interval& t) { return t.contains(seg); });
    if (!covered) {
      if (!run_start) run_start = prev;
    } else if (run_start) {
      complement.emplace_back(*run_start, prev);
      run_start.reset();
    }
    if (run_start && cuts.count(cur)) {
      complement.emplace_back(*run_start, cur);
      run_start.reset();
    }
    prev = cur;
  }
  if (run_start) complement.emplace_back(*run_start, prev);

  RelativeDecomposition out{family};
  struct Entry {
    Interval piece;
    std::optional<unsigned> k;
  };
  std::vector<Entry> entries;
  for (std::size_t k = 0; k < max_k; ++k)
    if (!tilde[k].is_empty()) entries.push_back({tilde[k], static_cast<unsigned>(k + 1)});
  for (const auto& c : complement) entries.push_back({c, std::nullopt});
  std::sort(entries.begin(), entries.end(),
            [](const Entry& x, const Entry& y) { return x.piece.lower() < y.piece.lower(); });
  for (std::size_t s = 0; s < entries.size(); ++s) {
    out.relative_pieces.push_back(entries[s].piece);
    out.given_k.push_back(entries[s].k);
    (entries[s].k ? out.K : out.L).insert(s + 1);
  }

  out.given_count.assign(J, 0);
  out.complement_count.assign(J, 0);
  out.pieces.resize(J);
  for (std::size_t j = 0; j < J; ++j) {
    for (const auto& e : entries) {
      if (e.piece.upper() > lengths[j]) break;
      out.pieces[j].push_back(e.piece.shifted(family[j].lower()));
      ++(e.k ? out.given_count[j] : out.complement_count[j]);
    }
  }
  return out;
}

}  // namespace lpr
