#include <catch_amalgamated.hpp>

#include "lpr/corpus.hpp"
#include "lpr/dyadic.hpp"
#include "lpr/relative.hpp"

using namespace lpr;

namespace {
Interval iv(std::int64_t a, std::int64_t b) { return Interval(make_rational(a), make_rational(b)); }

void check_exact_invariants(const RelativeDecomposition& rd) {
  for (std::size_t j = 0; j < rd.family.size(); ++j) {
    const auto& ps = rd.pieces[j];
    REQUIRE(ps.size() == rd.count(j));
    Rational total = 0;
    for (std::size_t s = 0; s < ps.size(); ++s) {
      CHECK(rd.family[j].contains(ps[s]));
      CHECK(ps[s] == rd.relative_pieces[s].shifted(rd.family[j].lower()));
      total += ps[s].length();
      if (s > 0) CHECK(ps[s - 1].upper() == ps[s].lower());
    }
    CHECK(total == rd.family[j].length());
    CHECK(ps.front().lower() == rd.family[j].lower());
    std::set<std::size_t> all;
    for (std::size_t s = 1; s <= rd.count(j); ++s) all.insert(s);
    std::set<std::size_t> merged = rd.K_j(j);
    const std::set<std::size_t> lj = rd.L_j(j);
    merged.insert(lj.begin(), lj.end());
    CHECK(merged == all);
    CHECK(rd.K_j(j).size() == rd.given_count[j]);
    CHECK(rd.L_j(j).size() == rd.complement_count[j]);
  }
}
}  // namespace

TEST_CASE("completion of a single relative piece") {
  DisjointFamily fam({iv(0, 8), iv(10, 18)});
  auto rd = complete_relative_decomposition(fam, {{iv(1, 2)}, {iv(11, 12)}});
  CHECK(rd.relative_pieces == std::vector<Interval>{iv(0, 1), iv(1, 2), iv(2, 8)});
  CHECK(rd.K == std::set<std::size_t>{2});
  CHECK(rd.L == std::set<std::size_t>{1, 3});
  CHECK(rd.complement_count == std::vector<std::size_t>{2, 2});
  CHECK(rd.pieces[1] == std::vector<Interval>{iv(10, 11), iv(11, 12), iv(12, 18)});
  check_exact_invariants(rd);
}

TEST_CASE("complement pieces are cut at every interval length") {
  DisjointFamily fam({iv(0, 8), iv(20, 32)});
  auto rd = complete_relative_decomposition(fam, {{iv(1, 2)}, {iv(21, 22)}});
  CHECK(rd.relative_pieces == std::vector<Interval>{iv(0, 1), iv(1, 2), iv(2, 8), iv(8, 12)});
  CHECK(rd.count(0) == 3);
  CHECK(rd.count(1) == 4);
  check_exact_invariants(rd);
}

TEST_CASE("a complete decomposition needs no completion") {
  // a- and b-pieces of sources with equal lengths cover every source.
  DisjointFamily fam({iv(0, 20), iv(40, 60)});
  auto dec = dyadic_decompose(fam);
  std::vector<std::vector<Interval>> given;
  for (const auto& d : dec.intervals) {
    std::vector<Interval> ps;
    for (const auto& p : d.a_pieces) ps.push_back(p);
    for (auto it = d.b_pieces.rbegin(); it != d.b_pieces.rend(); ++it) ps.push_back(*it);
    given.push_back(ps);
  }
  auto rd = complete_relative_decomposition(fam, given);
  CHECK(rd.L.empty());
  CHECK(rd.pieces[0] == given[0]);
  CHECK(rd.pieces[1] == given[1]);
  check_exact_invariants(rd);
}

TEST_CASE("a-side pieces of unequal sources are completed consistently") {
  // a-pieces are at the same relative positions for every source; the
  // terminal piece differs and is passed as absent.
  auto rng = random::CounterEngine::stream(31, 0);
  corpus::RationalFamilyParams prm;
  prm.max_denominator = 1;
  prm.max_length = 512;
  for (int c = 0; c < 100; ++c) {
    auto fam = corpus::random_rational_family(rng, prm);
    auto dec = dyadic_decompose(fam);
    unsigned common = dec.intervals[0].n;
    for (const auto& d : dec.intervals) common = std::min(common, d.n);
    std::vector<std::vector<Interval>> given;
    for (const auto& d : dec.intervals) {
      std::vector<Interval> ps(d.a_pieces.begin(), d.a_pieces.begin() + (common - 1));
      given.push_back(ps);
    }
    auto rd = complete_relative_decomposition(fam, given);
    check_exact_invariants(rd);
  }
}

TEST_CASE("mismatched relative positions are rejected") {
  DisjointFamily fam({iv(0, 8), iv(10, 18)});
  CHECK_THROWS_AS(complete_relative_decomposition(fam, {{iv(1, 2)}, {iv(12, 13)}}), PreconditionError);
}

TEST_CASE("overlapping given pieces are rejected") {
  DisjointFamily fam({iv(0, 8)});
  CHECK_THROWS_AS(complete_relative_decomposition(fam, {{iv(1, 3), iv(2, 4)}}), PreconditionError);
}

TEST_CASE("a relative piece missing inside a source is rejected") {
  DisjointFamily fam({iv(0, 8), iv(10, 18)});
  CHECK_THROWS_AS(complete_relative_decomposition(fam, {{iv(1, 2)}, {Interval::empty()}}),
                  PreconditionError);
}

TEST_CASE("given pieces outside their source are rejected") {
  DisjointFamily fam({iv(0, 8)});
  CHECK_THROWS_AS(complete_relative_decomposition(fam, {{iv(7, 9)}}), PreconditionError);
}
