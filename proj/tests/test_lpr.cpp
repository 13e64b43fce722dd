#include <catch_amalgamated.hpp>

#include "frozen.hpp"
#include "lpr/lpr_experiments.hpp"

using namespace lpr;

namespace {
DisjointFamily singleton_bins(std::int64_t lo, std::int64_t hi, const Rational& period) {
  std::vector<Interval> out;
  for (std::int64_t c = lo; c <= hi; ++c)
    out.emplace_back((Rational(c) - Rational(1, 2)) / period, (Rational(c) + Rational(1, 2)) / period);
  return DisjointFamily(std::move(out));
}

LatticeSignal noise(std::uint64_t seed, LatticeSpec spec, std::size_t n, const Rational& period = 1) {
  auto rng = random::CounterEngine::stream(seed, 0);
  return corpus::random_noise_signal(rng, spec, period, n);
}
}  // namespace

TEST_CASE("impulse against singleton bins") {
  LatticeSignal f = LatticeSignal::zeros({1, 2.0}, Rational(8), 8);
  f.at(0, 0) = 1.0;
  const double r = lpr_square_ratio(f, singleton_bins(-4, 3, Rational(8)), 4.0);
  CHECK(std::abs(r - std::pow(8.0, -0.25)) < 1e-14);
}

TEST_CASE("covering families are exact at p = 2") {
  auto rng = random::CounterEngine::stream(81, 0);
  for (int c = 0; c < 20; ++c) {
    const auto fam = corpus::random_covering_family(rng, 64, Rational(2), 1 + c % 7);
    const auto f = corpus::random_noise_signal(rng, {3, 2.0}, Rational(2), 64);
    CHECK(std::abs(lpr_square_ratio(f, fam, 2.0) - 1.0) < 1e-12);
  }
}

TEST_CASE("partial families and unions") {
  auto rng = random::CounterEngine::stream(82, 0);
  for (int c = 0; c < 20; ++c) {
    const auto fam = corpus::random_frequency_family(rng, 128, Rational(1), 6);
    const auto f = corpus::random_noise_signal(rng, {1, 2.0}, Rational(1), 128);
    const double all = lpr_square_ratio(f, fam, 2.0);
    CHECK(all <= 1.0 + 1e-12);
    const DisjointFamily part(std::vector<Interval>(fam.begin(), fam.begin() + 3));
    for (double p : {2.0, 4.0}) CHECK(lpr_square_ratio(f, part, p) <= lpr_square_ratio(f, fam, p) * (1 + 1e-13));
  }
}

TEST_CASE("zero signal and exponent checks") {
  const auto z = LatticeSignal::zeros({2, 2.0}, Rational(1), 16);
  const auto fam = singleton_bins(-2, 2, Rational(1));
  CHECK(lpr_square_ratio(z, fam, 4.0) == 0.0);
  CHECK(lpr_rad_ratio(z, fam, 4.0, {1, 64}, RadMode::direct).ratio == 0.0);
  CHECK_THROWS_AS(lpr_square_ratio(z, fam, 1.5), PreconditionError);
  CHECK_THROWS_AS(lpr_rad_ratio(z, fam, 1.5, {1, 64}, RadMode::direct), PreconditionError);
}

TEST_CASE("direct Rademacher ratio") {
  const Rational period(1);
  const auto f = noise(83, {2, 4.0}, 64);
  // One interval holding every bin: S f = f.
  const DisjointFamily whole({Interval(Rational(-65, 2), Rational(63, 2))});
  const auto one = lpr_rad_ratio(f, whole, 4.0, {5, 64}, RadMode::direct);
  CHECK(std::abs(one.ratio - 1.0) < 1e-12);
  CHECK(one.estimate.exhaustive);

  // Scalar, p = 2, exhaustive signs: the Rademacher norm is the square function norm.
  auto rng = random::CounterEngine::stream(84, 0);
  for (int c = 0; c < 10; ++c) {
    const auto fam = corpus::random_frequency_family(rng, 64, period, 1 + c % 6);
    const auto g = corpus::random_noise_signal(rng, {1, 2.0}, period, 64);
    const auto rad = lpr_rad_ratio(g, fam, 2.0, {9, 64}, RadMode::direct);
    REQUIRE(rad.estimate.exhaustive);
    CHECK(std::abs(rad.ratio - lpr_square_ratio(g, fam, 2.0)) < 1e-12);
  }
}

TEST_CASE("dyadic Rademacher ratio") {
  const auto f = noise(85, {1, 2.0}, 256, Rational(8));
  const DisjointFamily short_fam({Interval(Rational(0), Rational(3))});
  CHECK_THROWS_AS(lpr_rad_ratio(f, short_fam, 2.0, {1, 64}, RadMode::dyadic), PreconditionError);

  // Scalar p = 2 with exhaustive signs: the dyadic norm is the square
  // function over the pieces of the larger side.
  const DisjointFamily fam({Interval(Rational(0), Rational(9)), Interval(Rational(10), Rational(15))});
  const auto rad = lpr_rad_ratio(f, fam, 2.0, {3, 64}, RadMode::dyadic);
  REQUIRE(rad.estimate.exhaustive);
  const auto dec = dyadic_decompose(fam);
  double best = 0.0;
  for (Side s : {Side::a, Side::b}) {
    std::vector<Interval> pieces;
    for (const auto& p : dec.side_pieces(s))
      if (!p.is_empty()) pieces.push_back(p);
    best = std::max(best, lpr_square_ratio(f, DisjointFamily(pieces), 2.0));
  }
  CHECK(std::abs(rad.ratio - best) < 1e-12);
  CHECK(rad.ratio <= 1.0 + 1e-12);
}

TEST_CASE("G for one interval is the smooth projection modulus") {
  const auto f = noise(86, {2, 3.0}, 128, Rational(4));
  const Interval i(Rational(1), Rational(6));
  const auto rep = g_domination_report(f, DisjointFamily({i}));
  const auto s = smooth_project(f, i);
  for (std::size_t k = 0; k < s.values().size(); ++k)
    CHECK(std::abs(rep.g.values()[k].real() - std::abs(s.values()[k])) < 1e-12);
  CHECK(rep.degree == 0);
  CHECK(rep.dom_ratio > 0.0);
  CHECK(g_domination_report(LatticeSignal::zeros({1, 2.0}, Rational(4), 128), DisjointFamily({i})).dom_ratio == 0.0);
}

TEST_CASE("corpus runs") {
  ExperimentConfig cfg;
  cfg.n = 128;
  cfg.cases = 12;
  cfg.p = 4.0;
  cfg.refine_rounds = 0;
  const auto base = estimate_constant(cfg);
  REQUIRE(base.cases.size() == 12);
  for (std::size_t i = 0; i < 12; ++i) {
    CHECK(base.cases[i].id == i);
    CHECK(base.cases[i].seed == case_seed(cfg.seed, i));
    CHECK(base.cases[i].ratio <= base.max);
  }
  CHECK(base.cases[base.argmax_id].ratio == base.max);

  // Parallel widths and splits give the same report.
  cfg.jobs = 3;
  const auto wide = estimate_constant(cfg);
  const auto merged = merge_reports(estimate_constant(cfg, 0, 5), estimate_constant(cfg, 5, 7));
  for (const auto* r : {&wide, &merged}) {
    CHECK(r->max == base.max);
    CHECK(r->argmax_id == base.argmax_id);
    for (std::size_t i = 0; i < 12; ++i) CHECK(r->cases[i].ratio == base.cases[i].ratio);
  }

  // Greedy refinement never lowers a case ratio.
  cfg.jobs = 1;
  cfg.refine_rounds = 4;
  const auto refined = estimate_constant(cfg);
  for (std::size_t i = 0; i < 12; ++i) CHECK(refined.cases[i].ratio >= base.cases[i].ratio);
}

TEST_CASE("case construction is seed determined") {
  ExperimentConfig cfg;
  cfg.n = 64;
  for (auto kind : {FamilyKind::random, FamilyKind::covering, FamilyKind::pieces, FamilyKind::long_intervals}) {
    cfg.family = kind;
    const auto x = make_case(cfg, 99), y = make_case(cfg, 99);
    CHECK(x.family.intervals() == y.family.intervals());
    CHECK(x.signal.values() == y.signal.values());
  }
  cfg.family = FamilyKind::pieces;
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto in = make_case(cfg, s);
    CHECK(pairwise_disjoint(in.family.intervals()));
  }
}

TEST_CASE("splitting a member keeps the p = 2 square mass") {
  auto rng = random::CounterEngine::stream(87, 0);
  for (int c = 0; c < 20; ++c) {
    const auto f = corpus::random_noise_signal(rng, {2, 2.0}, Rational(2), 128);
    const auto fam = corpus::random_long_family(rng, 128, Rational(2), 4, 6);
    std::vector<Interval> split;
    for (std::size_t j = 0; j < fam.size(); ++j) {
      if (j != 0) {
        split.push_back(fam[j]);
        continue;
      }
      // Cut at a half-bin offset strictly inside the first member.
      const Rational cut = fam[0].lower() + Rational(3, 2);
      split.emplace_back(fam[0].lower(), cut);
      split.emplace_back(cut, fam[0].upper());
    }
    const double before = mixed_norm(square_function(f, fam), 2.0);
    const double after = mixed_norm(square_function(f, DisjointFamily(split)), 2.0);
    CHECK(after >= before * (1 - 1e-13));
    CHECK(std::abs(after - before) <= 1e-12 * before);
  }
}

TEST_CASE("smoothing sharp projections leaves the square ratio unchanged") {
  auto rng = random::CounterEngine::stream(88, 0);
  for (int c = 0; c < 10; ++c) {
    const auto f = corpus::random_noise_signal(rng, {2, 3.0}, Rational(1), 256);
    const auto fam = corpus::random_frequency_family(rng, 256, Rational(1), 5);
    std::vector<LatticeSignal> smooth;
    for (const auto& i : fam) smooth.push_back(smooth_project(sharp_project(f, i), i));
    const double r = mixed_norm(square_sum(smooth), 4.0) / mixed_norm(f, 4.0);
    CHECK(std::abs(r - lpr_square_ratio(f, fam, 4.0)) < 1e-12);
  }
}

TEST_CASE("regression fixture: direct Rademacher ratio at seed 0xC0FFEE") {
  auto rng = random::CounterEngine::stream(0xC0FFEE, 1);
  const auto fam = corpus::random_frequency_family(rng, 1024, Rational(1), 8);
  REQUIRE(fam.size() == 8);
  auto srng = random::CounterEngine::stream(0xC0FFEE, 2);
  const auto f = corpus::random_noise_signal(srng, {1, 2.0}, Rational(1), 1024);
  const auto r = lpr_rad_ratio(f, fam, 4.0, {0xC0FFEE, 1024}, RadMode::direct);
  CHECK(r.estimate.exhaustive);
  CHECK(std::abs(r.ratio - frozen::kRadFixture) <= 1e-12 * frozen::kRadFixture);
}

TEST_CASE("regression fixture: estimate_constant(p = 4, N = 1024, 500 cases, seed 7)") {
  ExperimentConfig cfg;
  cfg.p = 4.0;
  cfg.n = 1024;
  cfg.cases = 500;
  cfg.seed = 7;
  const auto rep = estimate_constant(cfg);
  CHECK(std::abs(rep.max - frozen::kEstimateMax) <= 1e-12);
  CHECK(rep.argmax_id == frozen::kEstimateArgmax);
  CHECK(rep.argmax_seed == frozen::kEstimateArgmaxSeed);
  CHECK(rep.max <= 1.0);
}

TEST_CASE("direct and dyadic Rademacher ratios are two-sided comparable") {
  ExperimentConfig cfg;
  cfg.n = 256;
  cfg.family = FamilyKind::long_intervals;
  cfg.seed = 0x4B;
  double k = 0.0;
  for (std::size_t i = 0; i < 40; ++i) {
    const std::uint64_t seed = case_seed(cfg.seed, i);
    const double direct = rad_case(cfg, seed, RadMode::direct).ratio;
    const double dyadic = rad_case(cfg, seed, RadMode::dyadic).ratio;
    REQUIRE(direct > 0.0);
    REQUIRE(dyadic > 0.0);
    k = std::max({k, direct / dyadic, dyadic / direct});
  }
  CHECK(k <= frozen::kComparability);
}
