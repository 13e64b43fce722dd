#include <catch_amalgamated.hpp>

#include "frozen.hpp"
#include "lpr/corpus.hpp"
#include "lpr/rademacher.hpp"
#include "oracles.hpp"

using namespace lpr;

namespace {
using Vecs = std::vector<std::vector<Complex>>;

Vecs random_vecs(random::CounterEngine& rng, std::size_t n, std::size_t d, bool real = false) {
  std::normal_distribution<double> g(0.0, 1.0);
  Vecs xs(n, std::vector<Complex>(d));
  for (auto& x : xs)
    for (auto& c : x) c = real ? Complex(g(rng)) : Complex(g(rng), g(rng));
  return xs;
}

LatticeSignal constant_scalar(double v) {
  return LatticeSignal({1, 2.0}, Rational(1), 8, std::vector<Complex>(8, v));
}
}  // namespace

TEST_CASE("sign ensembles") {
  const auto ex = SignEnsemble::exhaustive(3);
  CHECK(ex.trials() == 8);
  CHECK(ex.is_exhaustive());
  std::set<std::vector<int>> patterns;
  for (std::size_t t = 0; t < 8; ++t) patterns.insert({ex.sign(t, 0), ex.sign(t, 1), ex.sign(t, 2)});
  CHECK(patterns.size() == 8);

  const auto mc = SignEnsemble::monte_carlo(70, 100, 99);
  const auto again = SignEnsemble::monte_carlo(70, 100, 99);
  int plus = 0;
  for (std::size_t t = 0; t < 100; ++t)
    for (std::size_t c = 0; c < 70; ++c) {
      CHECK((mc.sign(t, c) == 1 || mc.sign(t, c) == -1));
      CHECK(mc.sign(t, c) == again.sign(t, c));
      plus += mc.sign(t, c) > 0;
    }
  CHECK(std::abs(plus - 3500) < 300);
  CHECK_THROWS_AS(SignEnsemble::monte_carlo(4, 63, 1), PreconditionError);
  CHECK(SignEnsemble::automatic(12, 1).is_exhaustive());
  CHECK_FALSE(SignEnsemble::automatic(13, 1).is_exhaustive());
}

TEST_CASE("closed-form Rademacher examples") {
  const LatticeSpec l2{2, 2.0};
  const auto e = rad_norm_mc(Vecs{{1.0, 0.0}, {0.0, 1.0}}, l2, 2.0, SignEnsemble::exhaustive(2));
  CHECK(std::abs(e.value - std::sqrt(2.0)) < 1e-15);
  CHECK(e.std_error == 0.0);

  const Vecs single{{Complex(1, 2), -3.0}};
  for (double p : {1.0, 3.0, 7.0})
    CHECK(std::abs(rad_norm_mc(single, l2, p, SignEnsemble::exhaustive(1)).value - std::sqrt(14.0)) < 1e-13);

  const auto four = rad_norm_mc(Vecs{{1.0}, {1.0}}, {1, 2.0}, 4.0, SignEnsemble::exhaustive(2));
  CHECK(std::abs(four.value - std::pow(8.0, 0.25)) < 1e-15);
}

TEST_CASE("exhaustive p = 2 identity and agreement with enumeration") {
  auto rng = random::CounterEngine::stream(61, 0);
  std::uniform_real_distribution<double> expo(1.0, 6.0);
  for (std::size_t n = 1; n <= 12; ++n) {
    const auto xs = random_vecs(rng, n, 3);
    double sq = 0.0;
    for (const auto& x : xs) sq += std::pow(lattice_norm(x, 2.0), 2);
    const auto est = rad_norm_mc(xs, {3, 2.0}, 2.0, SignEnsemble::exhaustive(n));
    CHECK(std::abs(est.value - std::sqrt(sq)) <= 1e-12 * std::sqrt(sq));

    const double r = expo(rng), p = expo(rng);
    const double ref = oracle::rademacher(xs, r, p);
    CHECK(std::abs(rad_norm_mc(xs, {3, r}, p, SignEnsemble::exhaustive(n)).value - ref) <= 1e-12 * ref);
  }
}

TEST_CASE("Monte Carlo estimate brackets the enumerated value") {
  auto rng = random::CounterEngine::stream(62, 0);
  const auto xs = random_vecs(rng, 14, 2);
  const double ref = oracle::rademacher(xs, 3.0, 4.0);
  const auto est = rad_norm_mc(xs, {2, 3.0}, 4.0, SignEnsemble::monte_carlo(14, 4096, 5));
  CHECK(est.std_error > 0.0);
  CHECK(std::abs(est.value - ref) < 4.0 * est.std_error);
  CHECK(est.seed == 5);
  CHECK_FALSE(est.exhaustive);
}

TEST_CASE("permutation and sign-flip invariance under enumeration") {
  auto rng = random::CounterEngine::stream(63, 0);
  auto xs = random_vecs(rng, 6, 2);
  const auto ens = SignEnsemble::exhaustive(6);
  const double base = rad_norm_mc(xs, {2, 3.0}, 3.0, ens).value;
  std::reverse(xs.begin(), xs.end());
  for (auto& c : xs[2]) c = -c;
  CHECK(std::abs(rad_norm_mc(xs, {2, 3.0}, 3.0, ens).value - base) <= 1e-13 * base);
}

TEST_CASE("contraction principle") {
  const LatticeSpec scalar{1, 2.0};
  const Vecs ones{{1.0}, {1.0}};
  const auto ens = SignEnsemble::exhaustive(2);
  CHECK(contraction_check(ones, {1.0, 1.0}, scalar, 3.0, ens).ratio == 1.0);
  CHECK(contraction_check(ones, {0.0, 0.0}, scalar, 3.0, ens).ratio == 0.0);
  CHECK(std::abs(contraction_check(ones, {0.5, 0.5}, scalar, 2.0, ens).ratio - 0.5) < 1e-15);
  CHECK_THROWS_AS(contraction_check(ones, {1.0, Complex(1.0, 0.1)}, scalar, 2.0, ens), PreconditionError);
  CHECK_FALSE(contraction_check(ones, {1.0, Complex(0.0, 1.0)}, scalar, 2.0, ens).real_coefficients);

  auto rng = random::CounterEngine::stream(64, 0);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int c = 0; c < 100; ++c) {
    const std::size_t n = static_cast<std::size_t>(corpus::uniform_int(rng, 1, 12));
    const auto xs = random_vecs(rng, n, 3, true);
    std::vector<Complex> alpha(n);
    for (auto& a : alpha) a = unit(rng);
    const auto rep = contraction_check(xs, alpha, {3, 1.0 + 4.0 * (unit(rng) + 1.0)}, 1.0 + 3.0 * (unit(rng) + 1.0),
                                       SignEnsemble::exhaustive(n));
    CHECK(rep.ratio <= 1.0 + 8.0 * std::numeric_limits<double>::epsilon());
    CHECK(rep.within_bound);
  }
}

TEST_CASE("Khintchine and alpha-property report") {
  const SignSource src{17, 1024};
  const auto one = constant_scalar(1.0);
  const auto rep4 = khintchine_alpha_report({{one}, {one}}, 4.0, src);
  CHECK(std::abs(rep4.rad_vs_square - std::pow(2.0, 0.25)) < 1e-14);

  auto rng = random::CounterEngine::stream(65, 0);
  std::vector<std::vector<LatticeSignal>> gs(3);
  for (auto& row : gs)
    for (int k = 0; k < 3; ++k) row.push_back(corpus::random_noise_signal(rng, {1, 2.0}, Rational(1), 8));
  const auto rep2 = khintchine_alpha_report(gs, 2.0, src);
  CHECK(std::abs(rep2.rad_vs_square - 1.0) < 1e-12);
  CHECK(std::abs(rep2.alpha_property - 1.0) < 1e-12);
  CHECK(rep2.rad.exhaustive);
  CHECK(rep2.rad2.exhaustive);
}

TEST_CASE("Riesz transfer examples") {
  const LatticeSpec l1{2, 1.0};
  const auto rep = riesz_transfer_check(Eigen::MatrixXcd::Identity(2, 2), Vecs{{1.0, 0.0}, {0.0, 1.0}}, l1,
                                        SignEnsemble::exhaustive(2));
  CHECK(std::abs(rep.c_row - 1.0) < 1e-15);
  CHECK(std::abs(rep.lhs - std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(rep.rhs.value - 2.0) < 1e-15);
  CHECK(std::abs(rep.ratio - std::sqrt(2.0) / 2.0) < 1e-15);

  Eigen::MatrixXcd h(1, 4);
  h << 0.5, Complex(0.0, 0.5), -0.5, 0.5;
  const Vecs a{{3.0, -4.0}};
  const auto single = riesz_transfer_check(h, a, l1, SignEnsemble::exhaustive(1));
  CHECK(std::abs(single.lhs - 7.0) < 1e-14);
  CHECK(std::abs(single.rhs.value - 7.0) < 1e-14);
  CHECK(std::abs(single.ratio - 1.0) < 1e-14);

  const auto zero = riesz_transfer_check(Eigen::MatrixXcd::Identity(2, 2), Vecs{{0.0, 0.0}, {0.0, 0.0}}, l1,
                                         SignEnsemble::exhaustive(2));
  CHECK(zero.lhs == 0.0);
  CHECK(zero.ratio == 0.0);
  CHECK_THROWS_AS(riesz_transfer_check(h, a, {2, 3.0}, SignEnsemble::exhaustive(1)), PreconditionError);
}

TEST_CASE("Riesz transfer ratio over a random corpus") {
  auto rng = random::CounterEngine::stream(0x5151, 0);
  std::normal_distribution<double> g(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const auto j = corpus::uniform_int(rng, 1, 8), m = corpus::uniform_int(rng, 1, 12);
    const auto d = corpus::uniform_int(rng, 1, 4);
    const double r = std::array<double, 3>{1.0, 1.5, 2.0}[i % 3];
    Eigen::MatrixXcd h(j, m);
    for (Eigen::Index a = 0; a < j; ++a)
      for (Eigen::Index b = 0; b < m; ++b) h(a, b) = Complex(g(rng), g(rng));
    Vecs as(j, std::vector<Complex>(d));
    for (auto& v : as)
      for (auto& c : v) c = Complex(g(rng), g(rng));
    const auto rep = riesz_transfer_check(h, as, {static_cast<std::size_t>(d), r}, SignEnsemble::exhaustive(j));
    worst = std::max(worst, rep.ratio);
  }
  CHECK(worst <= frozen::kRieszTransfer);
}
