#include <doctest.h>

#include <cmath>
#include <random>

#include "ming/errors.hpp"
#include "ming/pointer.hpp"
#include "support/oracles.hpp"

using ming::BasisIndex;
using ming::cdouble;
using ming::PointerConfig;

namespace {

std::pair<cdouble, cdouble> random_pair(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double p1 = u(rng);
  return {std::polar(std::sqrt(1.0 - p1), 2.0 * std::numbers::pi * u(rng)),
          std::polar(std::sqrt(p1), 2.0 * std::numbers::pi * u(rng))};
}

}  // namespace

TEST_CASE("budget rules") {
  CHECK(ming::BudgetRule::zero()(1009) == 0);
  CHECK(ming::BudgetRule::square_root()(1009) == 31);
  CHECK(ming::BudgetRule::square_root()(101) == 10);
  CHECK(ming::BudgetRule::power(0.25)(10007) == 10);
  CHECK_THROWS(ming::BudgetRule::power(1.0));
  CHECK_THROWS(ming::BudgetRule::power(0.0));
}

TEST_CASE("property: the default budget is sublinear") {
  const ming::BudgetRule rule;
  double previous = 1.0;
  for (int n : {101, 1009, 10007, 100003, 1000003}) {
    const double ratio = static_cast<double>(rule(n)) / n;
    CHECK(ratio < previous);
    previous = ratio;
  }
  CHECK(previous < 1e-3);
}

TEST_CASE("defect_count examples") {
  const auto config = PointerConfig::make(5, 0);
  CHECK(config.half == 3);
  CHECK(ming::defect_count(BasisIndex(5, 7), config) == 0);
  CHECK(ming::defect_count(BasisIndex(5, 14), config) == 2);
  CHECK(ming::defect_count(BasisIndex(5, 31), config) == 2);
}

TEST_CASE("property: defect_count matches a hand count on digit arrays") {
  std::mt19937_64 rng(2);
  for (int n : {3, 5, 13, 61}) {
    const auto config = PointerConfig::make(n, 0);
    std::uniform_int_distribution<std::uint64_t> pick(0, (std::uint64_t{1} << n) - 1);
    for (int trial = 0; trial < 300; ++trial) {
      const auto v = pick(rng);
      CHECK(ming::defect_count(BasisIndex(n, v), config) == oracle::defect_by_hand(v, n));
    }
  }
  // Multi-word indices with the half boundary inside a word.
  for (int n : {129, 1009}) {
    const auto config = PointerConfig::make(n, 0);
    std::bernoulli_distribution coin(0.3);
    for (int trial = 0; trial < 20; ++trial) {
      BasisIndex i(n);
      int want = 0;
      for (int p = 0; p < n; ++p) {
        const bool b = coin(rng);
        i.set_bit(p, b);
        want += p < config.half ? !b : b;
      }
      CHECK(ming::defect_count(i, config) == want);
    }
  }
}

TEST_CASE("cocked set canonical state") {
  const ming::CockedSet c(PointerConfig::make(5, 0));
  CHECK(c.canonical_state().to_u64() == 7);
  CHECK(c.contains(c.canonical_state()));
  CHECK_FALSE(c.contains(BasisIndex(5, 14)));
  const ming::CockedSet big(PointerConfig::with_rule(10007, ming::BudgetRule::zero()));
  CHECK(big.canonical_state().popcount() == 5004);
  CHECK(ming::defect_count(big.canonical_state(), big.config()) == 0);
}

TEST_CASE("pointer_value examples") {
  const auto config = PointerConfig::make(5, 0);
  const ming::CockedSet cocked(config);
  const BasisIndex canonical = cocked.canonical_state();
  const BasisIndex far(5, 25);  // defect 4

  CHECK(ming::pointer_value(ming::CombinedState::prepared(1.0, 0.0, canonical), cocked) == 0.0);
  CHECK(ming::pointer_value(ming::CombinedState::prepared(0.0, 1.0, far), cocked) == 1.0);

  const double r = 1.0 / std::sqrt(2.0);
  ming::CombinedState mixed;
  mixed.n = 5;
  mixed.a0 = r;
  mixed.a1 = r;
  mixed.branch0 = ming::BranchState::basis(canonical);
  mixed.branch1 = ming::BranchState::basis(far);
  CHECK(ming::pointer_value(mixed, cocked) == doctest::Approx(0.5).epsilon(1e-15));

  auto bad = ming::CombinedState::prepared(1.0, 1.0, canonical);
  CHECK_THROWS_AS(ming::pointer_value(bad, cocked), ming::NotNormalized);
}

TEST_CASE("time_average_quadrature examples") {
  const auto config = PointerConfig::make(5, 0);
  CHECK(ming::time_average_quadrature(1.0, 0.0, config, 11).value == 0.0);

  const int s = oracle::cocked_rotations(oracle::canonical_digits(5), 0);
  CHECK(s == 1);
  const auto r = ming::time_average_quadrature(0.0, 1.0, config, 50);
  CHECK(r.value == doctest::Approx(1.0 - s / 5.0).epsilon(1e-12));
  CHECK(r.s == s);
  CHECK(r.method == ming::AverageMethod::quadrature);

  CHECK_THROWS_AS(ming::time_average_quadrature(0.0, 1.0, config, 10), ming::QuadratureUnderresolved);
  CHECK_THROWS_AS(ming::time_average_quadrature(0.5, 0.5, config, 50), ming::NotNormalized);
}

TEST_CASE("time_average_spectral examples") {
  CHECK(ming::time_average_spectral(1.0, 0.0, PointerConfig::make(5, 0)).value == 0.0);
  const double r = std::sqrt(0.5);
  const auto res = ming::time_average_spectral(r, r, PointerConfig::make(5, 0));
  CHECK(res.s == 1);
  CHECK(res.value == doctest::Approx(0.4).epsilon(1e-15));

  // Larger n approaches |a1|^2 = 0.3.
  const cdouble a0 = std::sqrt(0.7);
  const cdouble a1 = std::sqrt(0.3);
  double previous = 1.0;
  for (int n : {11, 101, 1009, 10007}) {
    const double gap = std::abs(ming::time_average_spectral(a0, a1, PointerConfig::with_rule(n)).value - 0.3);
    CHECK(gap < previous);
    previous = gap;
  }
  CHECK(previous < 0.01);
}

TEST_CASE("property: quadrature and spectral agree; periodization is exact") {
  std::mt19937_64 rng(31);
  for (int n : {5, 7, 11, 101}) {
    for (const auto& rule : {ming::BudgetRule::zero(), ming::BudgetRule::square_root()}) {
      const auto config = PointerConfig::with_rule(n, rule);
      const auto [a0, a1] = random_pair(rng);
      const auto spectral = ming::time_average_spectral(a0, a1, config);
      const auto q1 = ming::time_average_quadrature(a0, a1, config, 10L * n);
      const auto q2 = ming::time_average_quadrature(a0, a1, config, 20L * n);
      CHECK(std::abs(q1.value - q2.value) < 1e-9);
      CHECK(std::abs(q1.value - spectral.value) < 1e-8);
      CHECK(q1.s == spectral.s);
    }
  }
}

TEST_CASE("property: closed form uses an independently enumerated s") {
  for (int n : {5, 7, 11, 13, 101, 211, 1009}) {
    for (const auto& rule : {ming::BudgetRule::zero(), ming::BudgetRule::square_root(),
                             ming::BudgetRule::power(0.3)}) {
      const auto config = PointerConfig::with_rule(n, rule);
      const int s = oracle::cocked_rotations(oracle::canonical_digits(n), config.defect_budget);
      const auto r = ming::time_average_spectral(std::sqrt(0.6), std::sqrt(0.4), config);
      CHECK(r.s == s);
      CHECK(r.value == doctest::Approx(0.4 * (1.0 - static_cast<double>(s) / n)).epsilon(1e-14));
    }
  }
}

TEST_CASE("property: particle phases leave averages unchanged") {
  const auto config = PointerConfig::with_rule(11, ming::BudgetRule::zero());
  const cdouble a0 = std::sqrt(0.45);
  const cdouble a1 = std::sqrt(0.55);
  const auto base_s = ming::time_average_spectral(a0, a1, config);
  const auto base_q = ming::time_average_quadrature(a0, a1, config, 110);
  // Exact unit phases: bitwise equality.
  for (cdouble phase : {cdouble(-1.0), cdouble(0.0, 1.0), cdouble(0.0, -1.0)}) {
    CHECK(ming::time_average_spectral(a0 * phase, a1, config).value == base_s.value);
    CHECK(ming::time_average_spectral(a0, a1 * phase, config).value == base_s.value);
    CHECK(ming::time_average_quadrature(a0, a1 * phase, config, 110).value == base_q.value);
  }
  // Generic phases perturb |a|^2 only by rounding.
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 10; ++trial) {
    const cdouble phase = std::polar(1.0, std::uniform_real_distribution<double>(0, 6.3)(rng));
    CHECK(std::abs(ming::time_average_spectral(a0 * phase, a1 * phase, config).value - base_s.value) < 1e-15);
  }
}

TEST_CASE("property: an idle-branch phase rate leaves averages unchanged") {
  const auto config = PointerConfig::with_rule(13, ming::BudgetRule::square_root());
  const cdouble a0 = std::sqrt(0.2);
  const cdouble a1 = std::sqrt(0.8);
  const auto plain = ming::time_average_quadrature(a0, a1, config, 130);
  for (double rate : {0.1, 1.0, 17.3}) {
    const auto shifted = ming::time_average_quadrature(a0, a1, config, 130, {rate});
    CHECK(std::abs(shifted.value - plain.value) < 1e-12);
  }
}

TEST_CASE("property: mixed initial states average linearly") {
  // Three cocked members on different orbits (budget 2 at n=13).
  const auto config = PointerConfig::make(13, 2);
  const ming::CockedSet cocked(config);
  const BasisIndex canonical = cocked.canonical_state();
  BasisIndex swapped = canonical;  // move one excitation across the boundary
  swapped.set_bit(6, false);
  swapped.set_bit(7, true);
  BasisIndex hole = canonical;
  hole.set_bit(0, false);
  const std::vector<BasisIndex> members{canonical, swapped, hole};
  for (const auto& m : members) REQUIRE(cocked.contains(m));
  REQUIRE_FALSE(ming::orbit_of(swapped) == ming::orbit_of(canonical));

  const cdouble a0 = std::sqrt(0.35);
  const cdouble a1 = std::sqrt(0.65);
  const std::vector<double> weights{0.5, 0.3, 0.2};
  double convex = 0.0;
  double quadrature_mix = 0.0;
  for (std::size_t k = 0; k < members.size(); ++k) {
    convex += weights[k] * ming::time_average_spectral(a0, a1, config, members[k]).value;
    quadrature_mix += weights[k] * ming::time_average_quadrature(a0, a1, config, 130, {}, members[k]).value;
  }
  CHECK(std::abs(convex - quadrature_mix) < 1e-12);
  // Every cocked start gives |a1|^2 (1 - s/n) with its own orbit's s.
  const auto r = ming::time_average_spectral(a0, a1, config, swapped);
  CHECK(r.value == doctest::Approx(0.65 * (1.0 - r.s / 13.0)).epsilon(1e-14));
}

TEST_CASE("averages from different cocked starts merge as n grows") {
  const cdouble a0 = std::sqrt(0.7);
  const cdouble a1 = std::sqrt(0.3);
  double previous = 1.0;
  for (int n : {101, 401, 1601}) {
    while (!ming::is_prime(n)) ++n;
    const auto config = PointerConfig::with_rule(n);
    const ming::CockedSet cocked(config);
    BasisIndex other = cocked.canonical_state();
    other.set_bit(config.half - 1, false);
    other.set_bit(config.half, true);
    const double gap = std::abs(ming::time_average_spectral(a0, a1, config).value -
                                ming::time_average_spectral(a0, a1, config, other).value);
    CHECK(gap <= previous);
    previous = gap;
  }
  CHECK(previous < 0.01);
}

TEST_CASE("convergence_sweep") {
  const cdouble a0 = std::sqrt(0.7);
  const cdouble a1 = std::sqrt(0.3);
  SUBCASE("budget zero residuals are 0.3 s/n and decrease") {
    const std::vector<int> ns{5, 7, 11, 101, 1009};
    const auto table = ming::convergence_sweep(ns, a0, a1, ming::BudgetRule::zero());
    REQUIRE(table.rows.size() == ns.size());
    for (std::size_t k = 0; k < ns.size(); ++k) {
      const auto& row = table.rows[k];
      const int s = oracle::cocked_rotations(oracle::canonical_digits(ns[k]), 0);
      CHECK(row.spectral.s == s);
      CHECK(row.residual == doctest::Approx(0.3 * s / ns[k]).epsilon(1e-12));
      CHECK(row.residual <= 0.3 * s / ns[k] + 1e-15);
      REQUIRE(row.quadrature.has_value());
      CHECK(std::abs(*row.quadrature - row.spectral.value) < 1e-8);
    }
    CHECK(table.residual_decreasing);
  }
  SUBCASE("default budget also decreases") {
    const auto table = ming::convergence_sweep({5, 7, 11, 101, 1009}, a0, a1, {});
    CHECK(table.residual_decreasing);
  }
  SUBCASE("single branch cases") {
    const auto ones = ming::convergence_sweep({5, 7, 11}, 0.0, 1.0, ming::BudgetRule::zero());
    for (const auto& row : ones.rows) CHECK(row.spectral.value == doctest::Approx(1.0 - row.spectral.s_over_n));
    const auto zeros = ming::convergence_sweep({5, 7, 11}, 1.0, 0.0, ming::BudgetRule::zero());
    for (const auto& row : zeros.rows) {
      CHECK(row.spectral.value == 0.0);
      CHECK(*row.quadrature == 0.0);
    }
  }
  SUBCASE("parallel rows match serial rows") {
    ming::SweepOptions serial;
    ming::SweepOptions parallel;
    parallel.jobs = 3;
    const std::vector<int> ns{5, 7, 11, 13, 101};
    const auto a = ming::convergence_sweep(ns, a0, a1, {}, serial);
    const auto b = ming::convergence_sweep(ns, a0, a1, {}, parallel);
    for (std::size_t k = 0; k < ns.size(); ++k) {
      CHECK(a.rows[k].spectral.value == b.rows[k].spectral.value);
      CHECK(*a.rows[k].quadrature == *b.rows[k].quadrature);
    }
  }
  SUBCASE("rejects composite sizes") {
    CHECK_THROWS_AS(ming::convergence_sweep({5, 9}, a0, a1, {}), ming::NonPrimeN);
  }
  SUBCASE("quadrature column is skipped above the limit") {
    ming::SweepOptions o;
    o.quadrature_max_n = 100;
    const auto t = ming::convergence_sweep({11, 101}, a0, a1, {}, o);
    CHECK(t.rows[0].quadrature.has_value());
    CHECK_FALSE(t.rows[1].quadrature.has_value());
  }
}

TEST_CASE("macroscopic check") {
  const ming::SiteState ground{1.0, 0.0};
  const ming::SiteState excited{0.0, 1.0};
  const double r = 1.0 / std::sqrt(2.0);
  const ming::SiteState plus{r, r};
  const cdouble a0 = std::sqrt(0.7);
  const cdouble a1 = std::sqrt(0.3);

  SUBCASE("prefixes differing in one site share the limit") {
    const ming::ProductPrefix p1{"a", a0, a1, {excited, ground, excited}};
    const ming::ProductPrefix p2{"b", a0, a1, {excited, ground, ground}};
    const auto report = ming::macroscopic_check({p1, p2}, ground, {101, 211, 401}, {},
                                                ming::PointerKind::amplitude);
    CHECK(report.pass);
    CHECK(report.spread_at_largest < 1e-3);
    CHECK(report.largest_n == 401);
    CHECK(report.rows.size() == 6);
  }
  SUBCASE("tail-only prefix agrees with itself") {
    const ming::ProductPrefix empty{"tail", a0, a1, {}};
    const auto report = ming::macroscopic_check({empty, empty}, plus, {101, 211}, {},
                                                ming::PointerKind::amplitude);
    CHECK(report.spread_at_largest == 0.0);
    CHECK(report.pass);
  }
  SUBCASE("indicator pointer is macroscopic too") {
    const ming::ProductPrefix p1{"a", a0, a1, {excited, plus}};
    const ming::ProductPrefix p2{"b", a0, a1, {ground}};
    const auto report = ming::macroscopic_check({p1, p2}, ground, {101, 211, 401},
                                                ming::BudgetRule::zero(), ming::PointerKind::indicator);
    CHECK(report.pass);
  }
  SUBCASE("finite-size prefixes can differ") {
    // At n = 5 the prefix decides almost everything.
    const ming::ProductPrefix cocked{"c", a0, a1, {excited, excited, excited}};
    const ming::ProductPrefix other{"o", a0, a1, {ground, ground, ground}};
    const auto report = ming::macroscopic_check({cocked, other}, ground, {5}, ming::BudgetRule::zero(),
                                                ming::PointerKind::amplitude);
    CHECK(report.rows[0].value == 0.0);
    CHECK(report.rows[1].value == 1.0);
    CHECK_FALSE(report.pass);
  }
}

TEST_CASE("product_pointer_value matches brute force at small n") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int n = 9;
  std::vector<ming::SiteState> sites;
  for (int p = 0; p < 4; ++p) {
    const double q = u(rng);
    sites.push_back({std::sqrt(1 - q), std::polar(std::sqrt(q), u(rng))});
  }
  const ming::SiteState tail{std::sqrt(0.8), std::sqrt(0.2)};
  const ming::ProductPrefix prefix{"x", 0.6, 0.8, sites};
  for (int budget : {0, 1, 2, 3}) {
    const auto rule = budget == 0 ? ming::BudgetRule::zero() : ming::BudgetRule::power(std::log(budget + 0.5) / std::log(n));
    const int b = rule(n);
    double mass = 0.0;
    for (std::uint64_t v = 0; v < (1U << n); ++v) {
      if (oracle::defect_by_hand(v, n) > b) continue;
      double prob = 1.0;
      for (int p = 0; p < n; ++p) {
        const auto& s = p < 4 ? sites[static_cast<std::size_t>(p)] : tail;
        prob *= ((v >> p) & 1U) ? std::norm(s.excited) : std::norm(s.ground);
      }
      mass += prob;
    }
    CHECK(ming::product_pointer_value(prefix, tail, n, rule, ming::PointerKind::amplitude) ==
          doctest::Approx(1.0 - mass).epsilon(1e-12));
  }
}

TEST_CASE("born_trend separates the amplitude and indicator pointers") {
  const cdouble a0 = std::sqrt(0.7);
  const cdouble a1 = std::sqrt(0.3);
  const std::vector<int> ns{101, 211, 401};
  const auto amplitude = ming::born_trend(a0, a1, ns, ming::BudgetRule::zero(), ming::PointerKind::amplitude);
  CHECK(amplitude.converges);
  CHECK(amplitude.decay_exponent == doctest::Approx(-1.0).epsilon(1e-12));
  const auto indicator = ming::born_trend(a0, a1, ns, ming::BudgetRule::zero(), ming::PointerKind::indicator);
  CHECK_FALSE(indicator.converges);
  for (const auto& r : indicator.averages) CHECK(r.value == 1.0);
  for (double res : indicator.residuals) CHECK(res == doctest::Approx(0.7));
  // With no particle there is nothing to detect for either pointer.
  CHECK(ming::indicator_time_average(1.0, 0.0, ming::PointerConfig::make(101, 0)).value == 0.0);
}

TEST_CASE("classical limit") {
  CHECK(ming::classical_limit(1.0, 0.0).expectation_of_f() == 0.0);
  CHECK(ming::classical_limit(0.0, 1.0).expectation_of_f() == 1.0);
  const auto x = ming::classical_limit(std::sqrt(0.7), std::sqrt(0.3));
  CHECK(x.weight_p0 + x.weight_p1 == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(x.expectation_of_f() == doctest::Approx(0.3).epsilon(1e-15));
  const auto sweep = ming::convergence_sweep({1009}, std::sqrt(0.7), std::sqrt(0.3), ming::BudgetRule::zero());
  CHECK(std::abs(sweep.rows[0].spectral.value - x.expectation_of_f()) < 1e-3);
  CHECK_THROWS_AS(ming::classical_limit(1.0, 1.0), ming::NotNormalized);
}
