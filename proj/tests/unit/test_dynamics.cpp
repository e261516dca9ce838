#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ming/dynamics.hpp"
#include "ming/orbit.hpp"
#include "ming/validation.hpp"
#include "support/oracles.hpp"

using ming::cdouble;

namespace {

std::vector<cdouble> random_unit_vector(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g;
  std::vector<cdouble> v(static_cast<std::size_t>(n));
  double norm = 0.0;
  for (auto& z : v) {
    z = {g(rng), g(rng)};
    norm += std::norm(z);
  }
  for (auto& z : v) z /= std::sqrt(norm);
  return v;
}

double norm_of(const std::vector<cdouble>& v) {
  double s = 0.0;
  for (auto z : v) s += std::norm(z);
  return std::sqrt(s);
}

double max_diff(const std::vector<cdouble>& a, const std::vector<cdouble>& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

std::vector<cdouble> basis(int n, int j) {
  std::vector<cdouble> e(static_cast<std::size_t>(n));
  e[static_cast<std::size_t>(j)] = 1.0;
  return e;
}

}  // namespace

TEST_CASE("physical scale rescales h as 1/n") {
  const ming::PhysicalScale s(2.0, 7);
  CHECK(s.h() * 7 == doctest::Approx(2.0).epsilon(1e-15));
  CHECK_THROWS(ming::PhysicalScale(0.0, 7));
  CHECK_THROWS(ming::PhysicalScale(1.0, 0));
}

TEST_CASE("ming_entry diagonal is i h (n-1) / 2n") {
  for (int n : {3, 5, 101, 10007}) {
    const ming::PhysicalScale s(1.0, n);
    const cdouble d = ming::ming_entry(2, 2, n, s);
    CHECK(d.real() == 0.0);
    CHECK(d.imag() == doctest::Approx(s.h() * (n - 1) / (2.0 * n)).epsilon(1e-14));
  }
  // Tends to i h / 2.
  const ming::PhysicalScale big(1.0, 100003);
  CHECK(ming::ming_entry(0, 0, 100003, big).imag() / big.h() == doctest::Approx(0.5).epsilon(1e-4));
}

TEST_CASE("ming_entry closed form matches direct summation") {
  for (int n : {2, 3, 5, 7, 11, 31}) {
    const ming::PhysicalScale s(1.7, n);
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < n; ++c) {
        const cdouble want = oracle::entry_by_summation(r, c, n, s.h());
        CHECK(std::abs(ming::ming_entry(r, c, n, s) - want) < 1e-13);
      }
    }
  }
}

TEST_CASE("ming_entry is linear in h") {
  const ming::PhysicalScale s1(1.0, 7);
  const ming::PhysicalScale s2(2.0, 7);
  for (int r = 0; r < 7; ++r) {
    for (int c = 0; c < 7; ++c) {
      CHECK(std::abs(ming::ming_entry(r, c, 7, s2) - 2.0 * ming::ming_entry(r, c, 7, s1)) < 1e-15);
    }
  }
}

TEST_CASE("dense block is skew-hermitian and exponentiates to the cycle") {
  for (int n : {3, 5, 7, 11}) {
    CAPTURE(n);
    const ming::PhysicalScale s(1.0, n);
    const ming::MingBlock block(ming::decompose(n).orbits.front(), s);
    const Eigen::MatrixXcd a = block.dense();
    CHECK((a + a.adjoint()).cwiseAbs().maxCoeff() < 1e-14);
    const Eigen::MatrixXcd u = oracle::expm((2.0 * std::numbers::pi / s.h()) * a);
    CHECK((u - oracle::cycle_matrix(n)).cwiseAbs().maxCoeff() < (n == 3 ? 1e-12 : 1e-10));
  }
}

TEST_CASE("asymptotic off-diagonal magnitude h / (2 pi |m|) at n=1009") {
  const int n = 1009;
  const ming::PhysicalScale s(1.0, n);
  for (int m = 1; m <= 5; ++m) {
    for (int sign : {1, -1}) {
      const cdouble e = ming::ming_entry(500 + sign * m, 500, n, s);
      const double want = s.h() / (2.0 * std::numbers::pi * m);
      CHECK(std::abs(std::abs(e) - want) / want < 0.01);
    }
  }
}

TEST_CASE("evolve_orbit examples") {
  std::mt19937_64 rng(3);
  const auto v = random_unit_vector(rng, 7);
  CHECK(max_diff(ming::evolve_orbit(v, 0.0), v) == 0.0);
  for (int j = 0; j < 7; ++j) {
    CHECK(max_diff(ming::evolve_orbit(basis(7, j), 1.0), basis(7, (j + 1) % 7)) == 0.0);
  }
  CHECK(max_diff(ming::evolve_orbit(v, 7.0), v) == 0.0);
  // Just off an integer the spectral path runs; still the full-period identity.
  CHECK(max_diff(ming::evolve_orbit(v, 7.0 + 1e-13), v) < 1e-11);

  const auto half = ming::evolve_orbit(basis(3, 0), 0.5);
  const std::vector<cdouble> frozen = {{1.0 / 3.0, 1.0 / std::sqrt(3.0)},
                                       {1.0 / 3.0, -1.0 / std::sqrt(3.0)},
                                       {1.0 / 3.0, 0.0}};
  CHECK(max_diff(half, frozen) < 1e-14);
  const Eigen::MatrixXcd p = oracle::cycle_power(3, 0.5);
  for (int a = 0; a < 3; ++a) CHECK(std::abs(half[static_cast<std::size_t>(a)] - p(a, 0)) < 1e-12);
}

TEST_CASE("property: unitarity, group law and periodicity") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> time(-50.0, 50.0);
  for (int n : {3, 5, 7, 101, 1009}) {
    CAPTURE(n);
    for (int trial = 0; trial < 5; ++trial) {
      const auto v = random_unit_vector(rng, n);
      const double s = time(rng);
      const double t = time(rng);
      const auto vs = ming::evolve_orbit(v, s);
      CHECK(std::abs(norm_of(vs) - 1.0) < 1e-12);
      const auto composed = ming::evolve_orbit(vs, t);
      const auto direct = ming::evolve_orbit(v, s + t);
      CHECK(max_diff(composed, direct) < 1e-10);
      CHECK(max_diff(ming::evolve_orbit(v, s + n), vs) < 1e-10);
    }
  }
}

TEST_CASE("property: evolve_orbit matches the dense exponential for n <= 12") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> time(-20.0, 20.0);
  for (int n : {3, 5, 7, 11}) {
    const ming::PhysicalScale scale(1.0, n);
    const ming::MingBlock block(ming::decompose(n).orbits.back(), scale);
    const Eigen::MatrixXcd a = block.dense();
    for (int trial = 0; trial < 10; ++trial) {
      const double t = time(rng);
      const Eigen::MatrixXcd u = oracle::expm((2.0 * std::numbers::pi * t / scale.h()) * a);
      const auto v = random_unit_vector(rng, n);
      Eigen::VectorXcd ev(n);
      for (int k = 0; k < n; ++k) ev(k) = v[static_cast<std::size_t>(k)];
      const Eigen::VectorXcd want = u * ev;
      const auto got = block.evolve(v, t);
      for (int k = 0; k < n; ++k) CHECK(std::abs(got[static_cast<std::size_t>(k)] - want(k)) < 1e-9);
    }
  }
}

TEST_CASE("property: trajectories do not depend on h") {
  std::mt19937_64 rng(23);
  const auto orbit = ming::decompose(11).orbits[4];
  const ming::MingBlock small(orbit, ming::PhysicalScale(1e-3, 11));
  const ming::MingBlock large(orbit, ming::PhysicalScale(42.0, 11));
  for (int trial = 0; trial < 10; ++trial) {
    const auto v = random_unit_vector(rng, 11);
    const double t = std::uniform_real_distribution<double>(0.0, 30.0)(rng);
    CHECK(small.evolve(v, t) == large.evolve(v, t));
  }
}

TEST_CASE("evolve_combined keeps the idle branch and moves the active one") {
  const ming::BasisIndex cocked(5, 7);
  SUBCASE("trivial branch only") {
    const auto s = ming::CombinedState::prepared(1.0, 0.0, cocked);
    const auto e = ming::evolve_combined(s, 2.37);
    CHECK(e.amplitude(0, cocked) == cdouble(1.0));
    CHECK(e.branch0.orbits[0].amplitudes == s.branch0.orbits[0].amplitudes);
  }
  SUBCASE("unit time rotates the apparatus one step") {
    const auto s = ming::CombinedState::prepared(0.0, 1.0, cocked);
    const auto e = ming::evolve_combined(s, 1.0);
    CHECK(e.amplitude(1, ming::BasisIndex(5, 14)) == cdouble(1.0));
    CHECK(e.amplitude(1, cocked) == cdouble(0.0));
  }
  SUBCASE("norm is conserved for an even superposition") {
    const double r = 1.0 / std::sqrt(2.0);
    const auto s = ming::CombinedState::prepared(r, r, cocked);
    for (double t : {0.3, 1.9, 4.41, 123.456}) {
      const auto e = ming::evolve_combined(s, t);
      CHECK(std::abs(e.norm() - 1.0) < 1e-12);
      CHECK(e.a0 == s.a0);
      CHECK(e.a1 == s.a1);
    }
  }
  SUBCASE("fixed points are stationary") {
    const auto s = ming::CombinedState::prepared(0.0, 1.0, ming::BasisIndex::ones(5));
    CHECK(ming::evolve_combined(s, 0.77).amplitude(1, ming::BasisIndex::ones(5)) == cdouble(1.0));
  }
  SUBCASE("idle phase rate only rotates branch0 by a global phase") {
    const double r = 1.0 / std::sqrt(2.0);
    const auto s = ming::CombinedState::prepared(r, r, cocked);
    const auto e = ming::evolve_combined(s, 0.5, {3.0});
    CHECK(std::abs(std::abs(e.amplitude(0, cocked)) - r) < 1e-15);
    CHECK(std::abs(e.amplitude(0, cocked) - r * std::polar(1.0, -1.5)) < 1e-15);
  }
}

TEST_CASE("dense_check passes for small primes and refuses large n") {
  const double times[] = {0.3, 1.0, 2.5};
  for (int n : {3, 5, 7, 11}) {
    const auto r = ming::dense_check(n, times);
    CHECK(r.pass);
    CHECK(r.orbits_follow_rotation);
  }
  CHECK_THROWS(ming::dense_check(13, times));
  CHECK_THROWS(ming::dense_check(9, times));
}
