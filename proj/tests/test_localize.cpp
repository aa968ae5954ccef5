#include "gwalk/localize.hpp"
#include "gwalk/spectral.hpp"

#include <doctest.h>

#include <cmath>

using namespace gwalk;

namespace {

QuadratureSpec quick(int M = 64) {
  QuadratureSpec q;
  q.M = M;
  return q;
}

const Family kGrover[] = {Family::P34X1, Family::P24Y1, Family::P23Z1};

}  // namespace

TEST_CASE("constant integrand fixes the normalization") {
  // Diagonal c is 2 everywhere, so I_k = 2 pi^2 / (8 pi^2) = 1/4.
  const auto c = c_integrals(Family::P24Y1, 0.3, 32);
  for (int s = 0; s < 4; ++s) {
    CHECK(c.I1[s][s] == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(c.I2[s][s] == doctest::Approx(0.25).epsilon(1e-14));
  }
}

TEST_CASE("diagonal one eighth for the Grover families") {
  for (Family f : kGrover)
    for (double th : {-2.9, -kPi / 2, 1.0, 2.2}) {
      const auto r = localization_report(f, th, quick());
      for (Chirality S : kChiralities) CHECK(std::abs(r.at(S, S) - 0.125) < 1e-9);
    }
  const auto r = localization_report(Family::P24Y1, 1.0, quick());
  CHECK(std::abs(r.at(Chirality::L, Chirality::L) - 0.125) < 1e-9);
}

TEST_CASE("table and eigenvector routes agree for P24Y1") {
  for (double th : {-2.0, 0.8}) {
    const auto a = c_integrals(Family::P24Y1, th, 48, true);
    const auto b = c_integrals(Family::P24Y1, th, 48, false);
    for (int s = 0; s < 4; ++s)
      for (int sp = 0; sp < 4; ++sp) {
        CHECK(std::abs(a.I1[s][sp] - b.I1[s][sp]) < 1e-9);
        CHECK(std::abs(a.I2[s][sp] - b.I2[s][sp]) < 1e-9);
      }
  }
}

TEST_CASE("P24Y1 at theta = 0, R to L") {
  const auto c = c_integrals(Family::P24Y1, 0.0, 64);
  CHECK(std::abs(c.I1[0][1]) < 1e-12);
}

TEST_CASE("X3 at theta = 0 leaves R and L untrapped") {
  const auto r = localization_report(Family::X3, 0.0, quick());
  CHECK(r.total_of(Chirality::R) < 1e-8);
  CHECK(r.total_of(Chirality::L) < 1e-8);
  CHECK(r.total_of(Chirality::U) > 0.1);
}

TEST_CASE("reports are consistent") {
  for (Family f : {Family::P34X1, Family::P24Y1, Family::P23Z1, Family::X3}) {
    const auto r = localization_report(f, 0.9, quick());
    for (int s = 0; s < 4; ++s) {
      double sum = 0;
      for (int sp = 0; sp < 4; ++sp) {
        CHECK(r.pair[s][sp] >= 0.0);
        CHECK(r.pair[s][sp] <= 1.0);
        sum += r.pair[s][sp];
      }
      CHECK(std::abs(sum - r.total[s]) < 1e-12);
      CHECK(r.total[s] >= r.pair[s][s]);
    }
    CHECK(r.converged);
  }
}

TEST_CASE("theta symmetry") {
  for (Family f : {Family::P34X1, Family::P24Y1, Family::P23Z1, Family::X3}) {
    const auto a = localization_report(f, 1.3, quick());
    const auto b = localization_report(f, -1.3, quick());
    for (int s = 0; s < 4; ++s) CHECK(std::abs(a.total[s] - b.total[s]) < 1e-6);
  }
}

TEST_CASE("P34X1 totals coincide across initial states") {
  for (double th : {-2.0, 0.4, 1.5}) {
    const auto r = localization_report(Family::P34X1, th, quick());
    for (int s = 1; s < 4; ++s) CHECK(std::abs(r.total[s] - r.total[0]) < 1e-10);
  }
}

TEST_CASE("finite-N values approach the quadrature") {
  const double th = 0.9;
  const Coin C = coin_from_theta(Family::P24Y1, th);
  const auto inf = localization_report(Family::P24Y1, th, quick(256));
  for (Chirality Sp : {Chirality::R, Chirality::L, Chirality::U}) {
    double prev = 1;
    for (int N : {51, 101, 201}) {
      const double d = std::abs(finite_N_pbar(C, Sp, Chirality::R, N) -
                                inf.at(Chirality::R, Sp));
      CHECK(d < prev);
      prev = d;
    }
    CHECK(prev < 0.02);
  }
}

TEST_CASE("theta grids") {
  const auto g = theta_grid(25);
  REQUIRE(g.size() == 25);
  CHECK(g[12] == 0.0);
  CHECK(g.front() > -kPi);
  CHECK(g.back() < kPi);
  for (int i = 0; i < 25; ++i) CHECK(g[i] == -g[24 - i]);
  CHECK(theta_grid(400).size() == 400);
  CHECK_THROWS_AS(theta_grid(1), ValidationError);
}

TEST_CASE("sweeps and the one-eighth check") {
  const auto rows = sweep_theta(Family::X3, 4, quick(32));
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].theta == theta_grid(4)[0]);
  const auto rep = theorem36_check(5, quick(32));
  CHECK(rep.entries.size() == 3 * 5 * 4);
  CHECK(rep.passed());
}

TEST_CASE("convergence flag") {
  QuadratureSpec q = quick(16);
  q.tolerance = 1e-14;
  q.max_M = 16;
  const auto r = localization_report(Family::X3, 1.0, q);
  CHECK_FALSE(r.converged);
  CHECK(r.max_delta > 1e-14);
  const auto v = pbar_infinity_total(Family::X3, 1.0, Chirality::U, q);
  CHECK_FALSE(v.converged);
  CHECK(v.value == doctest::Approx(r.total_of(Chirality::U)));
}

TEST_CASE("refinement near the X3 edge") {
  // The X3 integrand sharpens as |theta| -> pi; M = 512 alone misses the
  // tolerance at the outermost 400-grid point.
  QuadratureSpec q;
  q.max_M = 512;
  const double th = 399 * kPi / 401;
  const auto a = localization_report(Family::X3, th, q);
  CHECK_FALSE(a.converged);
  q.max_M = 2048;
  const auto b = localization_report(Family::X3, th, q);
  CHECK(b.converged);
  CHECK(b.M == 1024);
  CHECK(b.max_delta < 1e-4);
}

TEST_CASE("argument validation") {
  CHECK_THROWS_AS(localization_report(Family::P24Y1, kPi, quick()), ValidationError);
  CHECK_THROWS_AS(localization_report(Family::Y2, 0.1, quick()), ValidationError);
  CHECK_THROWS_AS(localization_report(Family::P24Y1, 0.1, quick(10)), ValidationError);
  CHECK_THROWS_AS(localization_report(Family::P24Y1, 0.1, quick(33)), ValidationError);
}
