#include "gwalk/walk.hpp"
#include "helpers.hpp"

#include <doctest.h>

#include <random>

using namespace gwalk;

TEST_CASE("index formula and its inverse") {
  CHECK(index_of(Chirality::R, -2, -2, 5) == 1);
  CHECK(index_of(Chirality::D, 2, 2, 5) == 100);
  CHECK(index_of(Chirality::U, 0, 0, 5) == 51);
  for (int N : {3, 5, 7}) {
    for (int i = 1; i <= 4 * N * N; ++i) {
      const auto s = site_of(i, N);
      CHECK(index_of(s.S, s.x, s.y, N) == i);
    }
  }
  CHECK_THROWS_AS(index_of(Chirality::R, 3, 0, 5), ValidationError);
  CHECK_THROWS_AS(site_of(0, 5), ValidationError);
  CHECK_THROWS_AS(Lattice(4), ValidationError);
  CHECK_THROWS_AS(Lattice(1), ValidationError);
}

TEST_CASE("initial states") {
  const auto r = initial_state(5, Chirality::R);
  CHECK(r.amp(49 - 1) == cplx(1));
  CHECK(r.norm() == doctest::Approx(1.0));
  const auto d = initial_state(5, Chirality::D);
  CHECK(d.amp(52 - 1) == cplx(1));
  CHECK(d.at(Chirality::D, 0, 0) == cplx(1));
}

TEST_CASE("identity coin translates") {
  const Walker w(Mat4(Mat4::Identity()));
  auto s = w.step(initial_state(5, Chirality::R));
  CHECK(s.at(Chirality::R, 1, 0) == cplx(1));
  const auto start = initial_state(7, Chirality::U);
  CHECK(testutil::maxdiff(w.evolve(start, 7).amp, start.amp) == 0.0);
  CHECK(testutil::maxdiff(w.evolve(start, 3).amp, start.amp) > 0.5);
}

TEST_CASE("one Grover step from R") {
  const auto s = step(initial_state(5, Chirality::R), grover_matrix());
  CHECK(s.at(Chirality::R, 1, 0) == cplx(-0.5));
  CHECK(s.at(Chirality::L, -1, 0) == cplx(0.5));
  CHECK(s.at(Chirality::U, 0, 1) == cplx(0.5));
  CHECK(s.at(Chirality::D, 0, -1) == cplx(0.5));
  CHECK(probability_at(s, 0, 0) == 0.0);
  for (auto [x, y] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}})
    CHECK(probability_at(s, x, y) == doctest::Approx(0.25));
}

TEST_CASE("periodic wraparound at the lattice edge") {
  WalkState s = initial_state(5, Chirality::R);
  s.amp.setZero();
  s.at(Chirality::R, 2, 0) = 1.0;
  s.at(Chirality::D, 1, -2) = 1.0;
  const auto t = step(s, Mat4(Mat4::Identity()));
  CHECK(t.at(Chirality::R, -2, 0) == cplx(1));
  CHECK(t.at(Chirality::D, 1, 2) == cplx(1));
}

TEST_CASE("unitarity for family coins") {
  for (Family f : {Family::P34X1, Family::P24Y1, Family::P23Z1, Family::X3}) {
    const Walker w(coin_from_theta(f, 0.37));
    CHECK_FALSE(w.coin_warning());
    for (int N : {3, 5, 9}) {
      auto s = initial_state(N, Chirality::L);
      s = w.evolve(s, 1000);
      CHECK(std::abs(s.norm() - 1.0) < 1e-10);
      double total = 0;
      const Lattice lat(N);
      for (int y = -lat.half(); y <= lat.half(); ++y)
        for (int x = -lat.half(); x <= lat.half(); ++x) total += probability_at(s, x, y);
      CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
    }
  }
}

TEST_CASE("non-orthogonal coins raise the warning") {
  Mat4 c = grover_matrix();
  c(0, 0) += 0.01;
  CHECK(Walker(c).coin_warning());
  Coin z = coin_from_theta(Family::X3, 0.2);
  z.entries(1, 1) += cplx(0, 1e-3);
  CHECK_THROWS_AS(Walker{z}, ValidationError);
}

TEST_CASE("translation covariance") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  const Walker w(coin_from_theta(Family::P24Y1, -0.9));
  WalkState s;
  s.N = 7;
  s.amp.resize(4 * 49);
  for (auto &a : s.amp) a = cplx(g(rng), g(rng));
  s.amp /= s.amp.norm();
  for (auto [a, b] : {std::pair{1, 0}, {-3, 2}, {6, 6}}) {
    const auto lhs = w.evolve(translate(s, a, b), 5);
    const auto rhs = translate(w.evolve(s, 5), a, b);
    CHECK(testutil::maxdiff(lhs.amp, rhs.amp) < 1e-12);
  }
}

TEST_CASE("time averages") {
  const Mat4 G = grover_matrix();
  CHECK(time_averaged_probability(G, 5, Chirality::R, 0, 0, 1) == 1.0);
  // The identity coin visits the origin once every N steps.
  CHECK(time_averaged_probability(Mat4::Identity(), 5, Chirality::D, 0, 0, 50) ==
        doctest::Approx(0.2));
  const auto comp = time_averaged_components(G, 5, Chirality::R, 0, 0, 40);
  CHECK(comp[0] + comp[1] + comp[2] + comp[3] ==
        doctest::Approx(time_averaged_probability(G, 5, Chirality::R, 0, 0, 40)));
  CHECK_THROWS_AS(time_averaged_probability(G, 5, Chirality::R, 0, 0, 0), ValidationError);
}

TEST_CASE("chirality names") {
  CHECK(chirality_from_name("u") == Chirality::U);
  CHECK(chirality_char(Chirality::L) == 'L');
  CHECK_THROWS_AS(chirality_from_name("Q"), ValidationError);
  CHECK_THROWS_AS(chirality_from_index(5), ValidationError);
}
