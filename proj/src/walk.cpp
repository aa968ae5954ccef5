#include "gwalk/walk.hpp"

#include <cctype>

namespace gwalk {

Chirality chirality_from_index(int l) {
  if (l < 1 || l > 4) throw ValidationError("chirality index must be 1..4");
  return static_cast<Chirality>(l);
}

Chirality chirality_from_name(std::string_view name) {
  if (name.size() == 1) {
    switch (std::toupper(static_cast<unsigned char>(name[0]))) {
      case 'R': return Chirality::R;
      case 'L': return Chirality::L;
      case 'U': return Chirality::U;
      case 'D': return Chirality::D;
      default: break;
    }
  }
  throw ValidationError("chirality must be one of R, L, U, D");
}

char chirality_char(Chirality s) { return "RLUD"[chirality_index(s) - 1]; }

Lattice::Lattice(int N) : n_(N) {
  if (N < 3 || N % 2 == 0) throw ValidationError("N must be an odd integer >= 3");
}

bool Lattice::contains(int x, int y) const {
  return x >= -half() && x <= half() && y >= -half() && y <= half();
}

int Lattice::wrap(int v) const {
  int r = (v + half()) % n_;
  if (r < 0) r += n_;
  return r - half();
}

int index_of(Chirality S, int x, int y, int N) {
  const Lattice lat(N);
  if (!lat.contains(x, y)) throw ValidationError("coordinates outside Z_N");
  return 4 * N * y + 4 * x + chirality_index(S) + 2 * N * N - 2;
}

SiteIndex site_of(int index, int N) {
  const Lattice lat(N);
  if (index < 1 || index > lat.dim()) throw ValidationError("index outside 1..4N^2");
  const int z = index - 1;
  const int l = z % 4 + 1;
  const int x = (z / 4) % N - lat.half();
  const int y = z / (4 * N) - lat.half();
  return SiteIndex{chirality_from_index(l), x, y};
}

WalkState initial_state(int N, Chirality S) {
  const Lattice lat(N);
  WalkState s;
  s.N = N;
  s.amp = Eigen::VectorXcd::Zero(lat.dim());
  s.amp(chirality_index(S) + 2 * N * N - 3) = 1.0;
  return s;
}

Walker::Walker(const Mat4 &coin) : c_(coin), warn_(!is_orthogonal(coin, 1e-10)) {}

Walker::Walker(const Coin &coin) : Walker(Mat4(coin.entries.real())) {
  if (coin.entries.imag().cwiseAbs().maxCoeff() > 0.0)
    throw ValidationError("walks are driven by real coins only");
}

WalkState Walker::step(const WalkState &s) const {
  const int N = s.N;
  const int sites = N * N;
  // Columns are sites in storage order, rows the four chiralities.
  Eigen::Map<const Eigen::Matrix<cplx, 4, Eigen::Dynamic>> in(s.amp.data(), 4, sites);
  const Eigen::Matrix<cplx, 4, Eigen::Dynamic> mixed = c_.cast<cplx>() * in;
  WalkState out;
  out.N = N;
  out.amp.resize(4 * sites);
  Eigen::Map<Eigen::Matrix<cplx, 4, Eigen::Dynamic>> o(out.amp.data(), 4, sites);
  for (int Y = 0; Y < N; ++Y) {
    const int ym = (Y + N - 1) % N, yp = (Y + 1) % N;
    for (int X = 0; X < N; ++X) {
      const int xm = (X + N - 1) % N, xp = (X + 1) % N;
      const int site = Y * N + X;
      o(0, site) = mixed(0, Y * N + xm);
      o(1, site) = mixed(1, Y * N + xp);
      o(2, site) = mixed(2, ym * N + X);
      o(3, site) = mixed(3, yp * N + X);
    }
  }
  return out;
}

WalkState Walker::evolve(WalkState s, long t) const {
  for (long i = 0; i < t; ++i) s = step(s);
  return s;
}

WalkState step(const WalkState &s, const Mat4 &C) { return Walker(C).step(s); }

WalkState evolve(const WalkState &s, const Mat4 &C, long t) { return Walker(C).evolve(s, t); }

std::array<double, 4> component_probabilities(const WalkState &s, int x, int y) {
  std::array<double, 4> p{};
  for (Chirality S : kChiralities) p[chirality_index(S) - 1] = std::norm(s.at(S, x, y));
  return p;
}

double probability_at(const WalkState &s, int x, int y) {
  const auto p = component_probabilities(s, x, y);
  return p[0] + p[1] + p[2] + p[3];
}

std::array<double, 4> time_averaged_components(const Mat4 &C, int N, Chirality S, int x, int y,
                                               long T) {
  if (T < 1) throw ValidationError("T must be >= 1");
  const Walker w(C);
  WalkState s = initial_state(N, S);
  std::array<double, 4> acc{};
  for (long t = 0; t < T; ++t) {
    const auto p = component_probabilities(s, x, y);
    for (int k = 0; k < 4; ++k) acc[k] += p[k];
    if (t + 1 < T) s = w.step(s);
  }
  for (double &a : acc) a /= static_cast<double>(T);
  return acc;
}

double time_averaged_probability(const Mat4 &C, int N, Chirality S, int x, int y, long T) {
  const auto p = time_averaged_components(C, N, S, x, y, T);
  return p[0] + p[1] + p[2] + p[3];
}

WalkState translate(const WalkState &s, int a, int b) {
  const Lattice lat(s.N);
  WalkState out = s;
  for (int y = -lat.half(); y <= lat.half(); ++y)
    for (int x = -lat.half(); x <= lat.half(); ++x)
      for (Chirality S : kChiralities) out.at(S, lat.wrap(x + a), lat.wrap(y + b)) = s.at(S, x, y);
  return out;
}

}  // namespace gwalk
