#pragma once

#include "gwalk/coin.hpp"

#include <array>
#include <string_view>
#include <vector>

namespace gwalk {

enum class Chirality { R = 1, L = 2, U = 3, D = 4 };

inline int chirality_index(Chirality s) { return static_cast<int>(s); }
Chirality chirality_from_index(int l);  // 1..4
Chirality chirality_from_name(std::string_view name);
char chirality_char(Chirality s);
inline constexpr std::array<Chirality, 4> kChiralities{Chirality::R, Chirality::L, Chirality::U,
                                                      Chirality::D};

// Odd side length N >= 3, coordinates -(N-1)/2 .. (N-1)/2.
class Lattice {
 public:
  explicit Lattice(int N);
  int N() const { return n_; }
  int half() const { return (n_ - 1) / 2; }
  bool contains(int x, int y) const;
  int wrap(int v) const;  // centered representative mod N
  int dim() const { return 4 * n_ * n_; }

 private:
  int n_;
};

// One-based index 4Ny + 4x + l(S) + 2N^2 - 2.
int index_of(Chirality S, int x, int y, int N);

struct SiteIndex {
  Chirality S;
  int x, y;
};
SiteIndex site_of(int index, int N);

struct WalkState {
  int N = 3;
  Eigen::VectorXcd amp;  // zero-based storage of the one-based index

  cplx &at(Chirality S, int x, int y) { return amp(index_of(S, x, y, N) - 1); }
  cplx at(Chirality S, int x, int y) const { return amp(index_of(S, x, y, N) - 1); }
  double norm() const { return amp.norm(); }
};

WalkState initial_state(int N, Chirality S);

// Coin then shift. R pulls from x-1, L from x+1, U from y-1, D from y+1.
class Walker {
 public:
  explicit Walker(const Mat4 &coin);
  explicit Walker(const Coin &coin);  // imaginary parts must vanish
  const Mat4 &coin() const { return c_; }
  // Set when the coin is not orthogonal to 1e-10; norms may then drift.
  bool coin_warning() const { return warn_; }

  WalkState step(const WalkState &s) const;
  WalkState evolve(WalkState s, long t) const;

 private:
  Mat4 c_;
  bool warn_ = false;
};

WalkState step(const WalkState &s, const Mat4 &C);
WalkState evolve(const WalkState &s, const Mat4 &C, long t);

double probability_at(const WalkState &s, int x, int y);
std::array<double, 4> component_probabilities(const WalkState &s, int x, int y);

// (1/T) sum_{t<T} of |alpha_{S',x,y,t}|^2 for each S', starting from |S> at the origin.
std::array<double, 4> time_averaged_components(const Mat4 &C, int N, Chirality S, int x, int y,
                                               long T);
double time_averaged_probability(const Mat4 &C, int N, Chirality S, int x, int y, long T);

// Cyclic translation of every amplitude by (a, b).
WalkState translate(const WalkState &s, int a, int b);

}  // namespace gwalk
