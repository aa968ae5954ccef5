#pragma once

#include "gwalk/coin.hpp"
#include "gwalk/walk.hpp"

#include <array>
#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

namespace gwalk {

struct EigenPair {
  cplx lambda;
  Vec4c v;  // unit 2-norm
};
using EigenSet = std::array<EigenPair, 4>;

// D_{n,m} = diag(w^-n, w^n, w^-m, w^m) written with the angles zn = 2 pi n / N, zm = 2 pi m / N.
Mat4c d_matrix(double zn, double zm);
Mat4c walk_block(const Mat4 &C, double zn, double zm);

// X3 eigen-angle: cos(eta) = ((1+cos t) cos zn + (1-cos t) cos zm) / 2.
double eigen_angle(double theta, double zn, double zm);

// Ordered (-1, +1, e^{-i a}, e^{+i a}), a in [0, pi].
std::array<cplx, 4> closed_form_eigenvalues(Family family, double theta, double zn, double zm);

// Closed-form eigenvector for one of the closed-form eigenvalues; nullopt when a
// denominator is below 1e-8 or the result fails its residual check.
std::optional<Vec4c> closed_form_vector(Family family, double theta, double zn, double zm,
                                        cplx lambda);
// Same, with the family coin matrix C already built (hot loops).
std::optional<Vec4c> closed_form_vector(Family family, double theta, const Mat4 &C, double zn,
                                        double zm, cplx lambda);
// Generic-position variant taking sin/cos of theta and the phases e^{i zn},
// e^{i zm} directly; never uses the m = 0 branch.
std::optional<Vec4c> closed_form_vector_phases(Family family, double sin_t, double cos_t,
                                               const Mat4 &C, cplx wn, cplx wm, cplx lambda);
// All four pairs; nullopt if any vector is singular or the set is not orthonormal.
std::optional<EigenSet> closed_form_eigs(Family family, double theta, double zn, double zm);

// Dense eigensolve of a unitary 4x4 block. Degenerate eigenspaces get a
// Gram-Schmidt basis of projector images of e1..e4; every vector has its first
// non-negligible component real and positive. When labels are given the pairs
// are ordered to match them, otherwise by ascending argument in (-pi, pi].
EigenSet numeric_eigs(const Mat4c &U, const std::optional<std::array<cplx, 4>> &labels = {});

// Closed form when the coin carries a supported family and theta, else numeric.
EigenSet block_eigs(const Coin &C, double zn, double zm, bool *numeric = nullptr);

struct SpectralBlock {
  int n = 0, m = 0, N = 3;
  cplx omega;
  double zeta_n = 0, zeta_m = 0;
  Mat4c matrix;
  EigenSet pairs;
  bool numeric = false;  // closed form unavailable or singular here
};

SpectralBlock build_block(const Coin &C, int n, int m, int N);

struct DegeneracyClass {
  std::pair<int, int> representative;
  std::vector<std::pair<int, int>> members;
};

// Representatives 0 <= n <= m <= (N-1)/2 in the order (0,0), (n,0), (n,n), (n<m).
std::vector<std::pair<int, int>> class_representatives(int N);
DegeneracyClass omega_class(int n, int m, int N);

// Sum over the class of v_{S'} conj(v_S) for unit eigenvectors of index k (1..4).
cplx c_coefficient(const Coin &C, Chirality Sp, Chirality S, int n, int m, int k, int N);

// Closed-form P24Y1 values of c for k = 1, 2 on a full (8-member) class with
// momenta (x, y).
double c_table_p24y1(double theta, Chirality Sp, Chirality S, int k, double x, double y);

// Exact T -> infinity average of |alpha_{S',0,0,t}|^2 from |S> at the origin,
// summed per cluster of equal eigenvalues over all N^2 blocks. Indexed by S'.
std::array<double, 4> finite_N_pbar(const Coin &C, Chirality S, int N);
double finite_N_pbar(const Coin &C, Chirality Sp, Chirality S, int N);
// Class-by-class bracket: |C1|^2 + |C2|^2 plus the k = 3, 4 class terms. Only
// for the three Grover families, whose classes share one spectrum; X3 blocks
// (n, m) and (m, n) differ.
std::array<double, 4> finite_N_pbar_classwise(const Coin &C, Chirality S, int N);

// Columns eta_{n,m,k} = v_{n,m,k} w^{nx+my} / N in walk-state indexing, ordered
// by (n, m, k) with n slowest.
Eigen::MatrixXcd eta_matrix(const Coin &C, int N);
Eigen::VectorXcd eta_vector(const SpectralBlock &b, int k);
WalkState spectral_evolve(const Coin &C, const WalkState &psi0, long t);

void write_spectrum_csv(std::ostream &os, const Coin &C, int N);
void write_coefficient_csv(std::ostream &os, const Coin &C, int N);

}  // namespace gwalk
