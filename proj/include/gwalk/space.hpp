#pragma once

#include "gwalk/coin.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace gwalk {

// Ten permutations spanning the space L of linear sums of 4x4 permutation
// matrices, in the order (12),(23),(24),(34),(123),(124),(234),(12)(34),(13)(24),(14)(23).
const std::array<Permutation4, 10> &perm_basis();
std::array<std::string, 10> basis_names();

// Index groups of the subspaces L1..L5 inside the basis order above.
const std::vector<int> &subspace_indices(int i);

struct LinearSumDecomposition {
  std::array<double, 10> coeffs{};
  double residual = 0.0;  // max-norm of A minus the reconstruction

  double coeff_sum() const;
  Mat4 reconstruct() const;
};

LinearSumDecomposition decompose_linear_sum(const Mat4 &A);

bool h_orthogonal(const PermMatrix &P, const PermMatrix &Q);
std::array<std::array<Permutation4, 4>, 6> six_class_partition();

class ZeroOnePattern {
 public:
  explicit ZeroOnePattern(const Eigen::Matrix4i &entries);  // validates 0/1
  static ZeroOnePattern of(const Mat4 &A, double tol);
  const Eigen::Matrix4i &entries() const { return e_; }

 private:
  Eigen::Matrix4i e_;
};

// No two distinct rows (or columns) have inner product exactly 1.
bool quadrangular(const ZeroOnePattern &M);
bool strongly_quadrangular(const ZeroOnePattern &M);

struct SubspaceMembership {
  std::array<bool, 5> in{};  // in[i-1] <=> L_i component nonzero
  LinearSumDecomposition decomposition;
  std::string form() const;  // e.g. "L1+L2+L5"
};

// Throws NotInL when the decomposition residual exceeds 1e-10.
SubspaceMembership subspace_membership(const Mat4 &A, double threshold = 1e-10);

Mat4 hadamard_matrix();
Mat4 hadamard_conjugate(const Mat4 &A);  // H A H, H symmetric and involutive
// Sign of the (1,1) entry of H A H, or nullopt when it is not +-1 within tol.
std::optional<int> hadamard_row_sum_check(const Mat4 &A, double tol = 1e-10);

enum class CVariant { C1, C2 };

struct CFamilyMember {
  CVariant variant = CVariant::C1;
  double c2 = 0.0;
  int branch = 1;
  double a4 = 0.0;
  Mat4 matrix;
  Eigen::Matrix3d block;  // expected lower-right 3x3 block of H M H
  int corner_sign = 1;    // expected (1,1) entry of H M H
};

// Non-permutative orthogonal matrices in L1+L3+L4. c2 must lie in
// [-1, 1/3] for C1 and [-1/3, 1] for C2.
CFamilyMember theorem217_family(CVariant variant, double c2, int branch = 1);

// Structural kinds used by the subspace spot checks.
enum class Structure { Permutative, DirectSum, HadamardDirectSum, Other };
std::string structure_name(Structure s);

// Row/column blocks of the nonzero pattern, from the bipartite graph.
std::vector<std::pair<std::vector<int>, std::vector<int>>> pattern_components(const Mat4 &A,
                                                                            double tol);
// Nonzero pattern splits into at least two blocks and each block is permutative.
bool is_permutative_direct_sum(const Mat4 &A, double tol);
// Some P A Q or H (P A Q) H equals diag(+-1) + 3x3 permutative block.
bool is_hadamard_direct_sum(const Mat4 &A, double tol);
Structure structure_of(const Mat4 &A, double tol);

struct TwoPermutationReport {
  std::size_t pairs = 0;
  std::size_t nontrivial = 0;  // pairs admitting orthogonal a P + b Q with a b != 0
};

// Orthogonality of a P + b Q reduces to (a^2+b^2) I + a b (P^T Q + Q^T P) = I,
// checked exactly over integers for all ordered pairs of distinct permutations.
TwoPermutationReport two_permutation_exhaustive();

struct SpaceSample {
  std::vector<double> coeffs;
  Mat4 matrix;
  Structure structure = Structure::Other;
};

struct VarietyReport {
  std::string space;
  std::size_t trials = 0;
  std::size_t converged = 0;
  std::array<std::size_t, 4> counts{};  // indexed by Structure
  double max_row_sum_defect = 0.0;       // max ||sum a_i| - 1| over converged points
  std::optional<SpaceSample> first_non_permutative;

  std::size_t count(Structure s) const { return counts[static_cast<int>(s)]; }
};

// Levenberg-Marquardt solves of A^T A = I over span{P_i}, from random starts.
VarietyReport variety_spot_check(const std::string &name, const std::vector<Permutation4> &span,
                                 std::size_t trials, std::uint64_t seed);

// Span of the listed subspaces, e.g. {1,3,4}.
std::vector<Permutation4> subspace_span(const std::vector<int> &which);
std::string subspace_label(const std::vector<int> &which);

}  // namespace gwalk
