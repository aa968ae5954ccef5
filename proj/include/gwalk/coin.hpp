#pragma once

#include "gwalk/types.hpp"

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gwalk {

// Element of S4 stored as the images of 1..4 (one-based, as written by hand).
class Permutation4 {
 public:
  Permutation4();  // identity
  explicit Permutation4(const std::array<int, 4> &mapping);

  // Accepts cycle notation such as "(12)(34)", "(1324)" or "id".
  static Permutation4 from_cycles(std::string_view text);

  int operator()(int i) const { return map_[i - 1]; }
  const std::array<int, 4> &mapping() const { return map_; }
  Permutation4 inverse() const;
  std::string cycles() const;  // "id" for the identity

  friend bool operator==(const Permutation4 &, const Permutation4 &) = default;
  friend auto operator<=>(const Permutation4 &, const Permutation4 &) = default;

 private:
  std::array<int, 4> map_;
};

// (0,1) matrix with p_ij = 1 iff pi(i) = j.
class PermMatrix {
 public:
  explicit PermMatrix(const Eigen::Matrix4i &entries);  // validates
  const Eigen::Matrix4i &entries() const { return e_; }
  Permutation4 permutation() const;
  Mat4 real() const { return e_.cast<double>(); }
  Mat4c complex() const { return e_.cast<cplx>(); }

 private:
  Eigen::Matrix4i e_;
};

PermMatrix perm_matrix(const Permutation4 &pi);
Mat4 perm_real(std::string_view cycles);

// All 24 elements in lexicographic order of their image tuples.
std::vector<Permutation4> all_permutations();
// The six elements fixing 1, lexicographic.
std::vector<Permutation4> one_plus_p3();

enum class Letter { X, Y, Z };
enum class BlockKind { M, N };

enum class Family {
  P34X1, P24Y1, P23Z1,
  X1, X2, X3, X4,
  Y1, Y2, Y3, Y4,
  Z1, Z2, Z3, Z4,
  RAW,
};

std::string family_name(Family f);
Family family_from_name(std::string_view name);  // case-insensitive
bool is_theta_family(Family f);                  // P34X1, P24Y1, P23Z1, X3

// Subfamily index k: 1 = M+, 2 = M-, 3 = N+, 4 = N-.
inline BlockKind kind_of(int k) { return k <= 2 ? BlockKind::M : BlockKind::N; }
inline int sign_of(int k) { return (k % 2 == 1) ? 1 : -1; }
inline int subfamily_index(BlockKind kind, int sign) {
  return (kind == BlockKind::M ? 1 : 3) + (sign > 0 ? 0 : 1);
}

// A set  left * conj * {M or N block} * conj  with conj = I, P(23), P(24)
// for the letters X, Y, Z.
struct FamilyForm {
  Letter letter = Letter::X;
  int k = 1;
  Permutation4 left;

  std::string name() const;  // e.g. "P34X3", "Y1"
  static FamilyForm parse(std::string_view text);
  friend bool operator==(const FamilyForm &, const FamilyForm &) = default;
};

Permutation4 conjugator_of(Letter letter);

// Block matrices: a is the A-block parameter, b is the B-block parameter and
// the defining constraint is a^2 + b^2 - s*b = 0.
Mat4c block_matrix(BlockKind kind, int s, cplx a, cplx b);
Mat4c form_member(const FamilyForm &form, cplx a, cplx b);
// Point of the variety parametrised by an angle: a = sin(phi)/2,
// b = s(1 + cos(phi))/2. Complex phi reaches complex members.
Mat4c form_member_angle(const FamilyForm &form, cplx phi);

struct Coin {
  Mat4c entries = Mat4c::Identity();
  Family family = Family::RAW;
  std::optional<double> theta;
  std::optional<mpq_class> r;
  bool degenerate = false;  // theta = +-pi
};

Coin raw_coin(const Mat4 &m);
Coin raw_coin(const Mat4c &m);

// Rows are [x, xP, xQ, xR].
Coin build_permutative(const std::array<cplx, 4> &x_row, const PermMatrix &P,
                       const PermMatrix &Q, const PermMatrix &R);

FamilyForm theta_family_form(Family f);
Coin coin_from_theta(Family family, double theta);
Mat4 grover_matrix();

struct RationalCoin {
  std::array<std::array<mpq_class, 4>, 4> entries;
  Family family = Family::RAW;
  mpq_class r;
  int branch = 1;
  mpq_class a, b;  // block parameters

  Coin to_coin() const;
  bool exactly_orthogonal() const;  // A^T A == I with zero residual
};

// a = (r^2-1)/(2(r^2+1)), b = s/2 + branch * r/(r^2+1).
RationalCoin coin_rational(Letter letter, BlockKind kind, int sign, const mpq_class &r,
                           int branch = 1);
// Same, with letter/kind/sign and the left multiplier read from a family tag.
RationalCoin coin_rational(Family family, const mpq_class &r, int branch = 1);

bool is_orthogonal(const Mat4c &A, double tol);
bool is_orthogonal(const Mat4 &A, double tol);
bool is_permutative(const Mat4c &A, double tol);
bool is_permutative(const Mat4 &A, double tol);

struct FamilyWitness {
  Family family = Family::X1;  // subfamily tag X1..Z4
  FamilyForm form;
  Permutation4 conjugator;
  BlockKind kind = BlockKind::M;
  int sign = 1;
  cplx a, b;  // A-block and B-block parameters
  bool real_params = true;
  bool corner = false;  // parameters in {0, +-1/2, +-1}

  Mat4c reconstruct() const { return form_member(form, a, b); }
  double constraint_residual() const;
};

// Forms in classification order: X < Y < Z, M < N, + < -, left in lex order.
const std::vector<FamilyForm> &classification_forms();

std::optional<FamilyWitness> match_form(const Mat4c &A, const FamilyForm &form, double tol);
FamilyWitness classify(const Mat4c &A, double tol = kUserTol);
FamilyWitness classify(const Coin &c);

struct ChainSpec {
  std::string id;
  std::vector<FamilyForm> forms;
};

// Every distinct chain member listed in the group-chain theorem, for all
// letters and j = 1..4.
std::vector<ChainSpec> theorem_chains();
ChainSpec chain_from_id(std::string_view id);  // '+'-joined form names
bool in_chain(const Mat4c &A, const ChainSpec &chain, double tol);

struct ClosureReport {
  std::string id;
  std::size_t samples = 0;
  std::size_t products_in = 0;
  std::size_t transposes_in = 0;
  double fraction() const {
    return samples == 0 ? 1.0
                        : double(products_in + transposes_in) / double(2 * samples);
  }
};

ClosureReport group_product_closure_sample(std::string_view chain_id, std::size_t count,
                                           std::uint64_t seed);

}  // namespace gwalk
