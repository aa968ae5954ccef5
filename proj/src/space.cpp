#include "gwalk/space.hpp"

#include <unsupported/Eigen/NonLinearOptimization>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace gwalk {

// ---------------------------------------------------------------- basis

const std::array<Permutation4, 10> &perm_basis() {
  static const std::array<Permutation4, 10> b = [] {
    const char *names[10] = {"(12)",  "(23)",  "(24)",     "(34)",     "(123)",
                             "(124)", "(234)", "(12)(34)", "(13)(24)", "(14)(23)"};
    std::array<Permutation4, 10> out;
    for (int i = 0; i < 10; ++i) out[i] = Permutation4::from_cycles(names[i]);
    return out;
  }();
  return b;
}

std::array<std::string, 10> basis_names() {
  std::array<std::string, 10> out;
  for (int i = 0; i < 10; ++i) out[i] = perm_basis()[i].cycles();
  return out;
}

const std::vector<int> &subspace_indices(int i) {
  static const std::array<std::vector<int>, 5> groups = {
      std::vector<int>{0, 3, 8, 9}, std::vector<int>{2, 7}, std::vector<int>{5, 6},
      std::vector<int>{4}, std::vector<int>{1}};
  if (i < 1 || i > 5) throw ValidationError("subspace index must be 1..5");
  return groups[i - 1];
}

namespace {

using BasisMat = Eigen::Matrix<double, 16, 10>;

const BasisMat &basis_columns() {
  static const BasisMat m = [] {
    BasisMat out;
    for (int k = 0; k < 10; ++k) {
      Mat4 P = perm_matrix(perm_basis()[k]).real();
      out.col(k) = Eigen::Map<const Eigen::Matrix<double, 16, 1>>(P.data());
    }
    return out;
  }();
  return m;
}

}  // namespace

double LinearSumDecomposition::coeff_sum() const {
  return std::accumulate(coeffs.begin(), coeffs.end(), 0.0);
}

Mat4 LinearSumDecomposition::reconstruct() const {
  Mat4 out = Mat4::Zero();
  for (int k = 0; k < 10; ++k) out += coeffs[k] * perm_matrix(perm_basis()[k]).real();
  return out;
}

LinearSumDecomposition decompose_linear_sum(const Mat4 &A) {
  static const Eigen::LDLT<Eigen::Matrix<double, 10, 10>> normal(
      basis_columns().transpose() * basis_columns());
  const Eigen::Matrix<double, 16, 1> v = Eigen::Map<const Eigen::Matrix<double, 16, 1>>(A.data());
  const Eigen::Matrix<double, 10, 1> c = normal.solve(basis_columns().transpose() * v);
  LinearSumDecomposition d;
  for (int k = 0; k < 10; ++k) d.coeffs[k] = c(k);
  d.residual = (basis_columns() * c - v).cwiseAbs().maxCoeff();
  return d;
}

// ---------------------------------------------------------------- supports

bool h_orthogonal(const PermMatrix &P, const PermMatrix &Q) {
  return P.entries().cwiseProduct(Q.entries()).isZero();
}

std::array<std::array<Permutation4, 4>, 6> six_class_partition() {
  const char *cls[6][4] = {{"id", "(12)(34)", "(13)(24)", "(14)(23)"},
                           {"(23)", "(124)", "(1342)", "(143)"},
                           {"(24)", "(123)", "(134)", "(1432)"},
                           {"(34)", "(12)", "(1324)", "(1423)"},
                           {"(14)", "(1243)", "(132)", "(234)"},
                           {"(13)", "(1234)", "(142)", "(243)"}};
  std::array<std::array<Permutation4, 4>, 6> out;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 4; ++j) out[i][j] = Permutation4::from_cycles(cls[i][j]);
  return out;
}

ZeroOnePattern::ZeroOnePattern(const Eigen::Matrix4i &entries) : e_(entries) {
  for (int i = 0; i < 16; ++i)
    if (e_(i) != 0 && e_(i) != 1) throw ValidationError("pattern entries must be 0 or 1");
}

ZeroOnePattern ZeroOnePattern::of(const Mat4 &A, double tol) {
  Eigen::Matrix4i e = (A.array().abs() > tol).cast<int>();
  return ZeroOnePattern(e);
}

namespace {

// Row version; the column test runs on the transpose.
bool row_strongly_quadrangular(const Eigen::Matrix4i &M) {
  const Eigen::Matrix4i G = M * M.transpose();
  for (int mask = 1; mask < 16; ++mask) {
    std::vector<int> rows;
    for (int i = 0; i < 4; ++i)
      if (mask & (1 << i)) rows.push_back(i);
    if (rows.size() < 2) continue;
    bool linked = true;
    for (int i : rows) {
      bool has = false;
      for (int j : rows)
        if (j != i && G(i, j) > 0) has = true;
      linked = linked && has;
    }
    if (!linked) continue;
    int heavy = 0;
    for (int c = 0; c < 4; ++c) {
      int ones = 0;
      for (int i : rows) ones += M(i, c);
      if (ones >= 2) ++heavy;
    }
    if (heavy < static_cast<int>(rows.size())) return false;
  }
  return true;
}

}  // namespace

bool quadrangular(const ZeroOnePattern &M) {
  const Eigen::Matrix4i R = M.entries() * M.entries().transpose();
  const Eigen::Matrix4i C = M.entries().transpose() * M.entries();
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (i != j && (R(i, j) == 1 || C(i, j) == 1)) return false;
  return true;
}

bool strongly_quadrangular(const ZeroOnePattern &M) {
  return row_strongly_quadrangular(M.entries()) &&
         row_strongly_quadrangular(M.entries().transpose());
}

std::string SubspaceMembership::form() const {
  std::string out;
  for (int i = 0; i < 5; ++i) {
    if (!in[i]) continue;
    if (!out.empty()) out += '+';
    out += "L" + std::to_string(i + 1);
  }
  return out.empty() ? "0" : out;
}

SubspaceMembership subspace_membership(const Mat4 &A, double threshold) {
  SubspaceMembership m;
  m.decomposition = decompose_linear_sum(A);
  if (m.decomposition.residual > 1e-10)
    throw NotInL("matrix is not a linear sum of permutation matrices");
  for (int i = 1; i <= 5; ++i)
    for (int k : subspace_indices(i))
      if (std::abs(m.decomposition.coeffs[k]) > threshold) m.in[i - 1] = true;
  return m;
}

// ---------------------------------------------------------------- Hadamard

Mat4 hadamard_matrix() {
  Mat4 H;
  H << 1, 1, 1, 1, 1, -1, 1, -1, 1, 1, -1, -1, 1, -1, -1, 1;
  return 0.5 * H;
}

Mat4 hadamard_conjugate(const Mat4 &A) {
  const Mat4 H = hadamard_matrix();
  return H * A * H;
}

std::optional<int> hadamard_row_sum_check(const Mat4 &A, double tol) {
  const double c = hadamard_conjugate(A)(0, 0);
  if (std::abs(c - 1.0) <= tol) return 1;
  if (std::abs(c + 1.0) <= tol) return -1;
  return std::nullopt;
}

CFamilyMember theorem217_family(CVariant variant, double c2, int branch) {
  if (branch != 1 && branch != -1) throw ValidationError("branch must be +1 or -1");
  const bool one = variant == CVariant::C1;
  const double lo = one ? -1.0 : -1.0 / 3.0, hi = one ? 1.0 / 3.0 : 1.0;
  if (!(c2 >= lo - 1e-15 && c2 <= hi + 1e-15))
    throw ValidationError("c2 outside the admissible interval");
  const double disc = one ? (1 - 3 * c2) * (1 + c2) : (1 + 3 * c2) * (1 - c2);
  CFamilyMember out;
  out.variant = variant;
  out.c2 = c2;
  out.branch = branch;
  out.a4 = -0.5 * c2 + 0.5 * branch * std::sqrt(std::max(0.0, disc));
  // C2 is C1 with the half-entries negated.
  const double h = one ? 0.5 : -0.5, a = out.a4;
  out.matrix << -h, h, h, h,
                h, h + c2, -a - c2, a,
                h, -a - c2, a, h + c2,
                h, a, h + c2, -a - c2;
  out.block << -h + a, -h - a - c2, c2,
               -h - a - c2, c2, -h + a,
               c2, -h + a, -h - a - c2;
  out.corner_sign = one ? 1 : -1;
  return out;
}

// ---------------------------------------------------------------- structure

std::string structure_name(Structure s) {
  switch (s) {
    case Structure::Permutative: return "permutative";
    case Structure::DirectSum: return "direct-sum";
    case Structure::HadamardDirectSum: return "hadamard-direct-sum";
    case Structure::Other: break;
  }
  return "other";
}

std::vector<std::pair<std::vector<int>, std::vector<int>>> pattern_components(const Mat4 &A,
                                                                            double tol) {
  // Nodes 0..3 are rows, 4..7 columns.
  std::array<int, 8> parent;
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (std::abs(A(i, j)) > tol) parent[find(i)] = find(4 + j);
  std::vector<std::pair<std::vector<int>, std::vector<int>>> out;
  std::vector<int> roots;
  for (int v = 0; v < 8; ++v) {
    int r = find(v);
    auto it = std::find(roots.begin(), roots.end(), r);
    std::size_t idx = static_cast<std::size_t>(it - roots.begin());
    if (it == roots.end()) {
      roots.push_back(r);
      out.emplace_back();
    }
    (v < 4 ? out[idx].first : out[idx].second).push_back(v % 4);
  }
  return out;
}

namespace {

bool rows_permutative(const Eigen::MatrixXd &B, double tol) {
  if (B.rows() <= 1) return true;
  std::vector<double> first(B.cols());
  for (Eigen::Index j = 0; j < B.cols(); ++j) first[j] = B(0, j);
  std::sort(first.begin(), first.end());
  for (Eigen::Index i = 1; i < B.rows(); ++i) {
    std::vector<double> row(B.cols());
    for (Eigen::Index j = 0; j < B.cols(); ++j) row[j] = B(i, j);
    std::sort(row.begin(), row.end());
    for (Eigen::Index j = 0; j < B.cols(); ++j)
      if (std::abs(row[j] - first[j]) > tol) return false;
  }
  return true;
}

// diag(+-1) then a permutative 3x3 block.
bool one_plus_three(const Mat4 &B, double tol) {
  if (std::abs(std::abs(B(0, 0)) - 1.0) > tol) return false;
  for (int k = 1; k < 4; ++k)
    if (std::abs(B(0, k)) > tol || std::abs(B(k, 0)) > tol) return false;
  return rows_permutative(B.bottomRightCorner<3, 3>(), tol);
}

}  // namespace

bool is_permutative_direct_sum(const Mat4 &A, double tol) {
  const auto comps = pattern_components(A, tol);
  if (comps.size() < 2) return false;
  for (const auto &[rows, cols] : comps) {
    if (rows.size() != cols.size()) return false;
    Eigen::MatrixXd B(rows.size(), cols.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t j = 0; j < cols.size(); ++j) B(i, j) = A(rows[i], cols[j]);
    if (!rows_permutative(B, tol)) return false;
  }
  return true;
}

bool is_hadamard_direct_sum(const Mat4 &A, double tol) {
  static const std::vector<Mat4> perms = [] {
    std::vector<Mat4> out;
    for (const auto &p : all_permutations()) out.push_back(perm_matrix(p).real());
    return out;
  }();
  for (const auto &P : perms)
    for (const auto &Q : perms) {
      const Mat4 B = P * A * Q;
      if (one_plus_three(B, tol) || one_plus_three(hadamard_conjugate(B), tol)) return true;
    }
  return false;
}

Structure structure_of(const Mat4 &A, double tol) {
  if (is_permutative(A, tol)) return Structure::Permutative;
  if (is_permutative_direct_sum(A, tol)) return Structure::DirectSum;
  if (is_hadamard_direct_sum(A, tol)) return Structure::HadamardDirectSum;
  return Structure::Other;
}

// ---------------------------------------------------------------- two permutations

TwoPermutationReport two_permutation_exhaustive() {
  TwoPermutationReport rep;
  const auto perms = all_permutations();
  for (const auto &p : perms)
    for (const auto &q : perms) {
      if (p == q) continue;
      ++rep.pairs;
      const Eigen::Matrix4i P = perm_matrix(p).entries(), Q = perm_matrix(q).entries();
      const Eigen::Matrix4i K = P.transpose() * Q + Q.transpose() * P;
      // Off-diagonal entries of K multiply a*b alone; a nonzero one forces a*b = 0.
      bool forces = false;
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
          if (i != j && K(i, j) != 0) forces = true;
      // With a*b = 0 the diagonal equations read a^2 + b^2 = 1: only (+-1, 0), (0, +-1).
      if (!forces) ++rep.nontrivial;
    }
  return rep;
}

// ---------------------------------------------------------------- variety search

namespace {

struct OrthoResidual {
  using Scalar = double;
  using InputType = Eigen::VectorXd;
  using ValueType = Eigen::VectorXd;
  using JacobianType = Eigen::MatrixXd;

  std::vector<Mat4> basis;

  int inputs() const { return static_cast<int>(basis.size()); }
  int values() const { return 10; }

  Mat4 assemble(const Eigen::VectorXd &c) const {
    Mat4 A = Mat4::Zero();
    for (std::size_t k = 0; k < basis.size(); ++k) A += c(k) * basis[k];
    return A;
  }

  int operator()(const Eigen::VectorXd &c, Eigen::VectorXd &f) const {
    const Mat4 A = assemble(c);
    const Mat4 R = A.transpose() * A - Mat4::Identity();
    int r = 0;
    for (int i = 0; i < 4; ++i)
      for (int j = i; j < 4; ++j) f(r++) = R(i, j);
    return 0;
  }

  int df(const Eigen::VectorXd &c, Eigen::MatrixXd &J) const {
    const Mat4 A = assemble(c);
    for (std::size_t k = 0; k < basis.size(); ++k) {
      const Mat4 D = basis[k].transpose() * A + A.transpose() * basis[k];
      int r = 0;
      for (int i = 0; i < 4; ++i)
        for (int j = i; j < 4; ++j) J(r++, k) = D(i, j);
    }
    return 0;
  }
};

constexpr double kVarietyTol = 1e-11;
constexpr double kStructureTol = 1e-6;

}  // namespace

VarietyReport variety_spot_check(const std::string &name, const std::vector<Permutation4> &span,
                                 std::size_t trials, std::uint64_t seed) {
  VarietyReport rep;
  rep.space = name;
  rep.trials = trials;
  OrthoResidual fn;
  for (const auto &p : span) fn.basis.push_back(perm_matrix(p).real());
  // Ten residuals; with more unknowns than that the system is underdetermined
  // and MINPACK's lmder refuses to start.
  if (span.empty() || span.size() > 10) throw ValidationError("span must have 1..10 elements");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> start(0.0, 0.7);
  for (std::size_t t = 0; t < trials; ++t) {
    Eigen::VectorXd c(span.size());
    for (auto &v : c) v = start(rng);
    Eigen::LevenbergMarquardt<OrthoResidual> lm(fn);
    lm.parameters.ftol = 1e-15;
    lm.parameters.xtol = 1e-15;
    lm.parameters.gtol = 0.0;
    lm.parameters.maxfev = 400;
    lm.minimize(c);
    const Mat4 A = fn.assemble(c);
    if ((A.transpose() * A - Mat4::Identity()).cwiseAbs().maxCoeff() > kVarietyTol) continue;
    ++rep.converged;
    const double s = c.sum();
    rep.max_row_sum_defect = std::max(rep.max_row_sum_defect, std::abs(std::abs(s) - 1.0));
    const Structure st = structure_of(A, kStructureTol);
    ++rep.counts[static_cast<int>(st)];
    if (st != Structure::Permutative && !rep.first_non_permutative)
      rep.first_non_permutative =
          SpaceSample{std::vector<double>(c.data(), c.data() + c.size()), A, st};
  }
  return rep;
}

std::vector<Permutation4> subspace_span(const std::vector<int> &which) {
  std::vector<Permutation4> out;
  for (int i : which)
    for (int k : subspace_indices(i)) out.push_back(perm_basis()[k]);
  return out;
}

std::string subspace_label(const std::vector<int> &which) {
  std::string out;
  for (int i : which) {
    if (!out.empty()) out += '+';
    out += "L" + std::to_string(i);
  }
  return out;
}

}  // namespace gwalk
