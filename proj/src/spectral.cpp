#include "gwalk/spectral.hpp"

#include "gwalk/io.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>

namespace gwalk {

Mat4c d_matrix(double zn, double zm) {
  Mat4c D = Mat4c::Zero();
  D(0, 0) = std::polar(1.0, -zn);
  D(1, 1) = std::polar(1.0, zn);
  D(2, 2) = std::polar(1.0, -zm);
  D(3, 3) = std::polar(1.0, zm);
  return D;
}

Mat4c walk_block(const Mat4 &C, double zn, double zm) {
  Mat4c U = C.cast<cplx>();
  const cplx d[4] = {std::polar(1.0, -zn), std::polar(1.0, zn), std::polar(1.0, -zm),
                     std::polar(1.0, zm)};
  for (int i = 0; i < 4; ++i) U.row(i) *= d[i];
  return U;
}

double eigen_angle(double theta, double zn, double zm) {
  const double c = std::cos(theta);
  const double t = 0.5 * ((1 + c) * std::cos(zn) + (1 - c) * std::cos(zm));
  return std::acos(std::clamp(t, -1.0, 1.0));
}

std::array<cplx, 4> closed_form_eigenvalues(Family family, double theta, double zn, double zm) {
  if (family == Family::X3) {
    const double eta = eigen_angle(theta, zn, zm);
    return {cplx(-1), cplx(1), std::polar(1.0, -eta), std::polar(1.0, eta)};
  }
  if (family != Family::P24Y1 && family != Family::P34X1 && family != Family::P23Z1)
    throw ValidationError("no closed-form spectrum for family " + family_name(family));
  const double s = std::sin(theta) * (std::cos(zn) + std::cos(zm));
  const double r = std::sqrt(std::max(0.0, 4 - s * s));
  return {cplx(-1), cplx(1), cplx(s / 2, -r / 2), cplx(s / 2, r / 2)};
}

namespace {

constexpr double kDenTol = 1e-8;
constexpr double kClosedResidual = 1e-11;

// Division that remembers whether any denominator came close to zero.
struct Guard {
  bool singular = false;
  cplx div(cplx a, cplx b) {
    if (std::abs(b) < kDenTol) singular = true;
    return a / b;
  }
};

// wn = e^{i zn}, wm = e^{i zm}; m_zero selects the m = 0, n > 0 branch.
Vec4c vec_y(double s, double c, cplx wn, cplx wm, bool m_zero, cplx l, Guard &g) {
  if (m_zero) {
    if (l == cplx(-1)) {
      const cplx d = (1 + c) / wn + s;
      return {g.div((1 + c + s) / wn, d), g.div(-(1 + c + s), d), 1.0, -1.0};
    }
    if (l == cplx(1)) {
      const cplx d = (1 + c) / wn - s;
      return {g.div((1 + c - s) / wn, d), g.div(1 + c - s, d), 1.0, 1.0};
    }
    const cplx q = g.div((1 + c) - l * s, (1 + c) * l / wn - s);
    const cplx first = g.div((1 - c) * l / wn - s, 1 - c - s * l * wn) * q;
    const cplx inner = g.div((1 + c - l * s) * (l * l - l * s * wn.real()), (1 + c) * l / wn - s) +
                       (s - (1 + c) * l * wn) / 2.0;
    return {first, q, 1.0, g.div(2.0, 1 - c - l * s * wn) * inner};
  }
  const cplx a = (1 - c) * l / wn - s, b = (1 - c) - s * l * wn;
  const cplx q = g.div(1 + c - l * s * wm, (1 + c) * l / wn - s);
  return {g.div(a, b) * q, q, 1.0, g.div((1 + c) * l * wm - s, (1 + c) - s * l / wm)};
}

Vec4c vec_x(double s, double c, cplx wn, cplx wm, cplx l, Guard &g) {
  const cplx f = g.div(s - (1 - c) * l / wn, (1 - c) - s * l * wm);
  return {f * g.div(1 + c - l * s * wm, s - (1 + c) * l * wn), 1.0, -f,
          -g.div(s - (1 + c) * l / wn, (1 + c) - l * s / wm)};
}

Vec4c vec_x3(double s, double c, cplx wn, cplx wm, cplx l, Guard &g) {
  const cplx num = s * (1.0 - l * wm);
  return {-g.div(num, (1 + c) * (1.0 - l * wn)), g.div(num, (1 + c) * (1.0 - l / wn)), 1.0,
          -g.div(1.0 - l * wm, 1.0 - l / wm)};
}

Mat4c block_from_phases(const Mat4 &C, cplx wn, cplx wm) {
  Mat4c U = C.cast<cplx>();
  U.row(0) *= std::conj(wn);
  U.row(1) *= wn;
  U.row(2) *= std::conj(wm);
  U.row(3) *= wm;
  return U;
}

std::optional<Vec4c> closed_vector_impl(Family f, double s, double c, cplx wn, cplx wm,
                                        bool m_zero, cplx l, const Mat4c &U) {
  Guard g;
  Vec4c v;
  switch (f) {
    case Family::P24Y1: v = vec_y(s, c, wn, wm, m_zero, l, g); break;
    case Family::P34X1: v = vec_x(s, c, wn, wm, l, g); break;
    case Family::P23Z1: {
      // P23Z1 = Pi P24Y1 Pi with Pi swapping chiralities U and D, so
      // U_{n,m} is similar to the P24Y1 block at (n, -m).
      const Vec4c w = vec_y(s, c, wn, std::conj(wm), m_zero, l, g);
      v = Vec4c(w(0), w(1), w(3), w(2));
      break;
    }
    case Family::X3: v = vec_x3(s, c, wn, wm, l, g); break;
    default: return std::nullopt;
  }
  if (g.singular || !v.allFinite()) return std::nullopt;
  const double nv = v.norm();
  if (!(nv > 0)) return std::nullopt;
  v /= nv;
  if ((U * v - l * v).norm() > kClosedResidual) return std::nullopt;
  return v;
}

std::optional<Vec4c> closed_vector_impl(Family f, double theta, double zn, double zm, cplx l,
                                        const Mat4c &U) {
  return closed_vector_impl(f, std::sin(theta), std::cos(theta), std::polar(1.0, zn),
                            std::polar(1.0, zm), zm == 0.0 && zn != 0.0, l, U);
}

void fix_phase(Vec4c &v) {
  for (int i = 0; i < 4; ++i) {
    if (std::abs(v(i)) > 1e-8) {
      v *= std::conj(v(i)) / std::abs(v(i));
      v(i) = std::abs(v(i));
      return;
    }
  }
}

}  // namespace

std::optional<Vec4c> closed_form_vector(Family family, double theta, double zn, double zm,
                                        cplx lambda) {
  const Mat4c U = walk_block(coin_from_theta(family, theta).entries.real(), zn, zm);
  return closed_vector_impl(family, theta, zn, zm, lambda, U);
}

std::optional<Vec4c> closed_form_vector(Family family, double theta, const Mat4 &C, double zn,
                                        double zm, cplx lambda) {
  return closed_vector_impl(family, theta, zn, zm, lambda, walk_block(C, zn, zm));
}

std::optional<Vec4c> closed_form_vector_phases(Family family, double sin_t, double cos_t,
                                               const Mat4 &C, cplx wn, cplx wm, cplx lambda) {
  return closed_vector_impl(family, sin_t, cos_t, wn, wm, false, lambda,
                            block_from_phases(C, wn, wm));
}

namespace {

std::optional<EigenSet> closed_eigs_impl(Family family, double theta, double zn, double zm,
                                         const Mat4c &U) {
  const auto lam = closed_form_eigenvalues(family, theta, zn, zm);
  EigenSet out;
  for (int k = 0; k < 4; ++k) {
    auto v = closed_vector_impl(family, theta, zn, zm, lam[k], U);
    if (!v) return std::nullopt;
    out[k] = EigenPair{lam[k], *v};
  }
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (std::abs(out[i].v.dot(out[j].v)) > 1e-10) return std::nullopt;
  return out;
}

}  // namespace

std::optional<EigenSet> closed_form_eigs(Family family, double theta, double zn, double zm) {
  const Mat4c U = walk_block(coin_from_theta(family, theta).entries.real(), zn, zm);
  return closed_eigs_impl(family, theta, zn, zm, U);
}

EigenSet numeric_eigs(const Mat4c &U, const std::optional<std::array<cplx, 4>> &labels) {
  Eigen::ComplexSchur<Mat4c> schur(U);
  const Vec4c ev = schur.matrixT().diagonal();
  const Mat4c Q = schur.matrixU();

  // Clusters of (near) equal eigenvalues.
  std::array<int, 4> cluster{0, 1, 2, 3};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < i; ++j)
      if (std::abs(ev(i) - ev(j)) < 1e-7) {
        cluster[i] = cluster[j];
        break;
      }

  EigenSet pairs;
  std::array<bool, 4> done{};
  for (int i = 0; i < 4; ++i) {
    if (done[i]) continue;
    std::vector<int> idx;
    for (int j = 0; j < 4; ++j)
      if (cluster[j] == cluster[i]) idx.push_back(j);
    if (idx.size() == 1) {
      pairs[i] = EigenPair{ev(i), Q.col(i)};
      done[i] = true;
      continue;
    }
    Mat4c P = Mat4c::Zero();
    cplx mean = 0;
    for (int j : idx) {
      P += Q.col(j) * Q.col(j).adjoint();
      mean += ev(j);
    }
    mean /= std::abs(mean) > 0 ? std::abs(mean) : 1.0;
    std::vector<Vec4c> basis;
    for (int e = 0; e < 4 && basis.size() < idx.size(); ++e) {
      Vec4c w = P.col(e);
      for (const auto &b : basis) w -= b.dot(w) * b;
      if (w.norm() > 1e-6) basis.push_back(w / w.norm());
    }
    for (std::size_t t = 0; t < idx.size(); ++t) {
      pairs[idx[t]] = EigenPair{mean, basis[t]};
      done[idx[t]] = true;
    }
  }
  for (auto &p : pairs) fix_phase(p.v);

  std::array<int, 4> order{0, 1, 2, 3};
  if (labels) {
    std::array<int, 4> perm{0, 1, 2, 3}, best = perm;
    double best_cost = std::numeric_limits<double>::infinity();
    do {
      double cost = 0;
      for (int k = 0; k < 4; ++k) cost += std::abs(pairs[perm[k]].lambda - (*labels)[k]);
      if (cost < best_cost - 1e-14) {
        best_cost = cost;
        best = perm;
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
    order = best;
  } else {
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return std::arg(pairs[a].lambda) < std::arg(pairs[b].lambda);
    });
  }
  EigenSet out;
  for (int k = 0; k < 4; ++k) out[k] = pairs[order[k]];
  return out;
}

namespace {

bool has_closed_form(const Coin &C) {
  return is_theta_family(C.family) && C.theta && std::abs(*C.theta) < kPi;
}

}  // namespace

EigenSet block_eigs(const Coin &C, double zn, double zm, bool *numeric) {
  const Mat4c U = walk_block(C.entries.real(), zn, zm);
  if (has_closed_form(C)) {
    if (auto e = closed_eigs_impl(C.family, *C.theta, zn, zm, U)) {
      if (numeric) *numeric = false;
      return *e;
    }
    if (numeric) *numeric = true;
    return numeric_eigs(U, closed_form_eigenvalues(C.family, *C.theta, zn, zm));
  }
  if (numeric) *numeric = true;
  return numeric_eigs(U);
}

SpectralBlock build_block(const Coin &C, int n, int m, int N) {
  if (N < 1 || n < 0 || m < 0 || n >= N || m >= N)
    throw ValidationError("quantum numbers must lie in 0..N-1");
  SpectralBlock b;
  b.n = n;
  b.m = m;
  b.N = N;
  b.omega = std::polar(1.0, 2 * kPi / N);
  b.zeta_n = 2 * kPi * n / N;
  b.zeta_m = 2 * kPi * m / N;
  b.matrix = walk_block(C.entries.real(), b.zeta_n, b.zeta_m);
  b.pairs = block_eigs(C, b.zeta_n, b.zeta_m, &b.numeric);
  return b;
}

// ---------------------------------------------------------------- classes

std::vector<std::pair<int, int>> class_representatives(int N) {
  const int h = (N - 1) / 2;
  std::vector<std::pair<int, int>> out{{0, 0}};
  for (int n = 1; n <= h; ++n) out.emplace_back(n, 0);
  for (int n = 1; n <= h; ++n) out.emplace_back(n, n);
  for (int n = 1; n <= h; ++n)
    for (int m = n + 1; m <= h; ++m) out.emplace_back(n, m);
  return out;
}

DegeneracyClass omega_class(int n, int m, int N) {
  const int h = (N - 1) / 2;
  if (N < 3 || N % 2 == 0) throw ValidationError("N must be odd and >= 3");
  DegeneracyClass c;
  c.representative = {n, m};
  if (n == 0 && m == 0) {
    c.members = {{0, 0}};
  } else if (m == 0 && n >= 1 && n <= h) {
    c.members = {{n, 0}, {0, n}, {N - n, 0}, {0, N - n}};
  } else if (n == m && n >= 1 && n <= h) {
    c.members = {{n, n}, {n, N - n}, {N - n, n}, {N - n, N - n}};
  } else if (n >= 1 && n < m && m <= h) {
    c.members = {{n, m},     {n, N - m}, {N - n, m}, {N - n, N - m},
                 {m, n},     {m, N - n}, {N - m, n}, {N - m, N - n}};
  } else {
    throw ValidationError("(n, m) is not a class representative");
  }
  return c;
}

cplx c_coefficient(const Coin &C, Chirality Sp, Chirality S, int n, int m, int k, int N) {
  if (k < 1 || k > 4) throw ValidationError("k must be 1..4");
  const int a = chirality_index(Sp) - 1, b = chirality_index(S) - 1;
  cplx sum = 0;
  for (const auto &[p, q] : omega_class(n, m, N).members) {
    const auto e = block_eigs(C, 2 * kPi * p / N, 2 * kPi * q / N);
    const Vec4c &v = e[k - 1].v;
    sum += v(a) * std::conj(v(b));
  }
  return sum;
}

double c_table_p24y1(double theta, Chirality Sp, Chirality S, int k, double x, double y) {
  if (k != 1 && k != 2) throw ValidationError("the table covers k = 1, 2");
  if (Sp == S) return 2.0;
  const double s = std::sin(theta), c = std::cos(theta);
  const double cx = std::cos(x), cy = std::cos(y);
  const double sg = k == 1 ? 1.0 : -1.0;   // sign carried by sin(theta)
  const double flip = k == 1 ? -1.0 : 1.0;  // overall sign of the odd pairs
  const double den = 2 + sg * s * (cx + cy);
  int lo = std::min(chirality_index(S), chirality_index(Sp));
  int hi = std::max(chirality_index(S), chirality_index(Sp));
  if ((lo == 1 && hi == 2) || (lo == 3 && hi == 4))
    return flip * 2 * (cx + cy + sg * 2 * s * cx * cy) / den;
  if (lo == 1 && hi == 3) return 2 * (1 + c + (1 - c) * cx * cy + sg * s * (cx + cy)) / den;
  if (lo == 2 && hi == 4) return 2 * ((1 + c) * cx * cy + (1 - c) + sg * s * (cx + cy)) / den;
  return flip * 2 * (cx + cy + sg * s + sg * s * cx * cy) / den;  // {1,4}, {2,3}
}

// ---------------------------------------------------------------- finite N

namespace {

struct Mode {
  double arg;
  cplx lambda;
  std::array<cplx, 4> w;  // v_{S'} conj(v_S) / N^2
};

std::vector<EigenSet> all_blocks(const Coin &C, int N) {
  std::vector<EigenSet> out(static_cast<std::size_t>(N) * N);
  parallel_for(out.size(), [&](std::size_t i) {
    const int n = static_cast<int>(i) / N, m = static_cast<int>(i) % N;
    out[i] = block_eigs(C, 2 * kPi * n / N, 2 * kPi * m / N);
  });
  return out;
}

}  // namespace

std::array<double, 4> finite_N_pbar(const Coin &C, Chirality S, int N) {
  const Lattice lat(N);
  const auto blocks = all_blocks(C, N);
  const int b = chirality_index(S) - 1;
  const double inv = 1.0 / (double(N) * N);
  std::vector<Mode> modes;
  modes.reserve(blocks.size() * 4);
  for (const auto &e : blocks)
    for (const auto &p : e) {
      Mode md{std::arg(p.lambda), p.lambda, {}};
      for (int a = 0; a < 4; ++a) md.w[a] = p.v(a) * std::conj(p.v(b)) * inv;
      modes.push_back(md);
    }
  std::stable_sort(modes.begin(), modes.end(),
                   [](const Mode &x, const Mode &y) { return x.arg < y.arg; });

  constexpr double tol = 1e-9;
  std::vector<std::array<cplx, 4>> sums;
  std::array<cplx, 4> cur{};
  for (std::size_t i = 0; i < modes.size(); ++i) {
    if (i > 0 && std::abs(modes[i].lambda - modes[i - 1].lambda) > tol) {
      sums.push_back(cur);
      cur = {};
    }
    for (int a = 0; a < 4; ++a) cur[a] += modes[i].w[a];
  }
  sums.push_back(cur);
  // Arguments near -pi and +pi describe the same eigenvalue.
  if (sums.size() > 1 && std::abs(modes.front().lambda - modes.back().lambda) <= tol) {
    for (int a = 0; a < 4; ++a) sums.front()[a] += sums.back()[a];
    sums.pop_back();
  }
  std::array<double, 4> out{};
  for (const auto &s : sums)
    for (int a = 0; a < 4; ++a) out[a] += std::norm(s[a]);
  return out;
}

double finite_N_pbar(const Coin &C, Chirality Sp, Chirality S, int N) {
  return finite_N_pbar(C, S, N)[chirality_index(Sp) - 1];
}

std::array<double, 4> finite_N_pbar_classwise(const Coin &C, Chirality S, int N) {
  if (C.family != Family::P34X1 && C.family != Family::P24Y1 && C.family != Family::P23Z1)
    throw ValidationError("the class-wise bracket needs a Grover-family coin");
  const Lattice lat(N);
  const auto blocks = all_blocks(C, N);
  const int b = chirality_index(S) - 1;
  std::array<double, 4> out{};
  for (int a = 0; a < 4; ++a) {
    cplx C1 = 0, C2 = 0;
    double rest = 0;
    for (const auto &[n, m] : class_representatives(N)) {
      std::array<cplx, 4> c{};
      for (const auto &[p, q] : omega_class(n, m, N).members) {
        const auto &e = blocks[static_cast<std::size_t>(p) * N + q];
        for (int k = 0; k < 4; ++k) c[k] += e[k].v(a) * std::conj(e[k].v(b));
      }
      if (n == 0 && m == 0) {
        // lambda_3,4 of the trivial class join the +-1 sums only when they
        // coincide with them (the Grover point has lambda_3 = lambda_4 = -1).
        C1 += c[0];
        C2 += c[1];
        const auto &e = blocks[0];
        for (int k : {2, 3}) {
          if (std::abs(e[k].lambda + 1.0) < 1e-9) C1 += c[k];
          else if (std::abs(e[k].lambda - 1.0) < 1e-9) C2 += c[k];
          else rest += std::norm(c[k]);
        }
      } else {
        C1 += c[0];
        C2 += c[1];
        rest += std::norm(c[2]) + std::norm(c[3]);
      }
    }
    out[a] = (std::norm(C1) + std::norm(C2) + rest) / std::pow(double(N), 4);
  }
  return out;
}

// ---------------------------------------------------------------- eta

Eigen::VectorXcd eta_vector(const SpectralBlock &blk, int k) {
  const Lattice lat(blk.N);
  const int N = blk.N;
  Eigen::VectorXcd out(lat.dim());
  const Vec4c &v = blk.pairs[k - 1].v;
  for (int y = -lat.half(); y <= lat.half(); ++y)
    for (int x = -lat.half(); x <= lat.half(); ++x) {
      const cplx ph = std::polar(1.0 / N, 2 * kPi * double(blk.n * x + blk.m * y) / N);
      const int base = index_of(Chirality::R, x, y, N) - 1;
      for (int s = 0; s < 4; ++s) out(base + s) = v(s) * ph;
    }
  return out;
}

Eigen::MatrixXcd eta_matrix(const Coin &C, int N) {
  const Lattice lat(N);
  Eigen::MatrixXcd E(lat.dim(), lat.dim());
  for (int n = 0; n < N; ++n)
    for (int m = 0; m < N; ++m) {
      const SpectralBlock blk = build_block(C, n, m, N);
      for (int k = 1; k <= 4; ++k) E.col((n * N + m) * 4 + k - 1) = eta_vector(blk, k);
    }
  return E;
}

WalkState spectral_evolve(const Coin &C, const WalkState &psi0, long t) {
  const int N = psi0.N;
  const Lattice lat(N);
  Eigen::MatrixXcd E(lat.dim(), lat.dim());
  Eigen::VectorXcd lt(lat.dim());
  for (int n = 0; n < N; ++n)
    for (int m = 0; m < N; ++m) {
      const SpectralBlock blk = build_block(C, n, m, N);
      for (int k = 1; k <= 4; ++k) {
        const int col = (n * N + m) * 4 + k - 1;
        E.col(col) = eta_vector(blk, k);
        lt(col) = std::pow(blk.pairs[k - 1].lambda, static_cast<double>(t));
      }
    }
  WalkState out;
  out.N = N;
  out.amp = E * (lt.asDiagonal() * (E.adjoint() * psi0.amp));
  return out;
}

// ---------------------------------------------------------------- dumps

void write_spectrum_csv(std::ostream &os, const Coin &C, int N) {
  os << "n,m,k,re,im\n";
  const auto blocks = all_blocks(C, N);
  for (int n = 0; n < N; ++n)
    for (int m = 0; m < N; ++m) {
      const auto &e = blocks[static_cast<std::size_t>(n) * N + m];
      for (int k = 0; k < 4; ++k)
        os << n << ',' << m << ',' << k + 1 << ',' << format_double(e[k].lambda.real()) << ','
           << format_double(e[k].lambda.imag()) << '\n';
    }
}

void write_coefficient_csv(std::ostream &os, const Coin &C, int N) {
  os << "S,Sprime,n,m,k,re,im\n";
  const auto blocks = all_blocks(C, N);
  for (Chirality S : kChiralities)
    for (Chirality Sp : kChiralities)
      for (const auto &[n, m] : class_representatives(N)) {
        std::array<cplx, 4> c{};
        for (const auto &[p, q] : omega_class(n, m, N).members) {
          const auto &e = blocks[static_cast<std::size_t>(p) * N + q];
          for (int k = 0; k < 4; ++k)
            c[k] += e[k].v(chirality_index(Sp) - 1) * std::conj(e[k].v(chirality_index(S) - 1));
        }
        for (int k = 0; k < 4; ++k)
          os << chirality_char(S) << ',' << chirality_char(Sp) << ',' << n << ',' << m << ','
             << k + 1 << ',' << format_double(c[k].real()) << ',' << format_double(c[k].imag())
             << '\n';
      }
}

}  // namespace gwalk
