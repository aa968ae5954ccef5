#include "gwalk/localize.hpp"

#include "gwalk/spectral.hpp"

#include <cmath>
#include <string>

namespace gwalk {

void QuadratureSpec::validate() const {
  if (M < 16 || M % 2 != 0) throw ValidationError("quadrature M must be even and >= 16");
  if (!(tolerance > 0)) throw ValidationError("quadrature tolerance must be positive");
}

namespace {

void check_args(Family family, double theta) {
  if (!is_theta_family(family))
    throw ValidationError("localization needs one of p34x1, p24y1, p23z1, x3");
  if (!(theta > -kPi && theta < kPi)) throw ValidationError("theta must lie in (-pi, pi)");
}

struct Acc {
  PairGrid a1{}, a2{};
  long fallback = 0;
};

struct NodeCtx {
  Family f;
  double theta, s, c;
  const Mat4 &C;
};

// v for lambda = -1 and +1 at the momentum with phases (wn, wm).
std::array<Vec4c, 2> unit_vectors(const NodeCtx &n, cplx wn, cplx wm, long &fallback) {
  auto v1 = closed_form_vector_phases(n.f, n.s, n.c, n.C, wn, wm, cplx(-1));
  auto v2 = closed_form_vector_phases(n.f, n.s, n.c, n.C, wn, wm, cplx(1));
  if (v1 && v2) return {*v1, *v2};
  ++fallback;
  const double a = std::arg(wn), b = std::arg(wm);
  const auto e = numeric_eigs(walk_block(n.C, a, b), closed_form_eigenvalues(n.f, n.theta, a, b));
  return {v1 ? *v1 : e[0].v, v2 ? *v2 : e[1].v};
}

void add_generic(Acc &acc, const NodeCtx &n, double x, double y, double w) {
  // The class orbit is closed under (a, b) -> (-a, -b), which conjugates the
  // block and its real-eigenvalue eigenvectors; four solves cover all eight.
  const cplx ex = std::polar(1.0, x), ey = std::polar(1.0, y);
  const cplx pts[4][2] = {{ex, ey}, {ex, std::conj(ey)}, {ey, ex}, {ey, std::conj(ex)}};
  std::array<std::array<cplx, 16>, 2> sum{};
  for (const auto &p : pts) {
    const auto v = unit_vectors(n, p[0], p[1], acc.fallback);
    for (int k = 0; k < 2; ++k)
      for (int s = 0; s < 4; ++s)
        for (int sp = 0; sp < 4; ++sp) sum[k][s * 4 + sp] += v[k](sp) * std::conj(v[k](s));
  }
  for (int s = 0; s < 4; ++s)
    for (int sp = 0; sp < 4; ++sp) {
      acc.a1[s][sp] += w * 2 * sum[0][s * 4 + sp].real();
      acc.a2[s][sp] += w * 2 * sum[1][s * 4 + sp].real();
    }
}

void add_table(Acc &acc, double theta, double x, double y, double w) {
  for (Chirality S : kChiralities)
    for (Chirality Sp : kChiralities) {
      const int s = chirality_index(S) - 1, sp = chirality_index(Sp) - 1;
      acc.a1[s][sp] += w * c_table_p24y1(theta, Sp, S, 1, x, y);
      acc.a2[s][sp] += w * c_table_p24y1(theta, Sp, S, 2, x, y);
    }
}

}  // namespace

CIntegrals c_integrals(Family family, double theta, int M, bool use_table) {
  check_args(family, theta);
  if (M < 1) throw ValidationError("quadrature M must be positive");
  const Mat4 C = coin_from_theta(family, theta).entries.real();
  const bool table = use_table && family == Family::P24Y1;
  const NodeCtx ctx{family, theta, std::sin(theta), std::cos(theta), C};
  const double h = kPi / M;
  std::vector<Acc> rows(static_cast<std::size_t>(M));
  parallel_for(rows.size(), [&](std::size_t i) {
    const double x = (static_cast<double>(i) + 0.5) * h;
    // The integrand is symmetric in (x, y): walk the upper triangle.
    for (int j = static_cast<int>(i); j < M; ++j) {
      const double y = (j + 0.5) * h;
      const double w = j == static_cast<int>(i) ? 1.0 : 2.0;
      if (table) add_table(rows[i], theta, x, y, w);
      else add_generic(rows[i], ctx, x, y, w);
    }
  });
  CIntegrals out;
  for (const auto &r : rows) {
    for (int s = 0; s < 4; ++s)
      for (int sp = 0; sp < 4; ++sp) {
        out.I1[s][sp] += r.a1[s][sp];
        out.I2[s][sp] += r.a2[s][sp];
      }
    out.fallback_nodes += r.fallback;
  }
  const double norm = 1.0 / (8.0 * M * M);
  for (int s = 0; s < 4; ++s)
    for (int sp = 0; sp < 4; ++sp) {
      out.I1[s][sp] *= norm;
      out.I2[s][sp] *= norm;
    }
  return out;
}

namespace {

PairGrid squares(const CIntegrals &c) {
  PairGrid p{};
  for (int s = 0; s < 4; ++s)
    for (int sp = 0; sp < 4; ++sp)
      p[s][sp] = c.I1[s][sp] * c.I1[s][sp] + c.I2[s][sp] * c.I2[s][sp];
  return p;
}

}  // namespace

namespace {

double max_change(const PairGrid &a, const PairGrid &b) {
  double d = 0;
  for (int s = 0; s < 4; ++s) {
    double ta = 0, tb = 0;
    for (int sp = 0; sp < 4; ++sp) {
      d = std::max(d, std::abs(a[s][sp] - b[s][sp]));
      ta += a[s][sp];
      tb += b[s][sp];
    }
    d = std::max(d, std::abs(ta - tb));
  }
  return d;
}

}  // namespace

LocalizationReport localization_report(Family family, double theta, const QuadratureSpec &quad) {
  check_args(family, theta);
  quad.validate();
  int M = quad.M;
  CIntegrals c = c_integrals(family, theta, M);
  PairGrid fine = squares(c);
  LocalizationReport r;
  if (quad.check) {
    PairGrid coarse = squares(c_integrals(family, theta, M / 2));
    r.max_delta = max_change(fine, coarse);
    while (r.max_delta >= quad.tolerance && 2 * M <= quad.max_M) {
      M *= 2;
      coarse = fine;
      c = c_integrals(family, theta, M);
      fine = squares(c);
      r.max_delta = max_change(fine, coarse);
    }
    r.converged = r.max_delta < quad.tolerance;
  }
  r.family = family;
  r.theta = theta;
  r.M = M;
  r.pair = fine;
  r.fallback_nodes = c.fallback_nodes;
  for (int s = 0; s < 4; ++s)
    r.total[s] = r.pair[s][0] + r.pair[s][1] + r.pair[s][2] + r.pair[s][3];
  return r;
}

PbarValue pbar_infinity_pair(Family family, double theta, Chirality S, Chirality Sp,
                             const QuadratureSpec &quad) {
  const auto r = localization_report(family, theta, quad);
  return {r.at(S, Sp), r.converged, r.max_delta};
}

PbarValue pbar_infinity_total(Family family, double theta, Chirality S,
                              const QuadratureSpec &quad) {
  const auto r = localization_report(family, theta, quad);
  return {r.total_of(S), r.converged, r.max_delta};
}

std::vector<double> theta_grid(int num) {
  if (num < 2) throw ValidationError("a theta grid needs at least 2 points");
  std::vector<double> g(static_cast<std::size_t>(num));
  // Integer numerator first: the grid is exactly antisymmetric and odd grids hit 0.
  for (int i = 0; i < num; ++i) g[i] = (2 * (i + 1) - (num + 1)) * kPi / (num + 1);
  return g;
}

std::vector<LocalizationReport> sweep_theta(Family family, int num_points,
                                            const QuadratureSpec &quad) {
  std::vector<LocalizationReport> out;
  for (double t : theta_grid(num_points)) out.push_back(localization_report(family, t, quad));
  return out;
}

Theorem36Report theorem36_check(int grid, const QuadratureSpec &quad) {
  Theorem36Report rep;
  rep.grid = grid;
  rep.max_deviation = -1;
  for (Family f : {Family::P34X1, Family::P24Y1, Family::P23Z1})
    for (double t : theta_grid(grid)) {
      const auto r = localization_report(f, t, quad);
      rep.converged = rep.converged && r.converged;
      for (Chirality S : kChiralities) {
        const Theorem36Entry e{f, t, S, r.at(S, S)};
        rep.entries.push_back(e);
        const double d = std::abs(e.value - 0.125);
        if (d > rep.max_deviation) {
          rep.max_deviation = d;
          rep.worst = e;
        }
      }
    }
  return rep;
}

}  // namespace gwalk
