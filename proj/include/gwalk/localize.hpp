#pragma once

#include "gwalk/coin.hpp"
#include "gwalk/walk.hpp"

#include <array>
#include <vector>

namespace gwalk {

// Midpoint rule on [0, pi]^2 with M nodes per axis. The limit
// (1/N^2) sum_{0<n<m<=(N-1)/2} f maps to (1/(8 pi^2)) of the square integral.
// When check is set the result is compared with M/2; if some value moves by
// more than tolerance, M is doubled up to max_M, and the report is flagged
// when even that does not settle it.
struct QuadratureSpec {
  int M = 512;
  double tolerance = 1e-4;
  bool check = true;
  int max_M = 2048;  // values below M disable refinement

  void validate() const;  // M >= 16 and even
};

// Per-pair I_k = lim (1/N^2) sum c_{k}, indexed [S][S'] (chirality order R, L, U, D).
using PairGrid = std::array<std::array<double, 4>, 4>;

struct CIntegrals {
  PairGrid I1{}, I2{};
  long fallback_nodes = 0;  // nodes where the closed form was singular
};

// P24Y1 uses its closed-form c-table unless use_table is false; every other
// family (and P24Y1 without the table) sums eigenvector products at the nodes.
CIntegrals c_integrals(Family family, double theta, int M, bool use_table = true);

struct LocalizationReport {
  Family family = Family::P24Y1;
  double theta = 0;
  PairGrid pair{};               // P(psi_S(0), S'), [S][S']
  std::array<double, 4> total{};  // P(psi_S)
  int M = 0;  // nodes per axis of the reported values
  bool converged = true;
  double max_delta = 0;  // largest |value(M) - value(M/2)|
  long fallback_nodes = 0;

  double at(Chirality S, Chirality Sp) const {
    return pair[chirality_index(S) - 1][chirality_index(Sp) - 1];
  }
  double total_of(Chirality S) const { return total[chirality_index(S) - 1]; }
};

// theta strictly inside (-pi, pi); family one of P34X1, P24Y1, P23Z1, X3.
LocalizationReport localization_report(Family family, double theta,
                                       const QuadratureSpec &quad = {});

struct PbarValue {
  double value = 0;
  bool converged = true;
  double delta = 0;
};

PbarValue pbar_infinity_pair(Family family, double theta, Chirality S, Chirality Sp,
                             const QuadratureSpec &quad = {});
PbarValue pbar_infinity_total(Family family, double theta, Chirality S,
                              const QuadratureSpec &quad = {});

// theta_i = -pi + (i+1) 2 pi / (num+1), i = 0..num-1: equidistant, open at +-pi.
std::vector<double> theta_grid(int num);

// One report per grid point; default 400 points.
std::vector<LocalizationReport> sweep_theta(Family family, int num_points = 400,
                                            const QuadratureSpec &quad = {});

struct Theorem36Entry {
  Family family;
  double theta;
  Chirality S;
  double value;
};

struct Theorem36Report {
  int grid = 25;
  double max_deviation = 0;   // max |P(psi_S(0), S) - 1/8|
  Theorem36Entry worst{Family::P24Y1, 0, Chirality::R, 0};
  std::vector<Theorem36Entry> entries;
  bool converged = true;
  bool passed(double tol = 1e-6) const { return max_deviation < tol && converged; }
};

// Diagonal values for the three Grover families on theta_grid(grid).
Theorem36Report theorem36_check(int grid = 25, const QuadratureSpec &quad = {});

}  // namespace gwalk
