// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include "gwalk/coin.hpp"
#include "gwalk/localize.hpp"
#include "gwalk/space.hpp"
#include "gwalk/spectral.hpp"
#include "gwalk/walk.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace gwalk;

namespace {

const Family kTheta[] = {Family::P34X1, Family::P24Y1, Family::P23Z1, Family::X3};
const Family kGrover[] = {Family::P34X1, Family::P24Y1, Family::P23Z1};

struct Outcome {
  bool ok = true;
  std::string detail;
};

// Collects failures; the first few messages end up in the summary line.
class Check {
 public:
  void require(bool cond, const std::string &what) {
    if (cond) return;
    ++failures_;
    if (failures_ <= 3) msgs_ += (msgs_.empty() ? "" : "; ") + what;
  }
  Outcome done(const std::string &summary) const {
    if (failures_ == 0) return {true, summary};
    return {false, summary + " | " + std::to_string(failures_) + " failure(s): " + msgs_};
  }

 private:
  int failures_ = 0;
  std::string msgs_;
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

double residual(const Mat4c &U, const EigenPair &p) { return (U * p.v - p.lambda * p.v).norm(); }

Outcome one_eighth() {
  QuadratureSpec q;
  q.M = 512;
  const Theorem36Report r = theorem36_check(25, q);
  Check c;
  c.require(r.entries.size() == 3 * 25 * 4, "expected 300 diagonal values");
  c.require(r.converged, "quadrature not converged");
  c.require(r.max_deviation < 1e-6, "max deviation " + sci(r.max_deviation));
  return c.done("max |P(S,S) - 1/8| = " + sci(r.max_deviation) + " over " +
                std::to_string(r.entries.size()) + " values");
}

Outcome oracle_equivalence() {
  Check c;
  double worst_state = 0, worst_avg = 0;
  for (Family f : {Family::P24Y1, Family::X3})
    for (double th : {0.7, -2.1})
      for (int N : {3, 5}) {
        const Coin C = coin_from_theta(f, th);
        for (Chirality S : kChiralities) {
          const WalkState psi0 = initial_state(N, S);
          for (long t : {1L, 7L, 50L}) {
            const WalkState a = evolve(psi0, C.entries.real(), t);
            const WalkState b = spectral_evolve(C, psi0, t);
            worst_state = std::max(worst_state, (a.amp - b.amp).cwiseAbs().maxCoeff());
          }
          const auto exact = finite_N_pbar(C, S, N);
          const auto direct = time_averaged_components(C.entries.real(), N, S, 0, 0, 10000);
          for (int k = 0; k < 4; ++k)
            worst_avg = std::max(worst_avg, std::abs(exact[k] - direct[k]));
        }
      }
  c.require(worst_state < 1e-8, "state mismatch " + sci(worst_state));
  c.require(worst_avg < 5e-4, "time average mismatch " + sci(worst_avg));
  return c.done("state max diff " + sci(worst_state) + ", T=1e4 average max diff " +
                sci(worst_avg));
}

Outcome spectral_residuals() {
  Check c;
  const int N = 101;
  const auto grid = theta_grid(25);
  double worst = 0, worst_orth = 0;
  long blocks = 0, numeric = 0;
  for (Family f : kTheta)
    for (double th : grid) {
      const Coin C = coin_from_theta(f, th);
      for (int n = 0; n < N; ++n)
        for (int m = 0; m < N; ++m) {
          const SpectralBlock b = build_block(C, n, m, N);
          ++blocks;
          numeric += b.numeric;
          for (int k = 0; k < 4; ++k) {
            worst = std::max(worst, residual(b.matrix, b.pairs[k]));
            for (int j = k; j < 4; ++j)
              worst_orth = std::max(worst_orth, std::abs(b.pairs[k].v.dot(b.pairs[j].v) -
                                                         (j == k ? 1.0 : 0.0)));
          }
        }
    }
  c.require(worst <= 1e-10, "residual " + sci(worst));
  c.require(worst_orth <= 1e-10, "block orthonormality " + sci(worst_orth));

  double gram = 0;
  for (Family f : kTheta)
    for (double th : {0.7, -2.1}) {
      const auto E = eta_matrix(coin_from_theta(f, th), 5);
      const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(E.cols(), E.cols());
      c.require(E.cols() == 100, "eta matrix must have 4 N^2 columns");
      gram = std::max(gram, (E.adjoint() * E - I).cwiseAbs().maxCoeff());
    }
  c.require(gram < 1e-8, "eta Gram deviation " + sci(gram));
  return c.done("max residual " + sci(worst) + " over " + std::to_string(blocks) +
                " blocks (" + std::to_string(numeric) + " numeric), eta Gram deviation " +
                sci(gram));
}

Outcome c_table() {
  Check c;
  std::mt19937_64 rng(20261014);
  std::uniform_real_distribution<double> u(-kPi, kPi);
  double worst = 0;
  int samples = 0;
  while (samples < 100) {
    const double th = u(rng);
    if (std::abs(std::abs(th) - kPi) < 1e-6) continue;
    const int N = 2 * std::uniform_int_distribution<int>(3, 60)(rng) + 1;
    const int h = (N - 1) / 2;
    const int n = std::uniform_int_distribution<int>(1, h - 1)(rng);
    const int m = std::uniform_int_distribution<int>(n + 1, h)(rng);
    const Coin C = coin_from_theta(Family::P24Y1, th);
    for (Chirality S : kChiralities)
      for (Chirality Sp : kChiralities)
        for (int k : {1, 2}) {
          const cplx v = c_coefficient(C, Sp, S, n, m, k, N);
          const double want = c_table_p24y1(th, Sp, S, k, 2 * kPi * n / N, 2 * kPi * m / N);
          worst = std::max(worst, std::abs(v - want));
        }
    ++samples;
  }
  c.require(worst < 1e-8, "table mismatch " + sci(worst));
  return c.done("max |c - table| = " + sci(worst) + " over 100 samples x 16 pairs x k=1,2");
}

Outcome sweep_shapes() {
  Check c;
  QuadratureSpec q;
  const int P = 400;
  const auto grid = theta_grid(P);
  std::vector<std::vector<LocalizationReport>> sweeps;
  for (Family f : kTheta) sweeps.push_back(sweep_theta(f, P, q));
  for (const auto &s : sweeps)
    for (const auto &r : s)
      c.require(r.converged, family_name(r.family) + " not converged at " + sci(r.theta));

  // (a) mirror symmetry; the grid satisfies theta_{P-1-i} = -theta_i exactly.
  double asym = 0;
  for (const auto &s : sweeps)
    for (int i = 0; i < P; ++i)
      for (Chirality S : kChiralities)
        asym = std::max(asym, std::abs(s[i].total_of(S) - s[P - 1 - i].total_of(S)));
  c.require(asym < 1e-6, "(a) asymmetry " + sci(asym));

  // (b) P34X1: same total for every S; the maximum sits at the grid points
  // closest to +-pi/2 and does not exceed the value at pi/2 itself.
  const auto &px = sweeps[0];
  double spread = 0;
  int arg = 0;
  for (int i = 0; i < P; ++i) {
    for (Chirality S : kChiralities)
      spread = std::max(spread, std::abs(px[i].total_of(S) - px[i].total_of(Chirality::R)));
    if (px[i].total_of(Chirality::R) > px[arg].total_of(Chirality::R)) arg = i;
  }
  double nearest = 1e9;
  for (double t : grid) nearest = std::min(nearest, std::abs(std::abs(t) - kPi / 2));
  const bool at_half_pi = std::abs(std::abs(grid[arg]) - kPi / 2) <= nearest + 1e-12;
  const double peak = pbar_infinity_total(Family::P34X1, kPi / 2, Chirality::R, q).value;
  c.require(spread < 1e-6, "(b) S spread " + sci(spread));
  c.require(at_half_pi, "(b) argmax at theta " + sci(grid[arg]));
  c.require(px[arg].total_of(Chirality::R) <= peak + 1e-6, "(b) grid max above pi/2 value");

  // (c) X3: S in {R, L} are not trapped at theta = 0, and U, D at the grid
  // edge sit below their value at pi/2.
  const LocalizationReport x0 = localization_report(Family::X3, 0.0, q);
  const LocalizationReport xh = localization_report(Family::X3, kPi / 2, q);
  const double rl = std::max(x0.total_of(Chirality::R), x0.total_of(Chirality::L));
  c.require(rl < 1e-8, "(c) X3 R/L total at 0 is " + sci(rl));
  const auto &x3 = sweeps[3];
  for (int i : {0, P - 1})
    for (Chirality S : {Chirality::U, Chirality::D})
      c.require(x3[i].total_of(S) < xh.total_of(S),
                std::string("(c) X3 ") + chirality_char(S) + " edge not below pi/2");

  // (d) every Grover total is at least the diagonal 1/8.
  double low = 1;
  for (int f = 0; f < 3; ++f)
    for (const auto &r : sweeps[f])
      for (Chirality S : kChiralities) low = std::min(low, r.total_of(S));
  c.require(low >= 0.125 - 1e-6, "(d) min Grover total " + sci(low));

  std::ostringstream s;
  s << "asym " << sci(asym) << ", P34X1 S-spread " << sci(spread) << " argmax theta "
    << sci(grid[arg]) << ", X3 R/L at 0 " << sci(rl) << ", min Grover total " << sci(low);
  return c.done(s.str());
}

Outcome classification_round_trip() {
  Check c;
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> ang(-kPi, kPi);
  const auto &forms = classification_forms();
  std::uniform_int_distribution<std::size_t> pick(0, forms.size() - 1);
  double worst = 0;
  const int count = 100000;
  for (int i = 0; i < count; ++i) {
    Mat4c A;
    if (i % 4 == 0) {
      A = coin_from_theta(kTheta[(i / 4) % 4], ang(rng)).entries;
    } else {
      A = form_member_angle(forms[pick(rng)], cplx(ang(rng), 0));
    }
    const FamilyWitness w = classify(A);
    worst = std::max(worst, (w.reconstruct() - A).cwiseAbs().maxCoeff());
  }
  c.require(worst < 1e-10, "reconstruction error " + sci(worst));

  const Family rational_families[] = {Family::X1, Family::X2, Family::X3, Family::X4,
                                      Family::Y1, Family::Y2, Family::Y3, Family::Y4,
                                      Family::Z1, Family::Z2, Family::Z3, Family::Z4,
                                      Family::P34X1, Family::P24Y1, Family::P23Z1};
  std::uniform_int_distribution<long> num(1, 100000), sgn(0, 1);
  int exact = 0;
  const int rational = 2000;
  for (int i = 0; i < rational; ++i) {
    mpq_class r(num(rng) * (sgn(rng) ? 1 : -1), num(rng));
    r.canonicalize();
    const RationalCoin rc = coin_rational(rational_families[i % 15], r, sgn(rng) ? 1 : -1);
    exact += rc.exactly_orthogonal();
  }
  c.require(exact == rational, "rational coins not exactly orthogonal: " +
                                   std::to_string(rational - exact));
  return c.done("max reconstruction error " + sci(worst) + " over " + std::to_string(count) +
                " coins, " + std::to_string(exact) + "/" + std::to_string(rational) +
                " rational coins exactly orthogonal");
}

Outcome matrix_space() {
  Check c;
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  double worst_dec = 0;
  for (int i = 0; i < 10000; ++i) {
    Mat4 A = Mat4::Zero();
    std::array<double, 10> w{};
    for (int k = 0; k < 10; ++k) {
      w[k] = g(rng);
      A += w[k] * perm_matrix(perm_basis()[k]).real();
    }
    const auto d = decompose_linear_sum(A);
    worst_dec = std::max(worst_dec, d.residual);
    for (int k = 0; k < 10; ++k) worst_dec = std::max(worst_dec, std::abs(d.coeffs[k] - w[k]));
  }
  c.require(worst_dec < 1e-12, "decomposition residual " + sci(worst_dec));

  // Row-sum sign on orthogonal members: angle coins and the C families here,
  // the variety solutions below.
  int signs = 0, signs_ok = 0;
  std::uniform_real_distribution<double> ang(-kPi, kPi);
  for (int i = 0; i < 4000; ++i) {
    const Mat4 A = coin_from_theta(kTheta[i % 4], ang(rng)).entries.real();
    const auto s = hadamard_row_sum_check(A);
    ++signs;
    signs_ok += s.has_value() && (A.rowwise().sum().array() - *s).abs().maxCoeff() < 1e-10;
  }

  const auto two = two_permutation_exhaustive();
  c.require(two.pairs == 552, "two-permutation pairs " + std::to_string(two.pairs));
  c.require(two.nontrivial == 0, "nontrivial two-permutation solutions");

  double off_block = 0;
  int members = 0;
  for (CVariant v : {CVariant::C1, CVariant::C2})
    for (int br : {1, -1})
      for (int i = 1; i < 200; ++i) {
        const double lo = v == CVariant::C1 ? -1.0 : -1.0 / 3;
        const double hi = v == CVariant::C1 ? 1.0 / 3 : 1.0;
        const double c2 = lo + (hi - lo) * i / 200.0;
        const double special = v == CVariant::C1 ? -1.0 : 1.0;
        if (std::abs(c2) < 1e-9 || std::abs(c2 - special) < 1e-9) continue;
        const CFamilyMember f = theorem217_family(v, c2, br);
        ++members;
        c.require(is_orthogonal(f.matrix, 1e-12), "C member not orthogonal");
        c.require(!is_permutative(f.matrix, 1e-9), "C member permutative at c2 " + sci(c2));
        const Mat4 K = hadamard_conjugate(f.matrix);
        for (int k = 1; k < 4; ++k)
          off_block = std::max({off_block, std::abs(K(0, k)), std::abs(K(k, 0))});
        c.require(std::abs(std::abs(K(0, 0)) - 1) < 1e-12, "H-conjugate corner not +-1");
        c.require((K.bottomRightCorner<3, 3>() - f.block).cwiseAbs().maxCoeff() < 1e-12,
                  "H-conjugate 3x3 block mismatch");
        const auto s = hadamard_row_sum_check(f.matrix);
        ++signs;
        signs_ok += s.has_value() && *s == f.corner_sign;
      }
  c.require(off_block < 1e-12, "off-block mass " + sci(off_block));

  // Variety searches: the pure-permutative spaces stay permutative, and the
  // row-sum sign holds on every converged orthogonal solution.
  const std::vector<std::vector<int>> pure = {
      {1, 2}, {1, 3}, {1, 4}, {1, 5}, {2, 3}, {2, 4}, {2, 5}, {3, 4}, {3, 5}, {4, 5},
      {1, 2, 3}, {1, 2, 4}, {1, 3, 5}, {1, 4, 5}, {2, 3, 5}, {2, 4, 5}, {3, 4, 5}};
  double defect = 0;
  std::size_t solutions = 0;
  for (const auto &sp : pure) {
    const auto rep = variety_spot_check(subspace_label(sp), subspace_span(sp), 10000, 7);
    solutions += rep.converged;
    defect = std::max(defect, rep.max_row_sum_defect);
    c.require(rep.converged > 0, rep.space + " produced no solutions");
    c.require(rep.count(Structure::Permutative) == rep.converged,
              rep.space + " has non-permutative solutions");
  }
  const auto l134 = variety_spot_check("L1+L3+L4", subspace_span({1, 3, 4}), 10000, 7);
  solutions += l134.converged;
  defect = std::max(defect, l134.max_row_sum_defect);
  c.require(l134.count(Structure::Other) == 0, "L1+L3+L4 has unstructured solutions");
  c.require(defect < 1e-10, "row-sum defect " + sci(defect));
  c.require(signs_ok == signs, "row-sum sign failures " + std::to_string(signs - signs_ok));

  std::ostringstream s;
  s << "decomposition " << sci(worst_dec) << ", row-sum sign " << signs_ok << "/" << signs
    << " + " << solutions << " variety solutions (defect " << sci(defect) << "), "
    << two.pairs << " pairs with " << two.nontrivial << " nontrivial, " << members
    << " C members off-block " << sci(off_block);
  return c.done(s.str());
}

Outcome group_chains() {
  Check c;
  const auto chains = theorem_chains();
  std::size_t total = 0;
  double lowest = 1;
  for (const auto &ch : chains) {
    const ClosureReport r = group_product_closure_sample(ch.id, 10000, 3);
    total += r.samples;
    lowest = std::min(lowest, r.fraction());
    c.require(r.samples == 10000 && r.fraction() == 1.0, ch.id + " closure " + sci(r.fraction()));
  }

  // Negative control: an X1 member times a Y1 member leaves the permutative set.
  const double q = std::sqrt(2.0);
  Mat4 A, B;
  A << 2. / 5, -2. / 5, 4. / 5, 1. / 5, -2. / 5, 2. / 5, 1. / 5, 4. / 5, 4. / 5, 1. / 5, -2. / 5,
      2. / 5, 1. / 5, 4. / 5, 2. / 5, -2. / 5;
  B << q / 3, 2. / 3, -q / 3, 1. / 3, 2. / 3, -q / 3, 1. / 3, q / 3, -q / 3, 1. / 3, q / 3,
      2. / 3, 1. / 3, q / 3, 2. / 3, -q / 3;
  c.require(match_form(A.cast<cplx>(), FamilyForm{Letter::X, 1, {}}, 1e-12).has_value(),
            "control A not in X1");
  c.require(match_form(B.cast<cplx>(), FamilyForm{Letter::Y, 1, {}}, 1e-12).has_value(),
            "control B not in Y1");
  const Mat4 AB = A * B;
  c.require(is_orthogonal(AB, 1e-12), "control product not orthogonal");
  const bool control_fails = !is_permutative(AB, 1e-6);
  c.require(control_fails, "control product is permutative");
  return c.done(std::to_string(chains.size()) + " chains, " + std::to_string(total) +
                " samples, lowest closure " + sci(lowest) + ", cross-family product " +
                (control_fails ? "not permutative" : "permutative"));
}

}  // namespace

int main() {
  const std::vector<std::pair<const char *, std::function<Outcome()>>> criteria = {
      {"one-eighth diagonal", one_eighth},
      {"oracle equivalence", oracle_equivalence},
      {"spectral residuals", spectral_residuals},
      {"c-table equivalence", c_table},
      {"sweep shapes", sweep_shapes},
      {"classification round trip", classification_round_trip},
      {"matrix-space suite", matrix_space},
      {"group chains", group_chains},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception &e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failed += !o.ok;
    std::printf("criterion %zu %-26s %s  %s (%.1f s)\n", i + 1, criteria[i].first,
                o.ok ? "PASS" : "FAIL", o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%zu criteria, %d failed\n", criteria.size(), failed);
  return failed == 0 ? 0 : 1;
}
