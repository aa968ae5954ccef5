// gwalk: command-line front end for coin construction, matrix-space analysis,
// walk simulation, spectral dumps and localization sweeps.
//
// Exit codes: 0 success, 2 validation error, 3 numerical flag (output written).

#include "gwalk/io.hpp"
#include "gwalk/localize.hpp"
#include "gwalk/space.hpp"
#include "gwalk/spectral.hpp"
#include "gwalk/walk.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <sstream>

using namespace gwalk;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitNumeric = 3;

struct Options {
  std::string family = "p24y1";
  std::optional<double> theta;
  std::string r;
  int branch = 1;
  int N = 5;
  long T = 1000;
  std::string S = "R", Sprime = "R";
  int grid = 25;
  int quad_M = 512;
  int quad_max_M = 2048;
  int points = 400;
  std::uint64_t seed = 1;
  std::string out;
  std::string format = "json";
  int threads = 0;
  std::string in;       // matrix file, "-" for stdin
  std::string matrix;   // matrix given inline
  std::vector<std::string> at{"0,0"};
  bool snapshot = false;
  bool coefficients = false;
  std::string variant = "C1";
  double c2 = 0.0;
  std::string space = "1,3,4";
  bool all_S = false;
};

// Output goes to --out or stdout.
class Sink {
 public:
  explicit Sink(const std::string &path) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw ValidationError("cannot open output file " + path);
    }
  }
  std::ostream &os() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

void emit_json(const Options &o, const Json &j) {
  Sink s(o.out);
  s.os() << j.dump(2) << '\n';
}

mpq_class parse_rational(const std::string &text) {
  mpq_class q;
  if (text.empty() || q.set_str(text, 10) != 0) throw ValidationError("--r expects NUM/DEN");
  if (q.get_den() == 0) throw ValidationError("--r has a zero denominator");
  q.canonicalize();
  return q;
}

Family theta_family(const Options &o) {
  const Family f = family_from_name(o.family);
  if (!is_theta_family(f)) throw ValidationError("--family must be p34x1, p24y1, p23z1 or x3");
  return f;
}

double need_theta(const Options &o) {
  if (!o.theta) throw ValidationError("--theta is required");
  if (!(*o.theta > -kPi && *o.theta < kPi)) throw ValidationError("--theta must lie in (-pi, pi)");
  return *o.theta;
}

QuadratureSpec quad_of(const Options &o) {
  QuadratureSpec q;
  q.M = o.quad_M;
  q.max_M = o.quad_max_M;
  q.validate();
  return q;
}

Mat4c read_matrix(const Options &o) {
  std::string text = o.matrix;
  if (text.empty()) {
    if (o.in.empty() || o.in == "-") {
      text.assign(std::istreambuf_iterator<char>(std::cin), {});
    } else {
      std::ifstream f(o.in);
      if (!f) throw ValidationError("cannot read " + o.in);
      text.assign(std::istreambuf_iterator<char>(f), {});
    }
  }
  return parse_matrix(text);
}

Mat4 real_part(const Mat4c &A) {
  if (A.imag().cwiseAbs().maxCoeff() > 0) throw ValidationError("a real matrix is required");
  return A.real();
}

std::pair<int, int> parse_site(const std::string &s) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) throw ValidationError("--at expects x,y");
  try {
    std::size_t a = 0, b = 0;
    const int x = std::stoi(s.substr(0, comma), &a);
    const int y = std::stoi(s.substr(comma + 1), &b);
    if (a != comma || b != s.size() - comma - 1) throw ValidationError("--at expects x,y");
    return {x, y};
  } catch (const std::logic_error &) {
    throw ValidationError("--at expects integers x,y");
  }
}

Json matrix_json(const Mat4 &m) {
  Json rows = Json::array();
  for (int i = 0; i < 4; ++i) {
    Json row = Json::array();
    for (int j = 0; j < 4; ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

void write_matrix_csv(std::ostream &os, const Mat4c &m) {
  const bool complex = m.imag().cwiseAbs().maxCoeff() > 0;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      if (j) os << ',';
      os << format_double(m(i, j).real());
      if (complex) os << (m(i, j).imag() < 0 ? "" : "+") << format_double(m(i, j).imag()) << 'i';
    }
    os << '\n';
  }
}

// ---------------------------------------------------------------- coin

int coin_gen(const Options &o) {
  const Family f = family_from_name(o.family);
  Sink s(o.out);
  if (!o.r.empty()) {
    if (o.theta) throw ValidationError("give either --theta or --r");
    const RationalCoin rc = coin_rational(f, parse_rational(o.r), o.branch);
    if (o.format == "csv") write_matrix_csv(s.os(), rc.to_coin().entries);
    else s.os() << rational_coin_to_json(rc).dump(2) << '\n';
    return 0;
  }
  if (!is_theta_family(f)) throw ValidationError("family " + o.family + " needs --r");
  if (!o.theta) throw ValidationError("--theta or --r is required");
  const Coin c = coin_from_theta(f, *o.theta);
  if (o.format == "csv") write_matrix_csv(s.os(), c.entries);
  else s.os() << coin_to_json(c).dump(2) << '\n';
  return 0;
}

int coin_classify(const Options &o) {
  const Mat4c A = read_matrix(o);
  const FamilyWitness w = classify(A);
  Json j;
  j["family"] = family_name(w.family);
  j["form"] = w.form.name();
  j["kind"] = w.kind == BlockKind::M ? "M" : "N";
  j["sign"] = w.sign;
  j["a"] = Json::array({w.a.real(), w.a.imag()});
  j["b"] = Json::array({w.b.real(), w.b.imag()});
  j["real_params"] = w.real_params;
  j["corner"] = w.corner;
  j["constraint_residual"] = w.constraint_residual();
  j["reconstruction_error"] = (w.reconstruct() - A).cwiseAbs().maxCoeff();
  emit_json(o, j);
  return 0;
}

int coin_verify(const Options &o) {
  Json j;
  if (!o.r.empty()) {
    const RationalCoin rc = coin_rational(family_from_name(o.family), parse_rational(o.r), o.branch);
    j["exactly_orthogonal"] = rc.exactly_orthogonal();
    j["permutative"] = is_permutative(rc.to_coin().entries, 0.0);
    emit_json(o, j);
    return rc.exactly_orthogonal() ? 0 : kExitNumeric;
  }
  const Mat4c A = read_matrix(o);
  const double orth = (A.adjoint() * A - Mat4c::Identity()).cwiseAbs().maxCoeff();
  j["orthogonal"] = is_orthogonal(A, kUserTol);
  j["orthogonality_residual"] = orth;
  j["permutative"] = is_permutative(A, kUserTol);
  emit_json(o, j);
  return 0;
}

// ---------------------------------------------------------------- space

int space_decompose(const Options &o) {
  const Mat4 A = real_part(read_matrix(o));
  const auto d = decompose_linear_sum(A);
  Json j = decomposition_to_json(d, hadamard_row_sum_check(A));
  if (d.residual <= 1e-10) j["subspaces"] = subspace_membership(A).form();
  else j["subspaces"] = nullptr;
  emit_json(o, j);
  return 0;
}

int space_sq_check(const Options &o) {
  const Mat4 A = real_part(read_matrix(o));
  Eigen::Matrix4i e;
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 4; ++k) {
      if (A(i, k) != 0.0 && A(i, k) != 1.0) throw ValidationError("a (0,1) pattern is required");
      e(i, k) = static_cast<int>(A(i, k));
    }
  const ZeroOnePattern p(e);
  Json j;
  j["quadrangular"] = quadrangular(p);
  j["strongly_quadrangular"] = strongly_quadrangular(p);
  emit_json(o, j);
  return 0;
}

int space_partition(const Options &o) {
  Json classes = Json::array();
  for (const auto &cls : six_class_partition()) {
    Json c = Json::array();
    for (const auto &p : cls) c.push_back(p.cycles());
    classes.push_back(c);
  }
  emit_json(o, Json{{"classes", classes}});
  return 0;
}

int space_c_family(const Options &o) {
  CVariant v;
  if (o.variant == "C1" || o.variant == "c1") v = CVariant::C1;
  else if (o.variant == "C2" || o.variant == "c2") v = CVariant::C2;
  else throw ValidationError("--variant must be C1 or C2");
  const CFamilyMember m = theorem217_family(v, o.c2, o.branch);
  const Mat4 H = hadamard_conjugate(m.matrix);
  Json j;
  j["variant"] = o.variant;
  j["c2"] = m.c2;
  j["branch"] = m.branch;
  j["a4"] = m.a4;
  j["matrix"] = matrix_json(m.matrix);
  j["hadamard_conjugate"] = matrix_json(H);
  j["corner_sign"] = m.corner_sign;
  j["orthogonal"] = is_orthogonal(m.matrix, 1e-12);
  j["permutative"] = is_permutative(m.matrix, 1e-12);
  emit_json(o, j);
  return 0;
}

int space_variety(const Options &o) {
  std::vector<int> which;
  std::stringstream ss(o.space);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    int k = 0;
    try {
      k = std::stoi(tok);
    } catch (const std::logic_error &) {
      throw ValidationError("--space expects indices like 1,3,4");
    }
    if (k < 1 || k > 5) throw ValidationError("subspace indices are 1..5");
    which.push_back(k);
  }
  if (which.empty()) throw ValidationError("--space is empty");
  const auto rep = variety_spot_check(subspace_label(which), subspace_span(which),
                                      static_cast<std::size_t>(o.points), o.seed);
  Json j;
  j["space"] = rep.space;
  j["trials"] = rep.trials;
  j["converged"] = rep.converged;
  for (Structure s : {Structure::Permutative, Structure::DirectSum,
                      Structure::HadamardDirectSum, Structure::Other})
    j["counts"][structure_name(s)] = rep.count(s);
  j["max_row_sum_defect"] = rep.max_row_sum_defect;
  emit_json(o, j);
  return 0;
}

// ---------------------------------------------------------------- walk

int walk_simulate(const Options &o) {
  const Family f = theta_family(o);
  const Coin C = coin_from_theta(f, need_theta(o));
  const Chirality S = chirality_from_name(o.S);
  const Lattice lat(o.N);
  if (o.T < 1) throw ValidationError("--T must be >= 1");
  std::vector<std::pair<int, int>> sites;
  for (const auto &a : o.at) {
    sites.push_back(parse_site(a));
    if (!lat.contains(sites.back().first, sites.back().second))
      throw ValidationError("--at site outside Z_N");
  }
  Sink s(o.out);
  if (o.format == "csv") {
    write_trajectory_csv(s.os(), C.entries.real(), o.N, S, o.T, sites);
    return 0;
  }
  // Time averages at every site in one pass.
  const Walker w(C);
  WalkState st = initial_state(o.N, S);
  std::vector<std::array<double, 4>> acc(sites.size());
  for (long t = 0; t < o.T; ++t) {
    for (std::size_t i = 0; i < sites.size(); ++i) {
      const auto p = component_probabilities(st, sites[i].first, sites[i].second);
      for (int k = 0; k < 4; ++k) acc[i][k] += p[k];
    }
    if (t + 1 < o.T) st = w.step(st);
  }
  Json j;
  j["family"] = family_name(f);
  j["theta"] = *o.theta;
  j["N"] = o.N;
  j["T"] = o.T;
  j["S"] = std::string(1, chirality_char(S));
  Json rows = Json::array();
  for (std::size_t i = 0; i < sites.size(); ++i) {
    Json r;
    r["x"] = sites[i].first;
    r["y"] = sites[i].second;
    double tot = 0;
    for (Chirality Sp : kChiralities) {
      const double v = acc[i][chirality_index(Sp) - 1] / double(o.T);
      r["pbar"][std::string(1, chirality_char(Sp))] = v;
      tot += v;
    }
    r["pbar_total"] = tot;
    rows.push_back(r);
  }
  j["sites"] = rows;
  if (sites.size() == 1 && sites[0] == std::pair{0, 0}) {
    const auto ex = finite_N_pbar(C, S, o.N);
    j["spectral_pbar_total"] = ex[0] + ex[1] + ex[2] + ex[3];
  }
  if (o.snapshot) j["state"] = state_to_json(st, o.T - 1);
  s.os() << j.dump(2) << '\n';
  return 0;
}

int walk_spectrum(const Options &o) {
  const Family f = theta_family(o);
  const Coin C = coin_from_theta(f, need_theta(o));
  Lattice lat(o.N);
  Sink s(o.out);
  if (o.coefficients) write_coefficient_csv(s.os(), C, o.N);
  else write_spectrum_csv(s.os(), C, o.N);
  return 0;
}

// ---------------------------------------------------------------- localize

int localize_pair(const Options &o, bool total) {
  const Family f = theta_family(o);
  const double th = need_theta(o);
  const Chirality S = chirality_from_name(o.S);
  const auto r = localization_report(f, th, quad_of(o));
  const double v = total ? r.total_of(S) : r.at(S, chirality_from_name(o.Sprime));
  Sink s(o.out);
  if (o.format == "csv") {
    s.os() << "family,S," << (total ? "" : "Sprime,") << "theta,value,quad_M,converged\n";
    s.os() << family_name(f) << ',' << o.S << ',' << (total ? "" : o.Sprime + ",")
           << format_double(th) << ',' << format_double(v) << ',' << r.M << ','
           << (r.converged ? 1 : 0) << '\n';
  } else {
    Json j = report_to_json(r);
    j["S"] = o.S;
    if (!total) j["Sprime"] = o.Sprime;
    j["value"] = v;
    s.os() << j.dump(2) << '\n';
  }
  return r.converged ? 0 : kExitNumeric;
}

int localize_sweep(const Options &o) {
  const Family f = theta_family(o);
  if (o.points < 2) throw ValidationError("--points must be >= 2");
  const auto rows = sweep_theta(f, o.points, quad_of(o));
  Sink s(o.out);
  if (o.format == "csv") {
    std::optional<Chirality> only;
    if (!o.all_S) only = chirality_from_name(o.S);
    write_sweep_csv(s.os(), rows, only);
  } else {
    s.os() << sweep_to_json(rows).dump(2) << '\n';
  }
  for (const auto &r : rows)
    if (!r.converged) return kExitNumeric;
  return 0;
}

int localize_theorem36(const Options &o) {
  if (o.grid < 2) throw ValidationError("--grid must be >= 2");
  const auto rep = theorem36_check(o.grid, quad_of(o));
  Json j;
  j["grid"] = rep.grid;
  j["quad_M"] = o.quad_M;
  j["max_deviation"] = rep.max_deviation;
  j["worst"] = {{"family", family_name(rep.worst.family)},
                {"theta", rep.worst.theta},
                {"S", std::string(1, chirality_char(rep.worst.S))},
                {"value", rep.worst.value}};
  j["converged"] = rep.converged;
  j["passed"] = rep.passed();
  emit_json(o, j);
  return rep.passed() ? 0 : kExitNumeric;
}

const char *kExamples = R"(Examples:
  gwalk coin gen --family p24y1 --theta -1.5707963 --format json
  gwalk coin gen --family x3 --r 2/3 --format json
  gwalk coin classify --matrix "-0.5 0.5 0.5 0.5 0.5 -0.5 0.5 0.5 0.5 0.5 -0.5 0.5 0.5 0.5 0.5 -0.5"
  gwalk space decompose --matrix "-0.5 0.5 0.5 0.5 0.5 -0.5 0.5 0.5 0.5 0.5 -0.5 0.5 0.5 0.5 0.5 -0.5"
  gwalk space sq-check --matrix "1 1 0 0 1 1 0 0 0 0 1 1 0 0 1 1"
  gwalk space partition
  gwalk space c-family --variant C1 --c2 -0.5
  gwalk space variety --space 1,3,4 --points 200 --seed 7
  gwalk walk simulate --family p24y1 --theta 0.7 --N 5 --T 2000 --S R --at 0,0
  gwalk walk spectrum --family x3 --theta 0.4 --N 5
  gwalk localize pair --family p24y1 --theta 1.0 --S L --Sprime L
  gwalk localize total --family p34x1 --theta 1.5707963 --S R
  gwalk localize sweep --family p24y1 --points 400 --S R --format csv
  gwalk localize theorem36 --grid 25
)";

}  // namespace

int main(int argc, char **argv) {
  Options o;
  CLI::App app{"Generalized Grover coins: construction, classification, walks, localization",
               "gwalk"};
  app.footer(kExamples);
  app.require_subcommand(1);
  app.add_option("--threads", o.threads, "worker threads (default GW_THREADS or 1)");

  auto add_family = [&](CLI::App *c) {
    c->add_option("--family", o.family, "p34x1, p24y1, p23z1, x3 (or a subfamily tag with --r)");
  };
  auto add_theta = [&](CLI::App *c) { c->add_option("--theta", o.theta, "angle in (-pi, pi)"); };
  auto add_out = [&](CLI::App *c) {
    c->add_option("--out", o.out, "output path (default stdout)");
    c->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  };
  auto add_input = [&](CLI::App *c) {
    c->add_option("--in", o.in, "matrix file: 16 reals or JSON; '-' for stdin");
    c->add_option("--matrix", o.matrix, "matrix given inline");
  };
  auto add_quad = [&](CLI::App *c) {
    c->add_option("--quad-M", o.quad_M, "midpoint nodes per axis");
    c->add_option("--quad-max-M", o.quad_max_M, "refinement cap when M vs M/2 misses 1e-4");
  };

  std::function<int()> action;
  auto *coin = app.add_subcommand("coin", "coin construction and classification");
  coin->require_subcommand(1);
  auto *gen = coin->add_subcommand("gen", "build a family coin from --theta or --r");
  add_family(gen);
  add_theta(gen);
  gen->add_option("--r", o.r, "rational parameter NUM/DEN");
  gen->add_option("--branch", o.branch, "square-root branch for --r (+1 or -1)");
  add_out(gen);
  gen->callback([&] { action = [&] { return coin_gen(o); }; });
  auto *cls = coin->add_subcommand("classify", "find the subfamily of a permutative coin");
  add_input(cls);
  add_out(cls);
  cls->callback([&] { action = [&] { return coin_classify(o); }; });
  auto *ver = coin->add_subcommand("verify", "orthogonality and permutativity checks");
  add_input(ver);
  add_family(ver);
  ver->add_option("--r", o.r, "check the rational coin exactly");
  ver->add_option("--branch", o.branch, "square-root branch for --r");
  add_out(ver);
  ver->callback([&] { action = [&] { return coin_verify(o); }; });

  auto *space = app.add_subcommand("space", "linear sums of permutation matrices");
  space->require_subcommand(1);
  auto *dec = space->add_subcommand("decompose", "coefficients over the ten-element basis");
  add_input(dec);
  add_out(dec);
  dec->callback([&] { action = [&] { return space_decompose(o); }; });
  auto *sq = space->add_subcommand("sq-check", "(strongly) quadrangular test of a (0,1) pattern");
  add_input(sq);
  add_out(sq);
  sq->callback([&] { action = [&] { return space_sq_check(o); }; });
  auto *part = space->add_subcommand("partition", "six classes of H-orthogonal permutations");
  add_out(part);
  part->callback([&] { action = [&] { return space_partition(o); }; });
  auto *cf = space->add_subcommand("c-family", "non-permutative orthogonal members of L1+L3+L4");
  cf->add_option("--variant", o.variant, "C1 or C2");
  cf->add_option("--c2", o.c2, "free parameter");
  cf->add_option("--branch", o.branch, "square-root branch (+1 or -1)");
  add_out(cf);
  cf->callback([&] { action = [&] { return space_c_family(o); }; });
  auto *var = space->add_subcommand("variety", "orthogonal points of a subspace sum");
  var->add_option("--space", o.space, "subspace indices, e.g. 1,3,4");
  var->add_option("--points", o.points, "solver starts");
  var->add_option("--seed", o.seed, "random seed");
  add_out(var);
  var->callback([&] { action = [&] { return space_variety(o); }; });

  auto *walk = app.add_subcommand("walk", "direct simulation and spectra");
  walk->require_subcommand(1);
  auto *sim = walk->add_subcommand("simulate", "time-averaged probabilities by direct evolution");
  add_family(sim);
  add_theta(sim);
  sim->add_option("--N", o.N, "odd lattice side");
  sim->add_option("--T", o.T, "steps averaged");
  sim->add_option("--S", o.S, "initial chirality");
  sim->add_option("--at", o.at, "sites x,y (repeatable)");
  sim->add_flag("--snapshot", o.snapshot, "include the final amplitudes (json)");
  add_out(sim);
  sim->callback([&] { action = [&] { return walk_simulate(o); }; });
  auto *spectrum = walk->add_subcommand("spectrum", "eigenvalues of every block U_{n,m}");
  add_family(spectrum);
  add_theta(spectrum);
  spectrum->add_option("--N", o.N, "odd lattice side");
  spectrum->add_flag("--coefficients", o.coefficients, "dump class coefficients instead");
  spectrum->add_option("--out", o.out, "output path (default stdout)");
  spectrum->callback([&] { action = [&] { return walk_spectrum(o); }; });

  auto *loc = app.add_subcommand("localize", "infinite-lattice localization probabilities");
  loc->require_subcommand(1);
  auto *pair = loc->add_subcommand("pair", "P(psi_S(0), S')");
  add_family(pair);
  add_theta(pair);
  pair->add_option("--S", o.S, "initial chirality");
  pair->add_option("--Sprime", o.Sprime, "observed chirality");
  add_quad(pair);
  add_out(pair);
  pair->callback([&] { action = [&] { return localize_pair(o, false); }; });
  auto *tot = loc->add_subcommand("total", "P(psi_S) summed over S'");
  add_family(tot);
  add_theta(tot);
  tot->add_option("--S", o.S, "initial chirality");
  add_quad(tot);
  add_out(tot);
  tot->callback([&] { action = [&] { return localize_pair(o, true); }; });
  auto *sw = loc->add_subcommand("sweep", "totals on an open equidistant theta grid");
  add_family(sw);
  sw->add_option("--points", o.points, "grid points");
  sw->add_option("--S", o.S, "initial chirality for csv rows");
  sw->add_flag("--all-S", o.all_S, "csv rows for every initial chirality");
  add_quad(sw);
  add_out(sw);
  sw->callback([&] { action = [&] { return localize_sweep(o); }; });
  auto *t36 = loc->add_subcommand("theorem36", "diagonal values of the Grover families");
  t36->add_option("--grid", o.grid, "theta grid points");
  add_quad(t36);
  add_out(t36);
  t36->callback([&] { action = [&] { return localize_theorem36(o); }; });

  app.fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitValidation;
  }
  if (o.threads > 0) set_thread_count(o.threads);
  try {
    return action ? action() : 0;
  } catch (const ValidationError &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const NotOrthogonal &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const NotPermutative &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const NotInL &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  }
}
