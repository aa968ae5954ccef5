#include "gwalk/io.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <locale>
#include <ostream>
#include <sstream>

namespace gwalk {

std::string format_double(double v) {
  char buf[40];
  const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, r.ptr);
}

namespace {

Json mpz_json(const mpz_class &z) {
  if (z.fits_slong_p()) return Json(z.get_si());
  return Json(z.get_str());
}

Json rational_json(const mpq_class &q) { return Json::array({mpz_json(q.get_num()), mpz_json(q.get_den())}); }

mpz_class mpz_from(const Json &j) {
  if (j.is_number_integer()) return mpz_class(std::to_string(j.get<long long>()));
  if (j.is_string()) {
    mpz_class z;
    if (z.set_str(j.get<std::string>(), 10) != 0) throw ValidationError("bad integer in r");
    return z;
  }
  throw ValidationError("r must be [num, den] integers");
}

Json grid(const Mat4 &m) {
  Json rows = Json::array();
  for (int i = 0; i < 4; ++i) {
    Json row = Json::array();
    for (int j = 0; j < 4; ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

Mat4 grid_from(const Json &j) {
  if (!j.is_array() || j.size() != 4) throw ValidationError("expected a 4x4 array");
  Mat4 m;
  for (int i = 0; i < 4; ++i) {
    if (!j[i].is_array() || j[i].size() != 4) throw ValidationError("expected a 4x4 array");
    for (int k = 0; k < 4; ++k) {
      if (!j[i][k].is_number()) throw ValidationError("matrix entries must be numbers");
      m(i, k) = j[i][k].get<double>();
    }
  }
  if (!m.allFinite()) throw ValidationError("matrix entries must be finite");
  return m;
}

}  // namespace

Json coin_to_json(const Coin &c) {
  Json j;
  j["family"] = family_name(c.family);
  j["theta"] = c.theta ? Json(*c.theta) : Json(nullptr);
  j["r"] = c.r ? rational_json(*c.r) : Json(nullptr);
  j["entries_re"] = grid(c.entries.real());
  j["entries_im"] = grid(c.entries.imag());
  return j;
}

Coin coin_from_json(const Json &j) {
  if (!j.is_object() || !j.contains("entries_re"))
    throw ValidationError("coin JSON needs entries_re");
  Coin c;
  const Mat4 re = grid_from(j["entries_re"]);
  const Mat4 im = j.contains("entries_im") && !j["entries_im"].is_null()
                      ? grid_from(j["entries_im"])
                      : Mat4(Mat4::Zero());
  c.entries.real() = re;
  c.entries.imag() = im;
  if (j.contains("family") && j["family"].is_string())
    c.family = family_from_name(j["family"].get<std::string>());
  if (j.contains("theta") && j["theta"].is_number()) c.theta = j["theta"].get<double>();
  if (j.contains("r") && j["r"].is_array()) {
    if (j["r"].size() != 2) throw ValidationError("r must be [num, den]");
    const mpz_class num = mpz_from(j["r"][0]), den = mpz_from(j["r"][1]);
    if (den == 0) throw ValidationError("r has a zero denominator");
    mpq_class q(num, den);
    q.canonicalize();
    c.r = q;
  }
  return c;
}

Json rational_coin_to_json(const RationalCoin &c) {
  Json j;
  j["family"] = family_name(c.family);
  j["theta"] = nullptr;
  j["r"] = rational_json(c.r);
  j["branch"] = c.branch;
  Json rows = Json::array();
  for (const auto &row : c.entries) {
    Json r = Json::array();
    for (const auto &q : row) r.push_back(rational_json(q));
    rows.push_back(r);
  }
  j["entries"] = rows;
  const Coin f = c.to_coin();
  j["entries_re"] = grid(f.entries.real());
  j["entries_im"] = grid(f.entries.imag());
  return j;
}

Json decomposition_to_json(const LinearSumDecomposition &d, std::optional<int> row_sum_sign) {
  Json j;
  const auto names = basis_names();
  j["basis_order"] = Json(std::vector<std::string>(names.begin(), names.end()));
  j["coeffs"] = Json(std::vector<double>(d.coeffs.begin(), d.coeffs.end()));
  j["residual"] = d.residual;
  j["row_sum_sign"] = row_sum_sign ? Json(*row_sum_sign) : Json(nullptr);
  return j;
}

Mat4c parse_matrix(const std::string &text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) throw ValidationError("empty matrix input");
  if (text[first] == '[' || text[first] == '{') {
    Json j;
    try {
      j = Json::parse(text);
    } catch (const Json::parse_error &e) {
      throw ValidationError(std::string("malformed JSON: ") + e.what());
    }
    if (j.is_object()) return coin_from_json(j).entries;
    return grid_from(j).cast<cplx>();
  }
  std::istringstream in(text);
  in.imbue(std::locale::classic());
  std::vector<double> v;
  std::string tok;
  while (in >> tok) {
    double x = 0;
    const auto r = std::from_chars(tok.data(), tok.data() + tok.size(), x);
    if (r.ec != std::errc() || r.ptr != tok.data() + tok.size() || !std::isfinite(x))
      throw ValidationError("not a real number: " + tok);
    v.push_back(x);
  }
  if (v.size() != 16) throw ValidationError("expected 16 reals, got " + std::to_string(v.size()));
  Mat4 m;
  for (int i = 0; i < 16; ++i) m(i / 4, i % 4) = v[i];
  return m.cast<cplx>();
}

void write_sweep_csv(std::ostream &os, const std::vector<LocalizationReport> &rows,
                     std::optional<Chirality> only) {
  os << "family,S,theta,p_total";
  for (Chirality a : kChiralities)
    for (Chirality b : kChiralities) os << ",p_" << chirality_char(a) << chirality_char(b);
  os << ",quad_M\n";
  for (const auto &r : rows)
    for (Chirality S : kChiralities) {
      if (only && *only != S) continue;
      os << family_name(r.family) << ',' << chirality_char(S) << ',' << format_double(r.theta)
         << ',' << format_double(r.total_of(S));
      for (const auto &row : r.pair)
        for (double p : row) os << ',' << format_double(p);
      os << ',' << r.M << '\n';
    }
}

Json report_to_json(const LocalizationReport &r) {
  Json j;
  j["family"] = family_name(r.family);
  j["theta"] = r.theta;
  Json pairs = Json::object(), totals = Json::object();
  for (Chirality S : kChiralities) {
    Json row = Json::object();
    for (Chirality Sp : kChiralities) row[std::string(1, chirality_char(Sp))] = r.at(S, Sp);
    pairs[std::string(1, chirality_char(S))] = row;
    totals[std::string(1, chirality_char(S))] = r.total_of(S);
  }
  j["pairs"] = pairs;
  j["totals"] = totals;
  j["quad_M"] = r.M;
  j["converged"] = r.converged;
  j["max_delta"] = r.max_delta;
  j["fallback_nodes"] = r.fallback_nodes;
  return j;
}

Json sweep_to_json(const std::vector<LocalizationReport> &rows) {
  Json a = Json::array();
  for (const auto &r : rows) a.push_back(report_to_json(r));
  return a;
}

void write_trajectory_csv(std::ostream &os, const Mat4 &C, int N, Chirality S, long T,
                          const std::vector<std::pair<int, int>> &sites) {
  const Lattice lat(N);
  for (auto [x, y] : sites)
    if (!lat.contains(x, y)) throw ValidationError("site outside Z_N");
  const Walker w(C);
  WalkState s = initial_state(N, S);
  os << "t,x,y,P_t\n";
  for (long t = 0; t < T; ++t) {
    for (auto [x, y] : sites)
      os << t << ',' << x << ',' << y << ',' << format_double(probability_at(s, x, y)) << '\n';
    if (t + 1 < T) s = w.step(s);
  }
}

Json state_to_json(const WalkState &s, long t) {
  Json j;
  j["N"] = s.N;
  j["t"] = t;
  Json a = Json::array();
  for (Eigen::Index i = 0; i < s.amp.size(); ++i)
    a.push_back(Json::array({s.amp(i).real(), s.amp(i).imag()}));
  j["amplitudes"] = a;
  return j;
}

}  // namespace gwalk
