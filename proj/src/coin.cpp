#include "gwalk/coin.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <random>
#include <set>

namespace gwalk {

// ---------------------------------------------------------------- S4

Permutation4::Permutation4() : map_{1, 2, 3, 4} {}

Permutation4::Permutation4(const std::array<int, 4> &mapping) : map_(mapping) {
  std::array<bool, 4> seen{};
  for (int v : map_) {
    if (v < 1 || v > 4 || seen[v - 1])
      throw ValidationError("permutation mapping is not a bijection on {1,2,3,4}");
    seen[v - 1] = true;
  }
}

Permutation4 Permutation4::from_cycles(std::string_view text) {
  std::array<int, 4> img{1, 2, 3, 4};
  std::array<bool, 4> used{};
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty() || s == "id" || s == "e" || s == "()") return Permutation4{};
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] != '(') throw ValidationError("bad cycle notation: " + std::string(text));
    std::size_t j = s.find(')', i);
    if (j == std::string::npos) throw ValidationError("unclosed cycle: " + std::string(text));
    std::vector<int> cyc;
    for (std::size_t k = i + 1; k < j; ++k) {
      int v = s[k] - '0';
      if (v < 1 || v > 4 || used[v - 1])
        throw ValidationError("bad cycle notation: " + std::string(text));
      used[v - 1] = true;
      cyc.push_back(v);
    }
    for (std::size_t k = 0; k < cyc.size(); ++k) img[cyc[k] - 1] = cyc[(k + 1) % cyc.size()];
    i = j + 1;
  }
  return Permutation4{img};
}

Permutation4 Permutation4::inverse() const {
  std::array<int, 4> inv{};
  for (int i = 0; i < 4; ++i) inv[map_[i] - 1] = i + 1;
  return Permutation4{inv};
}

std::string Permutation4::cycles() const {
  std::string out;
  std::array<bool, 4> seen{};
  for (int start = 1; start <= 4; ++start) {
    if (seen[start - 1] || map_[start - 1] == start) continue;
    out += '(';
    for (int v = start; !seen[v - 1]; v = map_[v - 1]) {
      seen[v - 1] = true;
      out += char('0' + v);
    }
    out += ')';
  }
  return out.empty() ? "id" : out;
}

PermMatrix::PermMatrix(const Eigen::Matrix4i &entries) : e_(entries) {
  for (int i = 0; i < 4; ++i) {
    int rs = 0, cs = 0;
    for (int j = 0; j < 4; ++j) {
      if (e_(i, j) != 0 && e_(i, j) != 1) throw ValidationError("entries must be 0 or 1");
      rs += e_(i, j);
      cs += e_(j, i);
    }
    if (rs != 1 || cs != 1) throw ValidationError("need exactly one 1 per row and column");
  }
}

Permutation4 PermMatrix::permutation() const {
  std::array<int, 4> img{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (e_(i, j) == 1) img[i] = j + 1;
  return Permutation4{img};
}

PermMatrix perm_matrix(const Permutation4 &pi) {
  Eigen::Matrix4i e = Eigen::Matrix4i::Zero();
  for (int i = 1; i <= 4; ++i) e(i - 1, pi(i) - 1) = 1;
  return PermMatrix{e};
}

Mat4 perm_real(std::string_view cycles) {
  return perm_matrix(Permutation4::from_cycles(cycles)).real();
}

std::vector<Permutation4> all_permutations() {
  std::array<int, 4> a{1, 2, 3, 4};
  std::vector<Permutation4> out;
  do {
    out.emplace_back(a);
  } while (std::next_permutation(a.begin(), a.end()));
  return out;
}

std::vector<Permutation4> one_plus_p3() {
  std::vector<Permutation4> out;
  for (const auto &p : all_permutations())
    if (p(1) == 1) out.push_back(p);
  return out;
}

// ---------------------------------------------------------------- names

namespace {

const std::array<std::pair<Family, const char *>, 16> kFamilyNames{{
    {Family::P34X1, "P34X1"}, {Family::P24Y1, "P24Y1"}, {Family::P23Z1, "P23Z1"},
    {Family::X1, "X1"},       {Family::X2, "X2"},       {Family::X3, "X3"},
    {Family::X4, "X4"},       {Family::Y1, "Y1"},       {Family::Y2, "Y2"},
    {Family::Y3, "Y3"},       {Family::Y4, "Y4"},       {Family::Z1, "Z1"},
    {Family::Z2, "Z2"},       {Family::Z3, "Z3"},       {Family::Z4, "Z4"},
    {Family::RAW, "RAW"},
}};

char letter_char(Letter l) { return l == Letter::X ? 'X' : (l == Letter::Y ? 'Y' : 'Z'); }

Family subfamily_tag(Letter l, int k) {
  static const Family tags[3][4] = {{Family::X1, Family::X2, Family::X3, Family::X4},
                                    {Family::Y1, Family::Y2, Family::Y3, Family::Y4},
                                    {Family::Z1, Family::Z2, Family::Z3, Family::Z4}};
  return tags[static_cast<int>(l)][k - 1];
}

}  // namespace

std::string family_name(Family f) {
  for (const auto &[tag, name] : kFamilyNames)
    if (tag == f) return name;
  return "RAW";
}

Family family_from_name(std::string_view name) {
  std::string up;
  for (char c : name) up.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  for (const auto &[tag, n] : kFamilyNames)
    if (up == n) return tag;
  throw ValidationError("unknown family: " + std::string(name));
}

bool is_theta_family(Family f) {
  return f == Family::P34X1 || f == Family::P24Y1 || f == Family::P23Z1 || f == Family::X3;
}

std::string FamilyForm::name() const {
  std::string out;
  if (!(left == Permutation4{})) {
    std::string c = left.cycles();
    out += 'P';
    for (char ch : c)
      if (std::isdigit(static_cast<unsigned char>(ch))) out += ch;
  }
  out += letter_char(letter);
  out += char('0' + k);
  return out;
}

FamilyForm FamilyForm::parse(std::string_view text) {
  FamilyForm f;
  std::string s(text);
  std::size_t i = 0;
  if (!s.empty() && (s[0] == 'P' || s[0] == 'p')) {
    std::string digits;
    for (i = 1; i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])); ++i) digits += s[i];
    f.left = Permutation4::from_cycles("(" + digits + ")");
    if (f.left(1) != 1) throw ValidationError("left multiplier must fix 1: " + s);
  }
  if (i + 2 != s.size()) throw ValidationError("bad family form: " + s);
  char l = static_cast<char>(std::toupper(static_cast<unsigned char>(s[i])));
  if (l == 'X') f.letter = Letter::X;
  else if (l == 'Y') f.letter = Letter::Y;
  else if (l == 'Z') f.letter = Letter::Z;
  else throw ValidationError("bad family letter: " + s);
  f.k = s[i + 1] - '0';
  if (f.k < 1 || f.k > 4) throw ValidationError("bad subfamily index: " + s);
  return f;
}

Permutation4 conjugator_of(Letter letter) {
  switch (letter) {
    case Letter::X: return Permutation4{};
    case Letter::Y: return Permutation4::from_cycles("(23)");
    case Letter::Z: return Permutation4::from_cycles("(24)");
  }
  return Permutation4{};
}

// ---------------------------------------------------------------- blocks

Mat4c block_matrix(BlockKind kind, int s, cplx a, cplx b) {
  const cplx sb = double(s) - b;
  Mat4c m;
  if (kind == BlockKind::M) {
    m << a, -a, b, sb,
        -a, a, sb, b,
        b, sb, -a, a,
        sb, b, a, -a;
  } else {
    m << b, sb, a, -a,
        sb, b, -a, a,
        a, -a, sb, b,
        -a, a, b, sb;
  }
  return m;
}

Mat4c form_member(const FamilyForm &form, cplx a, cplx b) {
  const Mat4c L = perm_matrix(form.left).complex();
  const Mat4c C = perm_matrix(conjugator_of(form.letter)).complex();
  return L * C * block_matrix(kind_of(form.k), sign_of(form.k), a, b) * C;
}

Mat4c form_member_angle(const FamilyForm &form, cplx phi) {
  const double s = sign_of(form.k);
  return form_member(form, std::sin(phi) / 2.0, s * (1.0 + std::cos(phi)) / 2.0);
}

// ---------------------------------------------------------------- coins

Coin raw_coin(const Mat4 &m) {
  Coin c;
  c.entries = m.cast<cplx>();
  return c;
}

Coin raw_coin(const Mat4c &m) {
  Coin c;
  c.entries = m;
  return c;
}

Coin build_permutative(const std::array<cplx, 4> &x_row, const PermMatrix &P,
                       const PermMatrix &Q, const PermMatrix &R) {
  Eigen::RowVector4cd x;
  x << x_row[0], x_row[1], x_row[2], x_row[3];
  Coin c;
  c.entries.row(0) = x;
  c.entries.row(1) = x * P.complex();
  c.entries.row(2) = x * Q.complex();
  c.entries.row(3) = x * R.complex();
  return c;
}

FamilyForm theta_family_form(Family f) {
  switch (f) {
    case Family::P34X1: return FamilyForm{Letter::X, 1, Permutation4::from_cycles("(34)")};
    case Family::P24Y1: return FamilyForm{Letter::Y, 1, Permutation4::from_cycles("(24)")};
    case Family::P23Z1: return FamilyForm{Letter::Z, 1, Permutation4::from_cycles("(23)")};
    case Family::X3: return FamilyForm{Letter::X, 3, Permutation4{}};
    default: break;
  }
  throw ValidationError("not a theta family: " + family_name(f));
}

Coin coin_from_theta(Family family, double theta) {
  if (!is_theta_family(family)) throw ValidationError("not a theta family: " + family_name(family));
  if (!(theta >= -kPi && theta <= kPi)) throw ValidationError("theta must lie in [-pi, pi]");
  const double h = std::sin(theta) / 2.0;
  const double a = (1.0 + std::cos(theta)) / 2.0;
  const double b = (1.0 - std::cos(theta)) / 2.0;
  Mat4 m;
  switch (family) {
    case Family::P24Y1:
      m << h, a, -h, b,
          b, h, a, -h,
          -h, b, h, a,
          a, -h, b, h;
      break;
    case Family::P34X1:
      m << h, -h, a, b,
          -h, h, b, a,
          b, a, h, -h,
          a, b, -h, h;
      break;
    case Family::P23Z1:
      m << h, a, b, -h,
          b, h, -h, a,
          a, -h, h, b,
          -h, b, a, h;
      break;
    default:  // X3
      m << a, b, h, -h,
          b, a, -h, h,
          h, -h, b, a,
          -h, h, a, b;
      break;
  }
  Coin c;
  c.entries = m.cast<cplx>();
  c.family = family;
  c.theta = theta;
  c.degenerate = std::abs(std::abs(theta) - kPi) < 1e-15;
  return c;
}

Mat4 grover_matrix() { return Mat4::Constant(0.5) - Mat4::Identity(); }

// ---------------------------------------------------------------- exact

namespace {

using QMat = std::array<std::array<mpq_class, 4>, 4>;

QMat exact_block(BlockKind kind, int s, const mpq_class &a, const mpq_class &b) {
  const mpq_class sb = mpq_class(s) - b;
  const mpq_class na = -a;
  if (kind == BlockKind::M)
    return QMat{{{a, na, b, sb}, {na, a, sb, b}, {b, sb, na, a}, {sb, b, a, na}}};
  return QMat{{{b, sb, a, na}, {sb, b, na, a}, {a, na, sb, b}, {na, a, b, sb}}};
}

// (P M)(i, j) = M(pi(i), j) and (C M C)(i, j) = M(c(i), c(j)) for an involution c.
QMat exact_form(const FamilyForm &form, const QMat &block) {
  const Permutation4 c = conjugator_of(form.letter);
  QMat conj, out;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) conj[i][j] = block[c(i + 1) - 1][c(j + 1) - 1];
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out[i][j] = conj[form.left(i + 1) - 1][j];
  return out;
}

RationalCoin exact_coin(const FamilyForm &form, Family tag, const mpq_class &r, int branch) {
  if (r == 0) throw ValidationError("r must be nonzero");
  if (branch != 1 && branch != -1) throw ValidationError("branch must be +1 or -1");
  const int s = sign_of(form.k);
  const mpq_class r2 = r * r;
  RationalCoin rc;
  rc.a = (r2 - 1) / (2 * (r2 + 1));
  rc.b = mpq_class(s, 2) + branch * r / (r2 + 1);
  rc.a.canonicalize();
  rc.b.canonicalize();
  rc.entries = exact_form(form, exact_block(kind_of(form.k), s, rc.a, rc.b));
  for (auto &row : rc.entries)
    for (auto &e : row) e.canonicalize();
  rc.family = tag;
  rc.r = r;
  rc.branch = branch;
  return rc;
}

}  // namespace

RationalCoin coin_rational(Letter letter, BlockKind kind, int sign, const mpq_class &r,
                           int branch) {
  FamilyForm f{letter, subfamily_index(kind, sign), Permutation4{}};
  return exact_coin(f, subfamily_tag(letter, f.k), r, branch);
}

RationalCoin coin_rational(Family family, const mpq_class &r, int branch) {
  if (family == Family::RAW) throw ValidationError("RAW has no rational parametrisation");
  FamilyForm f;
  if (family == Family::P34X1 || family == Family::P24Y1 || family == Family::P23Z1) {
    f = theta_family_form(family);
  } else {
    std::string n = family_name(family);
    f = FamilyForm::parse(n);
  }
  return exact_coin(f, family, r, branch);
}

Coin RationalCoin::to_coin() const {
  Coin c;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) c.entries(i, j) = entries[i][j].get_d();
  c.family = family;
  c.r = r;
  return c;
}

bool RationalCoin::exactly_orthogonal() const {
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      mpq_class acc = 0;
      for (int k = 0; k < 4; ++k) acc += entries[k][i] * entries[k][j];
      if (acc != (i == j ? 1 : 0)) return false;
    }
  return true;
}

// ---------------------------------------------------------------- predicates

bool is_orthogonal(const Mat4c &A, double tol) {
  return (A.transpose() * A - Mat4c::Identity()).cwiseAbs().maxCoeff() <= tol;
}

bool is_orthogonal(const Mat4 &A, double tol) {
  return (A.transpose() * A - Mat4::Identity()).cwiseAbs().maxCoeff() <= tol;
}

bool is_permutative(const Mat4c &A, double tol) {
  for (int i = 1; i < 4; ++i) {
    std::array<bool, 4> used{};
    for (int j = 0; j < 4; ++j) {
      bool found = false;
      for (int k = 0; k < 4 && !found; ++k) {
        if (!used[k] && std::abs(A(i, k) - A(0, j)) <= tol) {
          used[k] = true;
          found = true;
        }
      }
      if (!found) return false;
    }
  }
  return true;
}

bool is_permutative(const Mat4 &A, double tol) { return is_permutative(Mat4c(A.cast<cplx>()), tol); }

// ---------------------------------------------------------------- classify

double FamilyWitness::constraint_residual() const { return std::abs(a * a + b * b - double(sign) * b); }

const std::vector<FamilyForm> &classification_forms() {
  static const std::vector<FamilyForm> forms = [] {
    std::vector<FamilyForm> out;
    const auto lefts = one_plus_p3();
    for (Letter l : {Letter::X, Letter::Y, Letter::Z})
      for (int k : {1, 2, 3, 4})  // M+, M-, N+, N-
        for (const auto &p : lefts) out.push_back(FamilyForm{l, k, p});
    return out;
  }();
  return forms;
}

namespace {

bool near_corner_value(cplx v, double tol) {
  for (double c : {0.0, 0.5, -0.5, 1.0, -1.0})
    if (std::abs(v - c) <= tol) return true;
  return false;
}

}  // namespace

std::optional<FamilyWitness> match_form(const Mat4c &A, const FamilyForm &form, double tol) {
  const Mat4c L = perm_matrix(form.left).complex();
  const Mat4c C = perm_matrix(conjugator_of(form.letter)).complex();
  const Mat4c K = C * L.transpose() * A * C;
  const BlockKind kind = kind_of(form.k);
  const int s = sign_of(form.k);
  cplx a, b;
  if (kind == BlockKind::M) {
    a = K(0, 0);
    b = K(0, 2);
  } else {
    b = K(0, 0);
    a = K(0, 2);
  }
  const double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
  FamilyWitness w;
  w.form = form;
  w.family = subfamily_tag(form.letter, form.k);
  w.conjugator = conjugator_of(form.letter);
  w.kind = kind;
  w.sign = s;
  w.a = a;
  w.b = b;
  if (w.constraint_residual() > tol * scale * scale) return std::nullopt;
  if ((w.reconstruct() - A).cwiseAbs().maxCoeff() > tol * scale) return std::nullopt;
  w.real_params = std::abs(a.imag()) <= tol && std::abs(b.imag()) <= tol;
  w.corner = near_corner_value(a, tol) && near_corner_value(b, tol);
  return w;
}

FamilyWitness classify(const Mat4c &A, double tol) {
  const double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
  if (!is_orthogonal(A, tol * scale * scale)) throw NotOrthogonal("matrix is not orthogonal");
  for (const auto &f : classification_forms())
    if (auto w = match_form(A, f, tol)) return *w;
  if (!is_permutative(A, tol * scale)) throw NotPermutative("orthogonal but not permutative");
  throw std::logic_error("permutative orthogonal matrix matched no family form");
}

FamilyWitness classify(const Coin &c) {
  return classify(c.entries, c.family == Family::RAW ? kUserTol : kSelfTol);
}

// ---------------------------------------------------------------- chains

std::vector<ChainSpec> theorem_chains() {
  struct LetterPre {
    Letter l;
    const char *pre;
  };
  const LetterPre lp[] = {{Letter::X, "(34)"}, {Letter::Y, "(24)"}, {Letter::Z, "(23)"}};
  std::vector<ChainSpec> out;
  std::set<std::string> seen;
  auto add = [&](std::vector<FamilyForm> forms) {
    std::vector<FamilyForm> uniq;
    for (const auto &f : forms)
      if (std::find(uniq.begin(), uniq.end(), f) == uniq.end()) uniq.push_back(f);
    std::string id;
    for (const auto &f : uniq) id += (id.empty() ? "" : "+") + f.name();
    if (seen.insert(id).second) out.push_back(ChainSpec{id, uniq});
  };
  for (const auto &[l, pre] : lp) {
    const Permutation4 P = Permutation4::from_cycles(pre);
    const FamilyForm base{l, 3, P};
    add({base});
    for (int j = 1; j <= 4; ++j) {
      const FamilyForm pj{l, j, P}, bj{l, j, Permutation4{}}, b3{l, 3, Permutation4{}};
      add({base, pj});
      add({base, bj});
      add({base, pj, b3, bj});
    }
  }
  return out;
}

ChainSpec chain_from_id(std::string_view id) {
  ChainSpec c;
  c.id = std::string(id);
  std::size_t start = 0;
  while (start <= id.size()) {
    std::size_t end = id.find('+', start);
    if (end == std::string_view::npos) end = id.size();
    c.forms.push_back(FamilyForm::parse(id.substr(start, end - start)));
    start = end + 1;
  }
  bool known = false;
  for (const auto &t : theorem_chains())
    if (t.forms.size() == c.forms.size() &&
        std::all_of(c.forms.begin(), c.forms.end(), [&](const FamilyForm &f) {
          return std::find(t.forms.begin(), t.forms.end(), f) != t.forms.end();
        }))
      known = true;
  if (!known) throw ValidationError("unknown chain id: " + c.id);
  return c;
}

bool in_chain(const Mat4c &A, const ChainSpec &chain, double tol) {
  return std::any_of(chain.forms.begin(), chain.forms.end(),
                     [&](const FamilyForm &f) { return match_form(A, f, tol).has_value(); });
}

ClosureReport group_product_closure_sample(std::string_view chain_id, std::size_t count,
                                           std::uint64_t seed) {
  const ChainSpec chain = chain_from_id(chain_id);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> re(-kPi, kPi), im(-0.5, 0.5);
  std::uniform_int_distribution<std::size_t> pick(0, chain.forms.size() - 1);
  auto draw = [&] {
    const FamilyForm &f = chain.forms[pick(rng)];
    const double x = re(rng);
    const double y = im(rng);
    return form_member_angle(f, cplx(x, y));
  };
  ClosureReport rep;
  rep.id = chain.id;
  for (std::size_t i = 0; i < count; ++i) {
    const Mat4c A = draw();
    const Mat4c B = draw();
    ++rep.samples;
    if (in_chain(A * B, chain, kUserTol)) ++rep.products_in;
    if (in_chain(A.transpose(), chain, kUserTol)) ++rep.transposes_in;
  }
  return rep;
}

}  // namespace gwalk
