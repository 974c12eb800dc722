#include "fockbridge/symbolic.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace fockbridge {

// ---------------------------------------------------------------------------
// OperatorExpr
// ---------------------------------------------------------------------------

OperatorExpr::OperatorExpr(int modes) : modes_(modes) {
  if (modes < 1)
    throw std::invalid_argument("operator expression needs modes >= 1");
}

OperatorExpr OperatorExpr::identity(int modes) {
  return term(modes, Coeff(1), Word{});
}

OperatorExpr OperatorExpr::create(int modes, int mode) {
  return term(modes, Coeff(1), Word{{mode, true}});
}

OperatorExpr OperatorExpr::annihilate(int modes, int mode) {
  return term(modes, Coeff(1), Word{{mode, false}});
}

OperatorExpr OperatorExpr::term(int modes, Coeff c, Word w) {
  OperatorExpr e(modes);
  for (const Generator& g : w)
    if (g.mode < 1 || g.mode > modes)
      throw std::invalid_argument("generator mode outside 1..modes");
  e.terms_.emplace_back(std::move(w), std::move(c));
  return e;
}

OperatorExpr& OperatorExpr::operator+=(const OperatorExpr& other) {
  if (modes_ != other.modes_)
    throw std::invalid_argument("operator expression mode-count mismatch");
  terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
  return *this;
}

OperatorExpr& OperatorExpr::operator-=(const OperatorExpr& other) {
  if (modes_ != other.modes_)
    throw std::invalid_argument("operator expression mode-count mismatch");
  for (const auto& [w, c] : other.terms_)
    terms_.emplace_back(w, -c);
  return *this;
}

OperatorExpr& OperatorExpr::operator*=(const Coeff& scale) {
  for (auto& [w, c] : terms_)
    c = c * scale;
  return *this;
}

OperatorExpr operator*(const OperatorExpr& a, const OperatorExpr& b) {
  if (a.modes_ != b.modes_)
    throw std::invalid_argument("operator expression mode-count mismatch");
  OperatorExpr out(a.modes_);
  out.terms_.reserve(a.terms_.size() * b.terms_.size());
  for (const auto& [wa, ca] : a.terms_)
    for (const auto& [wb, cb] : b.terms_) {
      Word w = wa;
      w.insert(w.end(), wb.begin(), wb.end());
      out.terms_.emplace_back(std::move(w), ca * cb);
    }
  return out;
}

OperatorExpr OperatorExpr::adjoint() const {
  OperatorExpr out(modes_);
  out.terms_.reserve(terms_.size());
  for (const auto& [w, c] : terms_) {
    Word r(w.rbegin(), w.rend());
    for (Generator& g : r)
      g.daggered = !g.daggered;
    out.terms_.emplace_back(std::move(r), c.conj());
  }
  return out;
}

// ---------------------------------------------------------------------------
// OperatorPolynomial
// ---------------------------------------------------------------------------

namespace {

// Daggered generators first, each block sorted by mode ascending. This is
// the order-forgetting normal product of a single word (no commutator
// terms), and also the canonicalizer for words already free of a-a^+
// adjacencies.
Word canonical_blocks(const Word& w) {
  Word daggered, undaggered;
  for (const Generator& g : w)
    (g.daggered ? daggered : undaggered).push_back(g);
  const auto by_mode = [](const Generator& x, const Generator& y) {
    return x.mode < y.mode;
  };
  std::sort(daggered.begin(), daggered.end(), by_mode);
  std::sort(undaggered.begin(), undaggered.end(), by_mode);
  daggered.insert(daggered.end(), undaggered.begin(), undaggered.end());
  return daggered;
}

} // namespace

int OperatorPolynomial::degree() const {
  std::size_t d = 0;
  for (const auto& [w, c] : terms_)
    d = std::max(d, w.size());
  return static_cast<int>(d);
}

void OperatorPolynomial::add_term(Word w, const Coeff& c) {
  if (c.is_zero())
    return;
  auto [it, inserted] = terms_.emplace(std::move(w), c);
  if (!inserted) {
    it->second = it->second + c;
    if (it->second.is_zero())
      terms_.erase(it);
  }
}

OperatorPolynomial& OperatorPolynomial::operator+=(
    const OperatorPolynomial& other) {
  if (modes_ != other.modes_)
    throw std::invalid_argument("operator polynomial mode-count mismatch");
  for (const auto& [w, c] : other.terms_)
    add_term(w, c);
  return *this;
}

OperatorPolynomial operator*(const Coeff& c, OperatorPolynomial p) {
  if (c.is_zero())
    return OperatorPolynomial(p.modes());
  for (auto& [w, coeff] : p.terms_)
    coeff = coeff * c;
  return p;
}

OperatorPolynomial OperatorPolynomial::adjoint() const {
  OperatorPolynomial out(modes_);
  for (const auto& [w, c] : terms_) {
    Word r(w.rbegin(), w.rend());
    for (Generator& g : r)
      g.daggered = !g.daggered;
    out.add_term(canonical_blocks(r), c.conj());
  }
  return out;
}

OperatorPolynomial::operator OperatorExpr() const {
  OperatorExpr e(modes_);
  for (const auto& [w, c] : terms_)
    e += OperatorExpr::term(modes_, c, w);
  return e;
}

std::string OperatorPolynomial::str() const {
  if (terms_.empty())
    return "(0+0i)";
  std::string out;
  bool first = true;
  for (const auto& [w, c] : terms_) {
    if (!first)
      out += " + ";
    first = false;
    out += "(" + c.str() + ")";
    for (std::size_t i = 0; i < w.size();) {
      std::size_t run = i + 1;
      while (run < w.size() && w[run] == w[i])
        ++run;
      out += w[i].daggered ? "*ad[" : "*a[";
      out += std::to_string(w[i].mode) + "]";
      if (run - i > 1)
        out += "^" + std::to_string(run - i);
      i = run;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Normal ordering
// ---------------------------------------------------------------------------

OperatorPolynomial normal_product(const OperatorExpr& p) {
  OperatorPolynomial out(p.modes());
  for (const auto& [w, c] : p.terms())
    out.add_term(canonical_blocks(w), c);
  return out;
}

OperatorPolynomial rewrite_to_normal_form(const OperatorExpr& p,
                                          RewriteStrategy strategy) {
  OperatorPolynomial out(p.modes());
  std::vector<std::pair<Word, Coeff>> work(p.terms().begin(),
                                           p.terms().end());
  while (!work.empty()) {
    Word w = std::move(work.back().first);
    const Coeff c = work.back().second;
    work.pop_back();
    if (c.is_zero())
      continue;
    // Reducible position: an annihilation generator immediately left of a
    // creation generator.
    std::ptrdiff_t pos = -1;
    if (strategy == RewriteStrategy::leftmost) {
      for (std::size_t k = 0; k + 1 < w.size(); ++k)
        if (!w[k].daggered && w[k + 1].daggered) {
          pos = static_cast<std::ptrdiff_t>(k);
          break;
        }
    } else {
      for (std::size_t k = w.size(); k-- > 1;)
        if (!w[k - 1].daggered && w[k].daggered) {
          pos = static_cast<std::ptrdiff_t>(k - 1);
          break;
        }
    }
    if (pos < 0) {
      out.add_term(canonical_blocks(w), c);
      continue;
    }
    const std::size_t k = static_cast<std::size_t>(pos);
    // a_i a_j^+ = a_j^+ a_i + delta_ij
    if (w[k].mode == w[k + 1].mode) {
      Word contracted;
      contracted.reserve(w.size() - 2);
      contracted.insert(contracted.end(), w.begin(),
                        w.begin() + static_cast<std::ptrdiff_t>(k));
      contracted.insert(contracted.end(),
                        w.begin() + static_cast<std::ptrdiff_t>(k) + 2,
                        w.end());
      work.emplace_back(std::move(contracted), c);
    }
    std::swap(w[k], w[k + 1]);
    work.emplace_back(std::move(w), c);
  }
  return out;
}

OperatorPolynomial symbolic_commutator(const OperatorExpr& a,
                                       const OperatorExpr& b) {
  return rewrite_to_normal_form(a * b - b * a);
}

// ---------------------------------------------------------------------------
// Commutative polynomials
// ---------------------------------------------------------------------------

namespace {

using ExpMap = std::map<std::vector<int>, Coeff>;

void emap_add(ExpMap& into, const std::vector<int>& exps, const Coeff& c) {
  if (c.is_zero())
    return;
  auto [it, inserted] = into.emplace(exps, c);
  if (!inserted) {
    it->second = it->second + c;
    if (it->second.is_zero())
      into.erase(it);
  }
}

ExpMap emap_mul(const ExpMap& a, const ExpMap& b, std::size_t slots) {
  ExpMap out;
  for (const auto& [ea, ca] : a)
    for (const auto& [eb, cb] : b) {
      std::vector<int> e(slots);
      for (std::size_t i = 0; i < slots; ++i)
        e[i] = ea[i] + eb[i];
      emap_add(out, e, ca * cb);
    }
  return out;
}

ExpMap emap_derivative(const ExpMap& a, std::size_t slot) {
  ExpMap out;
  for (const auto& [e, c] : a) {
    if (e[slot] == 0)
      continue;
    std::vector<int> d = e;
    d[slot] -= 1;
    emap_add(out, d, Coeff(e[slot]) * c);
  }
  return out;
}

int emap_degree(const ExpMap& a) {
  int deg = 0;
  for (const auto& [e, c] : a) {
    int total = 0;
    for (const int k : e)
      total += k;
    deg = std::max(deg, total);
  }
  return deg;
}

std::size_t var_slot(Var v, int modes, bool complex_chart) {
  if (v.mode < 1 || v.mode > modes)
    throw std::invalid_argument("variable mode outside 1..modes");
  const bool second_block = complex_chart ? v.kind == Var::Kind::z
                                          : v.kind == Var::Kind::pi;
  const bool first_block = complex_chart ? v.kind == Var::Kind::y
                                         : v.kind == Var::Kind::phi;
  if (!first_block && !second_block)
    throw std::invalid_argument("variable kind not in this chart");
  return static_cast<std::size_t>(v.mode - 1) +
         (second_block ? static_cast<std::size_t>(modes) : 0);
}

} // namespace

PhiPiPolynomial::PhiPiPolynomial(int modes) : modes_(modes) {
  if (modes < 1)
    throw std::invalid_argument("polynomial needs modes >= 1");
}

PhiPiPolynomial PhiPiPolynomial::constant(int modes, Coeff c) {
  PhiPiPolynomial p(modes);
  p.add_term(std::vector<int>(2 * static_cast<std::size_t>(modes), 0), c);
  return p;
}

PhiPiPolynomial PhiPiPolynomial::variable(int modes, Var v) {
  PhiPiPolynomial p(modes);
  std::vector<int> e(2 * static_cast<std::size_t>(modes), 0);
  e[var_slot(v, modes, false)] = 1;
  p.add_term(std::move(e), Coeff(1));
  return p;
}

int PhiPiPolynomial::degree() const { return emap_degree(terms_); }

bool PhiPiPolynomial::real_coefficients() const {
  for (const auto& [e, c] : terms_)
    if (!c.is_real())
      return false;
  return true;
}

void PhiPiPolynomial::add_term(std::vector<int> exps, const Coeff& c) {
  if (exps.size() != 2 * static_cast<std::size_t>(modes_))
    throw std::invalid_argument("exponent vector length != 2*modes");
  emap_add(terms_, exps, c);
}

PhiPiPolynomial& PhiPiPolynomial::operator+=(const PhiPiPolynomial& other) {
  if (modes_ != other.modes_)
    throw std::invalid_argument("polynomial mode-count mismatch");
  for (const auto& [e, c] : other.terms_)
    emap_add(terms_, e, c);
  return *this;
}

PhiPiPolynomial& PhiPiPolynomial::operator-=(const PhiPiPolynomial& other) {
  if (modes_ != other.modes_)
    throw std::invalid_argument("polynomial mode-count mismatch");
  for (const auto& [e, c] : other.terms_)
    emap_add(terms_, e, -c);
  return *this;
}

PhiPiPolynomial& PhiPiPolynomial::operator*=(const Coeff& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, coeff] : terms_)
    coeff = coeff * c;
  return *this;
}

PhiPiPolynomial operator*(const PhiPiPolynomial& a, const PhiPiPolynomial& b) {
  if (a.modes_ != b.modes_)
    throw std::invalid_argument("polynomial mode-count mismatch");
  PhiPiPolynomial out(a.modes_);
  out.terms_ =
      emap_mul(a.terms_, b.terms_, 2 * static_cast<std::size_t>(a.modes_));
  return out;
}

PhiPiPolynomial PhiPiPolynomial::derivative(Var v) const {
  PhiPiPolynomial out(modes_);
  if (v.kind == Var::Kind::phi || v.kind == Var::Kind::pi) {
    out.terms_ = emap_derivative(terms_, var_slot(v, modes_, false));
    return out;
  }
  // d/dy = (d/dphi + i d/dpi)/sqrt2 ; d/dz = (d/dphi - i d/dpi)/sqrt2
  const PhiPiPolynomial dphi = derivative({Var::Kind::phi, v.mode});
  const PhiPiPolynomial dpi = derivative({Var::Kind::pi, v.mode});
  const Coeff half_s2 = Coeff::inv_sqrt2();
  const Coeff ih = (v.kind == Var::Kind::y ? Coeff::i() : -Coeff::i()) *
                   half_s2;
  out += half_s2 * dphi;
  out += ih * dpi;
  return out;
}

cplx PhiPiPolynomial::evaluate(const std::vector<double>& phi,
                               const std::vector<double>& pi) const {
  const std::size_t n = static_cast<std::size_t>(modes_);
  if (phi.size() != n || pi.size() != n)
    throw std::invalid_argument("evaluate: state dimension mismatch");
  cplx total = 0.0;
  for (const auto& [e, c] : terms_) {
    double mono = 1.0;
    for (std::size_t j = 0; j < n; ++j)
      for (int k = 0; k < e[j]; ++k)
        mono *= phi[j];
    for (std::size_t j = 0; j < n; ++j)
      for (int k = 0; k < e[n + j]; ++k)
        mono *= pi[j];
    total += c.to_complex() * mono;
  }
  return total;
}

std::string PhiPiPolynomial::str() const {
  if (terms_.empty())
    return "(0+0i)";
  const std::size_t n = static_cast<std::size_t>(modes_);
  std::string out;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    if (!first)
      out += " + ";
    first = false;
    out += "(" + c.str() + ")";
    for (std::size_t slot = 0; slot < 2 * n; ++slot) {
      if (e[slot] == 0)
        continue;
      out += slot < n ? "*phi[" : "*pi[";
      out += std::to_string(slot < n ? slot + 1 : slot - n + 1) + "]";
      if (e[slot] > 1)
        out += "^" + std::to_string(e[slot]);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// YZPolynomial
// ---------------------------------------------------------------------------

YZPolynomial::YZPolynomial(int modes) : modes_(modes) {
  if (modes < 1)
    throw std::invalid_argument("polynomial needs modes >= 1");
}

void YZPolynomial::add_term(std::vector<int> exps, const Coeff& c) {
  if (exps.size() != 2 * static_cast<std::size_t>(modes_))
    throw std::invalid_argument("exponent vector length != 2*modes");
  emap_add(terms_, exps, c);
}

YZPolynomial YZPolynomial::from_phipi(const PhiPiPolynomial& g) {
  const int n = g.modes();
  const std::size_t slots = 2 * static_cast<std::size_t>(n);
  // phi_j = (y_j + z_j)/sqrt2 ; pi_j = i(y_j - z_j)/sqrt2
  const Coeff is2 = Coeff::i() * Coeff::inv_sqrt2();
  YZPolynomial out(n);
  for (const auto& [e, c] : g.terms()) {
    ExpMap mono{{std::vector<int>(slots, 0), c}};
    for (std::size_t j = 0; j < static_cast<std::size_t>(n); ++j) {
      ExpMap phi_sub, pi_sub;
      std::vector<int> ey(slots, 0), ez(slots, 0);
      ey[j] = 1;
      ez[j + static_cast<std::size_t>(n)] = 1;
      emap_add(phi_sub, ey, Coeff::inv_sqrt2());
      emap_add(phi_sub, ez, Coeff::inv_sqrt2());
      emap_add(pi_sub, ey, is2);
      emap_add(pi_sub, ez, -is2);
      for (int k = 0; k < e[j]; ++k)
        mono = emap_mul(mono, phi_sub, slots);
      for (int k = 0; k < e[j + static_cast<std::size_t>(n)]; ++k)
        mono = emap_mul(mono, pi_sub, slots);
    }
    for (const auto& [me, mc] : mono)
      emap_add(out.terms_, me, mc);
  }
  return out;
}

YZPolynomial YZPolynomial::derivative(Var v) const {
  if (v.kind != Var::Kind::y && v.kind != Var::Kind::z)
    throw std::invalid_argument("complex-chart derivative expects y or z");
  YZPolynomial out(modes_);
  out.terms_ = emap_derivative(terms_, var_slot(v, modes_, true));
  return out;
}

OperatorPolynomial YZPolynomial::to_normal_operator() const {
  const std::size_t n = static_cast<std::size_t>(modes_);
  OperatorPolynomial out(modes_);
  for (const auto& [e, c] : terms_) {
    Word w;
    for (std::size_t j = 0; j < n; ++j)
      for (int k = 0; k < e[j]; ++k)
        w.push_back({static_cast<int>(j) + 1, true});
    for (std::size_t j = 0; j < n; ++j)
      for (int k = 0; k < e[n + j]; ++k)
        w.push_back({static_cast<int>(j) + 1, false});
    out.add_term(std::move(w), c);
  }
  return out;
}

OperatorPolynomial substitute_normal(const PhiPiPolynomial& g) {
  return YZPolynomial::from_phipi(g).to_normal_operator();
}

OperatorExpr phi_expr(int modes, int mode) {
  OperatorExpr e = OperatorExpr::annihilate(modes, mode);
  e += OperatorExpr::create(modes, mode);
  e *= Coeff::inv_sqrt2();
  return e;
}

OperatorExpr pi_expr(int modes, int mode) {
  OperatorExpr e = OperatorExpr::annihilate(modes, mode);
  e -= OperatorExpr::create(modes, mode);
  // 1/(i sqrt2) = -i/sqrt2
  e *= -Coeff::i() * Coeff::inv_sqrt2();
  return e;
}

OperatorPolynomial substitute_symmetric(const PhiPiPolynomial& g) {
  const int n = g.modes();
  OperatorExpr total(n);
  for (const auto& [e, c] : g.terms()) {
    std::vector<std::size_t> factors;
    for (std::size_t slot = 0; slot < e.size(); ++slot)
      for (int k = 0; k < e[slot]; ++k)
        factors.push_back(slot);
    if (factors.size() > 8)
      throw std::invalid_argument(
          "symmetric substitution implemented for degree <= 8");
    OperatorExpr sum(n);
    std::int64_t orderings = 0;
    std::sort(factors.begin(), factors.end());
    do {
      OperatorExpr prod = OperatorExpr::identity(n);
      for (const std::size_t slot : factors) {
        const int mode = static_cast<int>(slot % static_cast<std::size_t>(n)) + 1;
        prod = prod * (slot < static_cast<std::size_t>(n) ? phi_expr(n, mode)
                                                          : pi_expr(n, mode));
      }
      sum += prod;
      ++orderings;
    } while (std::next_permutation(factors.begin(), factors.end()));
    sum *= c * Coeff(Rational(1, orderings));
    total += sum;
  }
  return rewrite_to_normal_form(total);
}

// ---------------------------------------------------------------------------
// Matrix evaluation
// ---------------------------------------------------------------------------

OperatorMatrix evaluate_matrix(const OperatorExpr& p, const FockBasis& basis) {
  if (p.modes() != basis.modes())
    throw std::invalid_argument("evaluate_matrix: mode-count mismatch");
  const int n = basis.modes();
  // Ladder words have at most one entry per column, so word products are
  // built sparse regardless of the default storage.
  std::vector<OperatorMatrix> ann, cre;
  ann.reserve(static_cast<std::size_t>(n));
  cre.reserve(static_cast<std::size_t>(n));
  for (int j = 1; j <= n; ++j) {
    ann.push_back(annihilation_matrix(j, basis).to_sparse());
    cre.push_back(creation_matrix(j, basis).to_sparse());
  }
  const OperatorMatrix ident =
      OperatorMatrix::identity(basis, OperatorMatrix::Storage::sparse);
  OperatorMatrix result =
      OperatorMatrix::zero(basis, OperatorMatrix::default_storage(basis));
  for (const auto& [w, c] : p.terms()) {
    OperatorMatrix m = ident;
    for (const Generator& g : w) {
      const std::size_t j = static_cast<std::size_t>(g.mode - 1);
      m = m * (g.daggered ? cre[j] : ann[j]);
    }
    m *= c.to_complex();
    result += m;
  }
  return result;
}

OperatorMatrix evaluate_matrix(const OperatorPolynomial& p,
                               const FockBasis& basis) {
  return evaluate_matrix(static_cast<OperatorExpr>(p), basis);
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

ParseError::ParseError(std::size_t offset_, const std::string& what_)
    : std::runtime_error("parse error at offset " + std::to_string(offset_) +
                         ": " + what_),
      offset(offset_) {}

namespace {

struct Cursor {
  const std::string& text;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() &&
           (text[pos] == ' ' || text[pos] == '\t' || text[pos] == '\n'))
      ++pos;
  }
  bool eof() {
    skip_ws();
    return pos >= text.size();
  }
  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }
  bool consume(char c) {
    skip_ws();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  bool consume_word(const char* lit) {
    skip_ws();
    const std::size_t len = std::string::traits_type::length(lit);
    if (text.compare(pos, len, lit) == 0) {
      pos += len;
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& msg) {
    throw ParseError(pos, msg);
  }
  std::int64_t integer() {
    skip_ws();
    if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos])))
      fail("expected integer");
    std::int64_t v = 0;
    while (pos < text.size() &&
           std::isdigit(static_cast<unsigned char>(text[pos]))) {
      if (v > (INT64_MAX - 9) / 10)
        fail("integer literal overflows");
      v = v * 10 + (text[pos] - '0');
      ++pos;
    }
    return v;
  }
  Rational rational() {
    const std::int64_t num = integer();
    if (consume('/')) {
      const std::int64_t den = integer();
      if (den == 0)
        fail("zero denominator");
      return Rational(num, den);
    }
    return Rational(num);
  }

  // Sum of atoms inside a coefficient: atom = rational [*s2] [i].
  Coeff coeff_body() {
    Coeff total;
    bool first = true;
    while (true) {
      skip_ws();
      bool negative = false;
      if (consume('-'))
        negative = true;
      else if (!consume('+') && !first)
        break;
      first = false;
      Coeff atom(rational());
      if (consume_word("*s2"))
        atom = atom * Coeff::sqrt2();
      if (consume('i'))
        atom = atom * Coeff::i();
      total = negative ? total - atom : total + atom;
    }
    return total;
  }

  int mode_index(int modes) {
    if (!consume('['))
      fail("expected '['");
    const std::int64_t m = integer();
    if (!consume(']'))
      fail("expected ']'");
    if (m < 1 || m > modes)
      fail("mode index outside 1.." + std::to_string(modes));
    return static_cast<int>(m);
  }

  int power() {
    if (!consume('^'))
      return 1;
    const std::int64_t k = integer();
    if (k < 1 || k > 64)
      fail("power outside 1..64");
    return static_cast<int>(k);
  }
};

} // namespace

OperatorExpr parse_operator(const std::string& text, int modes) {
  Cursor cur{text};
  OperatorExpr out(modes);
  if (cur.eof())
    cur.fail("empty expression");
  bool first = true;
  while (!cur.eof()) {
    bool negative = false;
    if (cur.consume('-'))
      negative = true;
    else if (!cur.consume('+') && !first)
      cur.fail("expected '+' or '-' between terms");
    first = false;
    Coeff coeff(1);
    Word word;
    bool want_factor = true;
    while (want_factor) {
      if (cur.consume('(')) {
        coeff = coeff * cur.coeff_body();
        if (!cur.consume(')'))
          cur.fail("expected ')'");
      } else if (cur.consume_word("ad")) {
        const int mode = cur.mode_index(modes);
        const int k = cur.power();
        word.insert(word.end(), static_cast<std::size_t>(k),
                    Generator{mode, true});
      } else if (cur.consume_word("a")) {
        const int mode = cur.mode_index(modes);
        const int k = cur.power();
        word.insert(word.end(), static_cast<std::size_t>(k),
                    Generator{mode, false});
      } else {
        cur.fail("expected coefficient or generator");
      }
      want_factor = cur.consume('*');
    }
    if (negative)
      coeff = -coeff;
    out += OperatorExpr::term(modes, coeff, std::move(word));
  }
  return out;
}

PhiPiPolynomial parse_phipi(const std::string& text, int modes) {
  Cursor cur{text};
  PhiPiPolynomial out(modes);
  const std::size_t slots = 2 * static_cast<std::size_t>(modes);
  if (cur.eof())
    cur.fail("empty expression");
  bool first = true;
  while (!cur.eof()) {
    bool negative = false;
    if (cur.consume('-'))
      negative = true;
    else if (!cur.consume('+') && !first)
      cur.fail("expected '+' or '-' between terms");
    first = false;
    Coeff coeff(1);
    std::vector<int> exps(slots, 0);
    bool want_factor = true;
    while (want_factor) {
      if (cur.consume('(')) {
        coeff = coeff * cur.coeff_body();
        if (!cur.consume(')'))
          cur.fail("expected ')'");
      } else if (cur.consume_word("phi")) {
        const int mode = cur.mode_index(modes);
        exps[static_cast<std::size_t>(mode - 1)] += cur.power();
      } else if (cur.consume_word("pi")) {
        const int mode = cur.mode_index(modes);
        exps[static_cast<std::size_t>(modes + mode - 1)] += cur.power();
      } else {
        cur.fail("expected coefficient or variable");
      }
      want_factor = cur.consume('*');
    }
    if (negative)
      coeff = -coeff;
    out.add_term(std::move(exps), coeff);
  }
  return out;
}

} // namespace fockbridge
