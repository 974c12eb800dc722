#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fockbridge/coeff.hpp"
#include "fockbridge/fock.hpp"

namespace fockbridge {

// One ladder symbol: a_mode (daggered = false) or a_mode^+ (daggered = true).
struct Generator {
  int mode;
  bool daggered;
  friend bool operator==(const Generator&, const Generator&) = default;
};

// Left-to-right operator product order; the empty word is the identity.
using Word = std::vector<Generator>;

// Deterministic term order: shorter words first, then lexicographic with
// daggered generators ranking before undaggered and modes ascending.
struct WordOrder {
  static std::pair<int, int> key(const Generator& g) {
    return {g.daggered ? 0 : 1, g.mode};
  }
  bool operator()(const Word& a, const Word& b) const {
    if (a.size() != b.size())
      return a.size() < b.size();
    for (std::size_t i = 0; i < a.size(); ++i) {
      const auto ka = key(a[i]), kb = key(b[i]);
      if (ka != kb)
        return ka < kb;
    }
    return false;
  }
};

using TermMap = std::map<Word, Coeff, WordOrder>;

// Sum of arbitrary words with exact coefficients: the free (non-canonical)
// form in which products and substitutions are built before ordering.
class OperatorExpr {
public:
  explicit OperatorExpr(int modes);
  static OperatorExpr identity(int modes);
  static OperatorExpr create(int modes, int mode);
  static OperatorExpr annihilate(int modes, int mode);
  static OperatorExpr term(int modes, Coeff c, Word w);

  int modes() const { return modes_; }
  const std::vector<std::pair<Word, Coeff>>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  OperatorExpr& operator+=(const OperatorExpr& other);
  OperatorExpr& operator-=(const OperatorExpr& other);
  OperatorExpr& operator*=(const Coeff& scale);
  friend OperatorExpr operator+(OperatorExpr a, const OperatorExpr& b) {
    a += b;
    return a;
  }
  friend OperatorExpr operator-(OperatorExpr a, const OperatorExpr& b) {
    a -= b;
    return a;
  }
  friend OperatorExpr operator*(const Coeff& c, OperatorExpr a) {
    a *= c;
    return a;
  }
  // Word concatenation on all term pairs.
  friend OperatorExpr operator*(const OperatorExpr& a, const OperatorExpr& b);

  // Reverses each word, flips daggers, conjugates coefficients.
  OperatorExpr adjoint() const;

private:
  int modes_;
  std::vector<std::pair<Word, Coeff>> terms_;
};

// Canonical normal-ordered polynomial: in every stored word all daggered
// generators precede all undaggered ones and each block is sorted by mode
// ascending; zero coefficients are absent. Equal operators in normal form
// have byte-identical serializations.
class OperatorPolynomial {
public:
  explicit OperatorPolynomial(int modes) : modes_(modes) {}

  int modes() const { return modes_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int degree() const;

  OperatorPolynomial& operator+=(const OperatorPolynomial& other);
  friend OperatorPolynomial operator+(OperatorPolynomial a,
                                      const OperatorPolynomial& b) {
    a += b;
    return a;
  }
  friend OperatorPolynomial operator*(const Coeff& c, OperatorPolynomial p);

  // Adjoint of a normal-form word is again normal-form after block
  // sorting; no commutator terms arise.
  OperatorPolynomial adjoint() const;

  operator OperatorExpr() const;

  // Canonical text, e.g. (1+0i)*ad[1]*ad[2]*a[1]*a[2] + (2+0i)*ad[3]^2.
  std::string str() const;

  friend bool operator==(const OperatorPolynomial&,
                         const OperatorPolynomial&) = default;

  // Building blocks for the rewriting engine; words must already be
  // canonical. Zero coefficients are dropped.
  void add_term(Word w, const Coeff& c);

private:
  int modes_;
  TermMap terms_;
};

// Reorders every word daggered-first WITHOUT commutator corrections and
// canonicalizes blocks (the order-forgetting projection).
OperatorPolynomial normal_product(const OperatorExpr& p);

enum class RewriteStrategy { leftmost, rightmost };

// Returns an operator EQUAL to p in normal form, by repeatedly applying
// a_i a_j^+ = a_j^+ a_i + delta_ij. The strategy picks which reducible
// pair is contracted first; all strategies converge to the same canonical
// form (tested), the parameter exists to exercise that.
OperatorPolynomial rewrite_to_normal_form(
    const OperatorExpr& p, RewriteStrategy strategy = RewriteStrategy::leftmost);

// rewrite_to_normal_form(ab - ba).
OperatorPolynomial symbolic_commutator(const OperatorExpr& a,
                                       const OperatorExpr& b);

// ---------------------------------------------------------------------------
// Commutative polynomial layers
// ---------------------------------------------------------------------------

struct Var {
  enum class Kind { phi, pi, y, z };
  Kind kind;
  int mode;
};

// Commutative polynomial in the 2N classical variables
// (phi_1..phi_N, pi_1..pi_N) with exact coefficients. Exponent vectors have
// length 2N: slot j-1 is phi_j, slot N+j-1 is pi_j.
class PhiPiPolynomial {
public:
  explicit PhiPiPolynomial(int modes);
  static PhiPiPolynomial constant(int modes, Coeff c);
  static PhiPiPolynomial variable(int modes, Var v); // phi or pi kind

  int modes() const { return modes_; }
  const std::map<std::vector<int>, Coeff>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int degree() const;
  bool real_coefficients() const;

  PhiPiPolynomial& operator+=(const PhiPiPolynomial& other);
  PhiPiPolynomial& operator-=(const PhiPiPolynomial& other);
  PhiPiPolynomial& operator*=(const Coeff& c);
  friend PhiPiPolynomial operator+(PhiPiPolynomial a,
                                   const PhiPiPolynomial& b) {
    a += b;
    return a;
  }
  friend PhiPiPolynomial operator-(PhiPiPolynomial a,
                                   const PhiPiPolynomial& b) {
    a -= b;
    return a;
  }
  friend PhiPiPolynomial operator*(const Coeff& c, PhiPiPolynomial p) {
    p *= c;
    return p;
  }
  friend PhiPiPolynomial operator*(const PhiPiPolynomial& a,
                                   const PhiPiPolynomial& b);

  // Formal partial derivative. phi/pi differentiate directly; the complex
  // chart y_j = (phi_j - i pi_j)/sqrt2, z_j = (phi_j + i pi_j)/sqrt2 gives
  // d/dy = (d/dphi + i d/dpi)/sqrt2 and d/dz = (d/dphi - i d/dpi)/sqrt2.
  PhiPiPolynomial derivative(Var v) const;

  cplx evaluate(const std::vector<double>& phi,
                const std::vector<double>& pi) const;

  // Canonical text, e.g. (1/2+0i)*phi[1]^2 + (1/10+0i)*pi[2].
  std::string str() const;

  friend bool operator==(const PhiPiPolynomial&,
                         const PhiPiPolynomial&) = default;

  void add_term(std::vector<int> exps, const Coeff& c);

private:
  int modes_;
  std::map<std::vector<int>, Coeff> terms_;
};

// Commutative polynomial in the complex-chart variables
// (y_1..y_N, z_1..z_N); y carries creation amplitudes, z annihilation.
// Exponent slot j-1 is y_j, slot N+j-1 is z_j.
class YZPolynomial {
public:
  explicit YZPolynomial(int modes);

  // Substitutes phi_j = (y_j + z_j)/sqrt2, pi_j = i(y_j - z_j)/sqrt2.
  static YZPolynomial from_phipi(const PhiPiPolynomial& g);

  int modes() const { return modes_; }
  const std::map<std::vector<int>, Coeff>& terms() const { return terms_; }

  YZPolynomial derivative(Var v) const; // y or z kind

  // Monomial map y^m z^k -> (a^+)^m a^k per mode: the normal-form operator
  // of this polynomial. Together with from_phipi this realizes
  // substitute_normal.
  OperatorPolynomial to_normal_operator() const;

  friend bool operator==(const YZPolynomial&, const YZPolynomial&) = default;

  void add_term(std::vector<int> exps, const Coeff& c);

private:
  int modes_;
  std::map<std::vector<int>, Coeff> terms_;
};

// g_n(Phi, Pi): substitute Phi_j = (a_j + a_j^+)/sqrt2,
// Pi_j = (a_j - a_j^+)/(i sqrt2) and take the normal product of every
// resulting word. Computed through the complex chart.
OperatorPolynomial substitute_normal(const PhiPiPolynomial& g);

// Weyl-symmetric comparator: every monomial is expanded as the average of
// its operator factor products over all distinct orderings, then rewritten
// to normal form. Differs from substitute_normal by zero-point terms.
OperatorPolynomial substitute_symmetric(const PhiPiPolynomial& g);

// Phi_j and Pi_j as free operator expressions.
OperatorExpr phi_expr(int modes, int mode);
OperatorExpr pi_expr(int modes, int mode);

// Substitutes elementary matrices for generators, multiplying words
// left-to-right and summing with coefficients.
OperatorMatrix evaluate_matrix(const OperatorExpr& p, const FockBasis& basis);
OperatorMatrix evaluate_matrix(const OperatorPolynomial& p,
                               const FockBasis& basis);

// ---------------------------------------------------------------------------
// Text grammar
// ---------------------------------------------------------------------------

// Thrown with the byte offset of the first offending character.
struct ParseError : std::runtime_error {
  ParseError(std::size_t offset, const std::string& what);
  std::size_t offset;
};

// Operator expressions: terms joined by +/-, each term a '*'-separated
// product of parenthesized coefficients and generators ad[j] / a[j],
// with optional ^k powers. Example: (1+0i)*ad[1]*ad[2]*a[2]*a[1].
OperatorExpr parse_operator(const std::string& text, int modes);

// Classical polynomials over phi[j] / pi[j], same shape.
PhiPiPolynomial parse_phipi(const std::string& text, int modes);

} // namespace fockbridge
