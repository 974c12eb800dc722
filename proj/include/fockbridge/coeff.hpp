#pragma once

#include <complex>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace fockbridge {

// Exact scalars for the symbolic layer.
//
// Every coefficient the ladder algebra produces lives in Q(i, sqrt2):
// integers from commutator counting, i and 1/sqrt2 from the field-operator
// normalizations, and their sums and products. The field is closed under
// +,-,*,/ so canonical forms compare exactly; no floating point enters
// until matrix evaluation.

class Rational {
public:
  Rational() = default;
  Rational(std::int64_t n) : num_(n), den_(1) {}
  Rational(std::int64_t n, std::int64_t d) : num_(n), den_(d) {
    if (den_ == 0)
      throw std::domain_error("rational with zero denominator");
    normalize();
  }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  bool is_zero() const { return num_ == 0; }
  bool negative() const { return num_ < 0; }

  friend Rational operator+(const Rational& x, const Rational& y) {
    return from128(i128(x.num_) * y.den_ + i128(y.num_) * x.den_,
                   i128(x.den_) * y.den_);
  }
  friend Rational operator-(const Rational& x, const Rational& y) {
    return from128(i128(x.num_) * y.den_ - i128(y.num_) * x.den_,
                   i128(x.den_) * y.den_);
  }
  friend Rational operator*(const Rational& x, const Rational& y) {
    return from128(i128(x.num_) * y.num_, i128(x.den_) * y.den_);
  }
  friend Rational operator/(const Rational& x, const Rational& y) {
    if (y.num_ == 0)
      throw std::domain_error("rational division by zero");
    return from128(i128(x.num_) * y.den_, i128(x.den_) * y.num_);
  }
  Rational operator-() const {
    Rational r;
    r.num_ = -num_;
    r.den_ = den_;
    return r;
  }
  friend bool operator==(const Rational&, const Rational&) = default;

  double to_double() const {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }

  // "3", "-1/2"
  std::string str() const {
    std::string s = std::to_string(num_);
    if (den_ != 1)
      s += "/" + std::to_string(den_);
    return s;
  }

private:
  using i128 = __int128;

  static Rational from128(i128 n, i128 d) {
    if (d < 0) {
      n = -n;
      d = -d;
    }
    const i128 g = gcd128(n < 0 ? -n : n, d);
    if (g > 1) {
      n /= g;
      d /= g;
    }
    if (n > INT64_MAX || n < INT64_MIN || d > INT64_MAX)
      throw std::overflow_error("rational overflow");
    Rational r;
    r.num_ = static_cast<std::int64_t>(n);
    r.den_ = static_cast<std::int64_t>(d);
    return r;
  }
  static i128 gcd128(i128 a, i128 b) {
    while (b != 0) {
      const i128 t = a % b;
      a = b;
      b = t;
    }
    return a == 0 ? 1 : a;
  }
  void normalize() {
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    const std::int64_t g = std::gcd(num_ < 0 ? -num_ : num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

// p + q*sqrt2 with rational p, q. sqrt2*sqrt2 = 2 keeps products in the set;
// the conjugate p - q*sqrt2 gives inverses (p^2 - 2q^2 = 0 only at 0).
class QSqrt2 {
public:
  QSqrt2() = default;
  QSqrt2(Rational p) : p_(p) {}
  QSqrt2(Rational p, Rational q) : p_(p), q_(q) {}

  const Rational& rat() const { return p_; }
  const Rational& s2() const { return q_; }
  bool is_zero() const { return p_.is_zero() && q_.is_zero(); }

  friend QSqrt2 operator+(const QSqrt2& x, const QSqrt2& y) {
    return {x.p_ + y.p_, x.q_ + y.q_};
  }
  friend QSqrt2 operator-(const QSqrt2& x, const QSqrt2& y) {
    return {x.p_ - y.p_, x.q_ - y.q_};
  }
  friend QSqrt2 operator*(const QSqrt2& x, const QSqrt2& y) {
    return {x.p_ * y.p_ + Rational(2) * x.q_ * y.q_,
            x.p_ * y.q_ + x.q_ * y.p_};
  }
  QSqrt2 inverse() const {
    const Rational d = p_ * p_ - Rational(2) * q_ * q_;
    if (d.is_zero())
      throw std::domain_error("inverse of zero");
    return {p_ / d, -q_ / d};
  }
  QSqrt2 operator-() const { return {-p_, -q_}; }
  friend bool operator==(const QSqrt2&, const QSqrt2&) = default;

  double to_double() const {
    constexpr double sqrt2 = 1.4142135623730950488;
    return p_.to_double() + q_.to_double() * sqrt2;
  }

private:
  Rational p_;
  Rational q_;
};

class Coeff {
public:
  Coeff() = default;
  Coeff(std::int64_t n) : re_(Rational(n)) {}
  Coeff(Rational r) : re_(r) {}
  Coeff(QSqrt2 re, QSqrt2 im = {}) : re_(re), im_(im) {}

  static Coeff i() { return Coeff(QSqrt2{}, QSqrt2{Rational(1)}); }
  static Coeff sqrt2() { return Coeff(QSqrt2{Rational(0), Rational(1)}); }
  static Coeff inv_sqrt2() {
    return Coeff(QSqrt2{Rational(0), Rational(1, 2)});
  }

  const QSqrt2& re() const { return re_; }
  const QSqrt2& im() const { return im_; }
  bool is_zero() const { return re_.is_zero() && im_.is_zero(); }
  bool is_real() const { return im_.is_zero(); }

  friend Coeff operator+(const Coeff& x, const Coeff& y) {
    return {x.re_ + y.re_, x.im_ + y.im_};
  }
  friend Coeff operator-(const Coeff& x, const Coeff& y) {
    return {x.re_ - y.re_, x.im_ - y.im_};
  }
  friend Coeff operator*(const Coeff& x, const Coeff& y) {
    return {x.re_ * y.re_ - x.im_ * y.im_, x.re_ * y.im_ + x.im_ * y.re_};
  }
  friend Coeff operator/(const Coeff& x, const Coeff& y) {
    const QSqrt2 d = (y.re_ * y.re_ + y.im_ * y.im_).inverse();
    return {(x.re_ * y.re_ + x.im_ * y.im_) * d,
            (x.im_ * y.re_ - x.re_ * y.im_) * d};
  }
  Coeff operator-() const { return {-re_, -im_}; }
  Coeff conj() const { return {re_, -im_}; }
  friend bool operator==(const Coeff&, const Coeff&) = default;

  std::complex<double> to_complex() const {
    return {re_.to_double(), im_.to_double()};
  }

  // Canonical text form, always parenthesized by the polynomial printer:
  // rational real atom, then the sqrt2 real atom if nonzero, then the
  // rational imaginary atom (always present, sign-prefixed), then the
  // sqrt2 imaginary atom if nonzero. "1+0i", "0+1/2*s2+1i", "0-1*s2i+0i".
  std::string str() const {
    std::string s = re_.rat().str();
    if (!re_.s2().is_zero())
      s += signed_atom(re_.s2(), "*s2");
    s += signed_atom(im_.rat(), "i");
    if (!im_.s2().is_zero())
      s += signed_atom(im_.s2(), "*s2i");
    return s;
  }

private:
  static std::string signed_atom(const Rational& r, const char* suffix) {
    if (r.negative())
      return (-r).str().insert(0, "-") + suffix;
    return "+" + r.str() + suffix;
  }

  QSqrt2 re_;
  QSqrt2 im_;
};

} // namespace fockbridge
