#pragma once

#include <complex>
#include <compare>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace toa {

using Rational = mpq_class;

/// Parses "3", "-3/5", "0.25", "-1.5e-3" into an exact rational.
/// Decimal strings are read exactly (0.1 is 1/10, not the nearest double).
Rational parse_rational(std::string_view text);

std::string to_string(const Rational& q);

/// Exact element of Q(i).
class QComplex {
 public:
  QComplex() = default;
  QComplex(int re) : re_(re) {}  // NOLINT(google-explicit-constructor)
  // mpq_class(num, den) does not reduce; equality needs canonical parts.
  QComplex(Rational re) : re_(std::move(re)) { re_.canonicalize(); }  // NOLINT(google-explicit-constructor)
  QComplex(Rational re, Rational im) : re_(std::move(re)), im_(std::move(im)) {
    re_.canonicalize();
    im_.canonicalize();
  }

  static QComplex i() { return {Rational(0), Rational(1)}; }

  const Rational& real() const { return re_; }
  const Rational& imag() const { return im_; }

  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
  QComplex conj() const { return {re_, -im_}; }
  Rational norm_squared() const { return re_ * re_ + im_ * im_; }

  QComplex& operator+=(const QComplex& o);
  QComplex& operator-=(const QComplex& o);
  QComplex& operator*=(const QComplex& o);
  /// Throws std::domain_error on division by zero.
  QComplex& operator/=(const QComplex& o);

  friend QComplex operator+(QComplex a, const QComplex& b) { return a += b; }
  friend QComplex operator-(QComplex a, const QComplex& b) { return a -= b; }
  friend QComplex operator*(QComplex a, const QComplex& b) { return a *= b; }
  friend QComplex operator/(QComplex a, const QComplex& b) { return a /= b; }
  friend QComplex operator-(const QComplex& a) { return {-a.re_, -a.im_}; }

  friend bool operator==(const QComplex& a, const QComplex& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }

  std::complex<double> to_complex() const { return {re_.get_d(), im_.get_d()}; }

  /// "0", "3/4", "-1/2*i", "(1+2*i)"; stable across platforms.
  std::string to_string() const;

 private:
  Rational re_{0};
  Rational im_{0};
};

}  // namespace toa
