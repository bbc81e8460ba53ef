#pragma once

#include <compare>
#include <map>
#include <string>

#include "toa/clifford2.hpp"
#include "toa/exact.hpp"
#include "toa/phys_params.hpp"

namespace toa {

/// Exponents of hbar^a c^b m0^d; negative exponents allowed.
struct Monomial {
  int hbar = 0;
  int c = 0;
  int m0 = 0;

  friend auto operator<=>(const Monomial&, const Monomial&) = default;
  friend Monomial operator*(const Monomial& x, const Monomial& y) {
    return {x.hbar + y.hbar, x.c + y.c, x.m0 + y.m0};
  }
  friend Monomial operator/(const Monomial& x, const Monomial& y) {
    return {x.hbar - y.hbar, x.c - y.c, x.m0 - y.m0};
  }

  double evaluate(const PhysParams& params) const;
  std::string to_string() const;
};

/// coeff * hbar^a c^b m0^d.
struct SymScalar {
  QComplex coeff;
  Monomial exps;

  friend bool operator==(const SymScalar&, const SymScalar&) = default;
};

/// Finite sum of SymScalars, canonical: one entry per monomial, no zero coefficients.
class SymPoly {
 public:
  SymPoly() = default;
  SymPoly(int value) : SymPoly(QComplex(value)) {}  // NOLINT(google-explicit-constructor)
  SymPoly(const QComplex& value) { add(value, Monomial{}); }  // NOLINT(google-explicit-constructor)
  SymPoly(const SymScalar& s) { add(s.coeff, s.exps); }  // NOLINT(google-explicit-constructor)

  static SymPoly hbar(int power = 1) { return SymPoly(SymScalar{1, {power, 0, 0}}); }
  static SymPoly c(int power = 1) { return SymPoly(SymScalar{1, {0, power, 0}}); }
  static SymPoly m0(int power = 1) { return SymPoly(SymScalar{1, {0, 0, power}}); }

  const std::map<Monomial, QComplex>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_monomial() const { return terms_.size() == 1; }
  /// Requires is_monomial().
  SymScalar as_monomial() const;

  SymPoly conj() const;
  std::complex<double> evaluate(const PhysParams& params) const;
  std::string to_string() const;

  SymPoly& operator+=(const SymPoly& o);
  SymPoly& operator-=(const SymPoly& o);
  SymPoly& operator*=(const SymPoly& o);

  friend SymPoly operator+(SymPoly a, const SymPoly& b) { return a += b; }
  friend SymPoly operator-(SymPoly a, const SymPoly& b) { return a -= b; }
  friend SymPoly operator-(const SymPoly& a) { return SymPoly() - a; }
  friend SymPoly operator*(const SymPoly& a, const SymPoly& b) {
    SymPoly out = a;
    return out *= b;
  }
  friend bool operator==(const SymPoly&, const SymPoly&) = default;

 private:
  void add(const QComplex& coeff, const Monomial& exps);
  std::map<Monomial, QComplex> terms_;
};

template <>
struct ScalarTraits<SymPoly> {
  static SymPoly from(const QComplex& q) { return SymPoly(q); }
  static SymPoly conj(const SymPoly& z) { return z.conj(); }
  static bool is_zero(const SymPoly& z) { return z.is_zero(); }
};

using SymMatrix2 = Matrix2<SymPoly>;

SymMatrix2 to_symbolic(const ExactMatrix2& m);
Matrix2d evaluate(const SymMatrix2& m, const PhysParams& params);

}  // namespace toa
