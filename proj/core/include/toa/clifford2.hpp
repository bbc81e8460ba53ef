#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <string>

#include "toa/exact.hpp"

namespace toa {

using Complex = std::complex<double>;

/// Scalar customization point for Matrix2. Each scalar type provides
/// construction from an exact complex rational, conjugation and a zero test.
template <class S>
struct ScalarTraits;

template <>
struct ScalarTraits<Complex> {
  static Complex from(const QComplex& q) { return q.to_complex(); }
  static Complex conj(const Complex& z) { return std::conj(z); }
  static bool is_zero(const Complex& z) { return z == Complex{}; }
};

template <>
struct ScalarTraits<QComplex> {
  static QComplex from(const QComplex& q) { return q; }
  static QComplex conj(const QComplex& z) { return z.conj(); }
  static bool is_zero(const QComplex& z) { return z.is_zero(); }
};

/// 2x2 matrix over a (possibly noncommutative-free, but associative) scalar ring.
template <class S>
class Matrix2 {
 public:
  using Scalar = S;

  Matrix2() : e_{S(ScalarTraits<S>::from(0)), S(ScalarTraits<S>::from(0)),
                 S(ScalarTraits<S>::from(0)), S(ScalarTraits<S>::from(0))} {}
  Matrix2(S a00, S a01, S a10, S a11)
      : e_{std::move(a00), std::move(a01), std::move(a10), std::move(a11)} {}

  static Matrix2 zero() { return Matrix2(); }
  static Matrix2 identity() {
    S one = ScalarTraits<S>::from(1);
    S nil = ScalarTraits<S>::from(0);
    return Matrix2(one, nil, nil, one);
  }

  S& operator()(int r, int c) { return e_[static_cast<std::size_t>(2 * r + c)]; }
  const S& operator()(int r, int c) const { return e_[static_cast<std::size_t>(2 * r + c)]; }

  Matrix2& operator+=(const Matrix2& o) {
    for (std::size_t k = 0; k < 4; ++k) e_[k] += o.e_[k];
    return *this;
  }
  Matrix2& operator-=(const Matrix2& o) {
    for (std::size_t k = 0; k < 4; ++k) e_[k] -= o.e_[k];
    return *this;
  }
  Matrix2& operator*=(const S& s) {
    for (auto& x : e_) x *= s;
    return *this;
  }

  friend Matrix2 operator+(Matrix2 a, const Matrix2& b) { return a += b; }
  friend Matrix2 operator-(Matrix2 a, const Matrix2& b) { return a -= b; }
  friend Matrix2 operator-(const Matrix2& a) { return Matrix2() - a; }
  friend Matrix2 operator*(Matrix2 a, const S& s) { return a *= s; }
  friend Matrix2 operator*(const S& s, const Matrix2& a) {
    Matrix2 out;
    for (std::size_t k = 0; k < 4; ++k) out.e_[k] = s * a.e_[k];
    return out;
  }
  friend Matrix2 operator*(const Matrix2& a, const Matrix2& b) {
    return Matrix2(a(0, 0) * b(0, 0) + a(0, 1) * b(1, 0), a(0, 0) * b(0, 1) + a(0, 1) * b(1, 1),
                   a(1, 0) * b(0, 0) + a(1, 1) * b(1, 0), a(1, 0) * b(0, 1) + a(1, 1) * b(1, 1));
  }
  friend bool operator==(const Matrix2& a, const Matrix2& b) { return a.e_ == b.e_; }

  Matrix2 adjoint() const {
    using T = ScalarTraits<S>;
    return Matrix2(T::conj(e_[0]), T::conj(e_[2]), T::conj(e_[1]), T::conj(e_[3]));
  }

  bool is_zero() const {
    for (const auto& x : e_) {
      if (!ScalarTraits<S>::is_zero(x)) return false;
    }
    return true;
  }

  const std::array<S, 4>& entries() const { return e_; }

 private:
  std::array<S, 4> e_;
};

using ExactMatrix2 = Matrix2<QComplex>;
using Matrix2d = Matrix2<Complex>;

/// sigma_0 (identity) through sigma_3.
template <class S>
Matrix2<S> pauli(int j) {
  using T = ScalarTraits<S>;
  const S o = T::from(0), one = T::from(1), m_one = T::from(-1);
  const S i = T::from(QComplex::i()), m_i = T::from(-QComplex::i());
  switch (j) {
    case 0: return Matrix2<S>(one, o, o, one);
    case 1: return Matrix2<S>(o, one, one, o);
    case 2: return Matrix2<S>(o, m_i, i, o);
    case 3: return Matrix2<S>(one, o, o, m_one);
    default: throw std::out_of_range("pauli index must be 0..3");
  }
}

/// Coefficients c_j with M = sum_j c_j sigma_j, c_j = tr(sigma_j M) / 2.
template <class S>
std::array<S, 4> pauli_decompose(const Matrix2<S>& m) {
  using T = ScalarTraits<S>;
  const S half = T::from(QComplex(Rational(1, 2)));
  const S half_i = T::from(QComplex(Rational(0), Rational(1, 2)));
  return {half * (m(0, 0) + m(1, 1)), half * (m(0, 1) + m(1, 0)), half_i * (m(0, 1) - m(1, 0)),
          half * (m(0, 0) - m(1, 1))};
}

template <class S>
Matrix2<S> pauli_recompose(const std::array<S, 4>& c) {
  Matrix2<S> out;
  for (int j = 0; j < 4; ++j) out += c[static_cast<std::size_t>(j)] * pauli<S>(j);
  return out;
}

template <class S>
Matrix2<S> commutator(const Matrix2<S>& m, const Matrix2<S>& n) {
  return m * n - n * m;
}

template <class S>
Matrix2<S> anticommutator(const Matrix2<S>& m, const Matrix2<S>& n) {
  return m * n + n * m;
}

/// Largest entry modulus; numeric mode only.
double max_abs(const Matrix2d& m);

/// Converts an exact matrix to double precision.
Matrix2d to_numeric(const ExactMatrix2& m);

/// Real unit vectors (alpha, beta) with alpha . beta = 0; they induce the
/// anticommuting involutions A = sum alpha_j sigma_j and B = sum beta_j sigma_j.
/// Only obtainable through make_dirac_pair, so every instance is validated.
template <class Real>
class BasicDiracPair {
 public:
  using Vec3 = std::array<Real, 3>;

  const Vec3& alpha() const { return alpha_; }
  const Vec3& beta() const { return beta_; }

  /// alpha_1 beta_2 - alpha_2 beta_1, the factor controlling the parity-odd term.
  Real cross_z() const { return alpha_[0] * beta_[1] - alpha_[1] * beta_[0]; }

  friend bool operator==(const BasicDiracPair&, const BasicDiracPair&) = default;

 private:
  friend BasicDiracPair<Rational> make_dirac_pair(const std::array<Rational, 3>&,
                                                  const std::array<Rational, 3>&);
  friend BasicDiracPair<double> make_dirac_pair(const std::array<double, 3>&,
                                                const std::array<double, 3>&);

  BasicDiracPair(Vec3 a, Vec3 b) : alpha_(std::move(a)), beta_(std::move(b)) {}

  Vec3 alpha_;
  Vec3 beta_;
};

using ExactDiracPair = BasicDiracPair<Rational>;
using DiracPair = BasicDiracPair<double>;

/// Exact validation: |alpha| = |beta| = 1 and alpha . beta = 0 with zero tolerance.
/// Throws ConstraintViolation otherwise.
ExactDiracPair make_dirac_pair(const std::array<Rational, 3>& alpha,
                               const std::array<Rational, 3>& beta);

/// Numeric validation at absolute tolerance 1e-12.
DiracPair make_dirac_pair(const std::array<double, 3>& alpha, const std::array<double, 3>& beta);

inline constexpr double kPairTolerance = 1e-12;

DiracPair to_numeric(const ExactDiracPair& pair);

ExactMatrix2 a_matrix(const ExactDiracPair& pair);
ExactMatrix2 b_matrix(const ExactDiracPair& pair);
Matrix2d a_matrix(const DiracPair& pair);
Matrix2d b_matrix(const DiracPair& pair);

/// alpha = (1,0,0), beta = (0,0,1): A = sigma_1, B = sigma_3.
ExactDiracPair standard_pair();
/// alpha = (1,0,0), beta = (0,1,0): A = sigma_1, B = sigma_2.
ExactDiracPair rotated_pair();

/// Applies a seeded rational rotation to the standard pair. The rotation
/// comes from an integer quaternion, so the result is exactly orthonormal.
ExactDiracPair sample_dirac_pair(std::uint64_t seed);

std::string describe(const ExactDiracPair& pair);

}  // namespace toa
