#include "toa/clifford2.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "toa/errors.hpp"

namespace toa {

double max_abs(const Matrix2d& m) {
  double out = 0.0;
  for (const auto& z : m.entries()) out = std::max(out, std::abs(z));
  return out;
}

Matrix2d to_numeric(const ExactMatrix2& m) {
  return Matrix2d(m(0, 0).to_complex(), m(0, 1).to_complex(), m(1, 0).to_complex(),
                  m(1, 1).to_complex());
}

ExactDiracPair make_dirac_pair(const std::array<Rational, 3>& alpha_in,
                               const std::array<Rational, 3>& beta_in) {
  // Entries built as mpq_class(num, den) are not reduced; exact equality needs them to be.
  std::array<Rational, 3> alpha = alpha_in, beta = beta_in;
  for (auto* v : {&alpha, &beta}) {
    for (auto& x : *v) x.canonicalize();
  }
  auto dot = [](const auto& u, const auto& v) -> Rational {
    return u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
  };
  if (dot(alpha, alpha) != 1) {
    throw ConstraintViolation("|alpha|^2 = " + dot(alpha, alpha).get_str() + ", expected 1");
  }
  if (dot(beta, beta) != 1) {
    throw ConstraintViolation("|beta|^2 = " + dot(beta, beta).get_str() + ", expected 1");
  }
  if (dot(alpha, beta) != 0) {
    throw ConstraintViolation("alpha . beta = " + dot(alpha, beta).get_str() + ", expected 0");
  }
  return ExactDiracPair(alpha, beta);
}

DiracPair make_dirac_pair(const std::array<double, 3>& alpha, const std::array<double, 3>& beta) {
  auto dot = [](const auto& u, const auto& v) { return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]; };
  for (double x : alpha) {
    if (!std::isfinite(x)) throw ConstraintViolation("alpha has a non-finite component");
  }
  for (double x : beta) {
    if (!std::isfinite(x)) throw ConstraintViolation("beta has a non-finite component");
  }
  auto check = [](double value, double expected, const char* what) {
    if (std::abs(value - expected) > kPairTolerance) {
      std::ostringstream os;
      os.precision(17);
      os << what << " = " << value << ", expected " << expected;
      throw ConstraintViolation(os.str());
    }
  };
  check(dot(alpha, alpha), 1.0, "|alpha|^2");
  check(dot(beta, beta), 1.0, "|beta|^2");
  check(dot(alpha, beta), 0.0, "alpha . beta");
  return DiracPair(alpha, beta);
}

DiracPair to_numeric(const ExactDiracPair& pair) {
  std::array<double, 3> a{}, b{};
  for (std::size_t k = 0; k < 3; ++k) {
    a[k] = pair.alpha()[k].get_d();
    b[k] = pair.beta()[k].get_d();
  }
  return make_dirac_pair(a, b);
}

namespace {

template <class S, class Real>
Matrix2<S> combine(const std::array<Real, 3>& v) {
  Matrix2<S> out;
  for (int j = 1; j <= 3; ++j) {
    out += S(v[static_cast<std::size_t>(j - 1)]) * pauli<S>(j);
  }
  return out;
}

}  // namespace

ExactMatrix2 a_matrix(const ExactDiracPair& pair) { return combine<QComplex>(pair.alpha()); }
ExactMatrix2 b_matrix(const ExactDiracPair& pair) { return combine<QComplex>(pair.beta()); }
Matrix2d a_matrix(const DiracPair& pair) { return combine<Complex>(pair.alpha()); }
Matrix2d b_matrix(const DiracPair& pair) { return combine<Complex>(pair.beta()); }

ExactDiracPair standard_pair() {
  using V = std::array<Rational, 3>;
  return make_dirac_pair(V{1, 0, 0}, V{0, 0, 1});
}

ExactDiracPair rotated_pair() {
  using V = std::array<Rational, 3>;
  return make_dirac_pair(V{1, 0, 0}, V{0, 1, 0});
}

ExactDiracPair sample_dirac_pair(std::uint64_t seed) {
  // Raw engine output keeps the sequence identical across standard libraries.
  std::mt19937_64 engine(seed ^ 0x9e3779b97f4a7c15ULL);
  std::array<long, 4> q{};
  do {
    for (auto& x : q) x = static_cast<long>(engine() % 19) - 9;
  } while (q[0] == 0 && q[1] == 0 && q[2] == 0 && q[3] == 0);

  const long a = q[0], b = q[1], c = q[2], d = q[3];
  const Rational n(a * a + b * b + c * c + d * d);
  // Columns 0 and 2 of the rotation matrix of quaternion (a, b, c, d).
  std::array<Rational, 3> alpha{Rational(a * a + b * b - c * c - d * d) / n,
                                Rational(2 * (b * c + a * d)) / n,
                                Rational(2 * (b * d - a * c)) / n};
  std::array<Rational, 3> beta{Rational(2 * (b * d + a * c)) / n,
                               Rational(2 * (c * d - a * b)) / n,
                               Rational(a * a - b * b - c * c + d * d) / n};
  return make_dirac_pair(alpha, beta);
}

std::string describe(const ExactDiracPair& pair) {
  std::ostringstream os;
  os << "alpha=(" << pair.alpha()[0] << "," << pair.alpha()[1] << "," << pair.alpha()[2]
     << ") beta=(" << pair.beta()[0] << "," << pair.beta()[1] << "," << pair.beta()[2] << ")";
  return os.str();
}

}  // namespace toa
