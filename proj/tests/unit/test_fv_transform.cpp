#include <gtest/gtest.h>

#include "printers.hpp"

#include <cmath>

#include "test_support.hpp"
#include "toa/errors.hpp"
#include "toa/fv_transform.hpp"

namespace toa {
namespace {

using testing::bump_spinor;
using D = std::array<double, 3>;

const PhysParams kNatural = PhysParams::natural();
const PhysParams kScaled{2.0, 3.0, 0.5};

DiracPair numeric(const ExactDiracPair& p) { return to_numeric(p); }

std::vector<DiracPair> test_pairs() {
  std::vector<DiracPair> out{numeric(standard_pair()), numeric(rotated_pair())};
  for (std::uint64_t seed = 0; seed < 8; ++seed) out.push_back(numeric(sample_dirac_pair(seed)));
  return out;
}

TEST(UMatrix, StandardPairAtRest) {
  const Matrix2d u = u_matrix(0.0, numeric(standard_pair()), kNatural);
  EXPECT_LT(max_abs(u - pauli<Complex>(3)), 1e-15);
}

TEST(UMatrix, HermitianInvolutionThatDiagonalizes) {
  for (const auto& pair : test_pairs()) {
    for (const auto& params : {kNatural, kScaled}) {
      for (double p : {-4.0, -1.3, -0.2, 0.0, 0.2, 1.3, 4.0}) {
        const Matrix2d u = u_matrix(p, pair, params);
        const double e = params.energy(p);
        EXPECT_LT(max_abs(u - u.adjoint()), 1e-13);
        EXPECT_LT(max_abs(u * u - Matrix2d::identity()), 1e-12);
        const Matrix2d d = u * hamiltonian_psi(p, pair, params) * u;
        EXPECT_LT(max_abs(d - Complex(e) * pauli<Complex>(3)), 1e-12 * e);
      }
    }
  }
}

// Direct product-rule derivative of ((E + m) sigma_3 + p sigma_1) / sqrt(2E(E + m)),
// the natural-unit U of the standard pair.
Matrix2d standard_du(double p) {
  const double e = std::sqrt(p * p + 1.0);
  const double n = std::sqrt(2.0 * e * (e + 1.0));
  const double dn = (p * (e + 1.0) / e + p) / n;
  const Matrix2d num = Complex(e + 1.0) * pauli<Complex>(3) + Complex(p) * pauli<Complex>(1);
  const Matrix2d dnum = Complex(p / e) * pauli<Complex>(3) + pauli<Complex>(1);
  return Complex(1.0 / n) * dnum - Complex(dn / (n * n)) * num;
}

TEST(UMatrix, DerivativeClosedForm) {
  const DiracPair standard = numeric(standard_pair());
  for (double p : {-2.5, -0.7, 0.0, 0.3, 1.9}) {
    EXPECT_LT(max_abs(du_inv_dp(p, standard, kNatural) - standard_du(p)), 1e-14);
  }
  EXPECT_LT(max_abs(du_inv_dp(0.0, standard, kNatural) - Complex(0.5) * pauli<Complex>(1)),
            1e-15);

  // Richardson-extrapolated central differences for every other pair.
  for (const auto& pair : test_pairs()) {
    for (const auto& params : {kNatural, kScaled}) {
      for (double p : {-1.1, 0.4, 1.3}) {
        auto central = [&](double h) {
          return Complex(1.0 / (2.0 * h)) *
                 (u_matrix(p + h, pair, params) - u_matrix(p - h, pair, params));
        };
        const double h = 1e-3 * params.m0 * params.c;
        const Matrix2d fd = Complex(4.0 / 3.0) * central(h / 2) - Complex(1.0 / 3.0) * central(h);
        EXPECT_LT(max_abs(du_inv_dp(p, pair, params) - fd), 1e-9);
      }
    }
  }
}

TEST(UMatrix, GuardRejectsNearSingularPoints) {
  const DiracPair along_p = make_dirac_pair(D{0, 0, 1}, D{1, 0, 0});
  EXPECT_NO_THROW(u_matrix(-10.0, along_p, kNatural));
  EXPECT_FALSE(u_guard_ok(-1000.0, along_p, kNatural));
  EXPECT_THROW(u_matrix(-1000.0, along_p, kNatural), NearSingularU);
  EXPECT_THROW(du_inv_dp(-1000.0, along_p, kNatural), NearSingularU);
  EXPECT_NO_THROW(u_matrix(1000.0, along_p, kNatural));
  const auto grid = MomentumGrid::symmetric(1000.0, 2000);
  const std::size_t bad = count_near_singular(grid, along_p, kNatural);
  EXPECT_GT(bad, 0u);
  EXPECT_LT(bad, grid.size() / 2);
  EXPECT_EQ(count_near_singular(grid, numeric(standard_pair()), kNatural), 0u);

  // Just inside the guard the shift is ~1e-6 E, yet U stays accurate.
  for (double p = -700.0; p > -720.0; p -= 1.0) {
    if (!u_guard_ok(p, along_p, kNatural)) continue;
    const Matrix2d u = u_matrix(p, along_p, kNatural);
    EXPECT_LT(max_abs(u * u - Matrix2d::identity()), 1e-13);
    const Matrix2d d = u * hamiltonian_psi(p, along_p, kNatural) * u;
    EXPECT_LT(max_abs(d - Complex(kNatural.energy(p)) * pauli<Complex>(3)), 1e-13 * kNatural.energy(p));
  }
  // Shift computed without cancellation: 1 / (E + |p|) for alpha = sigma_3, beta = sigma_1.
  EXPECT_NEAR(u_shift(-1e4, along_p, kNatural) * (std::sqrt(1e8 + 1.0) + 1e4), 1.0, 1e-14);
}

TEST(THat, CoefficientsAtUnitMomentum) {
  const THatCoeffs t = t_hat_coeffs(1.0, kNatural);
  EXPECT_NEAR(t.drift.real(), 0.0, 0.0);
  EXPECT_NEAR(t.drift.imag(), -1.41421356237309504880, 1e-15);
  EXPECT_NEAR(t.potential.imag(), 0.35355339059327376220, 1e-15);
  // hbar = 2, c = 3, m0 = 0.5, p = 1: E = sqrt(9 + 20.25).
  const double e = std::sqrt(29.25);
  const THatCoeffs s = t_hat_coeffs(1.0, kScaled);
  EXPECT_NEAR(s.drift.imag(), -2.0 * e / 9.0, 1e-14);
  EXPECT_NEAR(s.potential.imag(), 2.0 * 0.25 * 9.0 / (2.0 * e), 1e-14);
}

TEST(THat, CoefficientParity) {
  for (double p : {0.1, 0.8, 3.0}) {
    const auto plus = t_hat_coeffs(p, kScaled);
    const auto minus = t_hat_coeffs(-p, kScaled);
    EXPECT_EQ(plus.drift, -minus.drift);
    EXPECT_EQ(plus.potential, minus.potential);
  }
  EXPECT_THROW(t_hat_coeffs(0.0, kNatural), SingularAtZero);
}

TEST(THat, BenderDunneFormMatchesDriftForm) {
  for (const auto& params : {kNatural, kScaled}) {
    const double mc = params.m0 * params.c;
    const auto grid = MomentumGrid::symmetric(5.0 * mc, 8192);
    for (double centre : {-2.5, 2.5}) {
      const SpinorGrid phi = bump_spinor(grid, centre * mc, 2.0 * mc, 1.0, Complex(0.3, -0.4));
      EXPECT_LT(relative_difference(apply_t_hat_bender_dunne(phi, params), apply_t_hat(phi, params)),
                1e-8);
    }
  }
}

TEST(T0, ScalarValues) {
  EXPECT_EQ(t0_scalar(1.0, numeric(standard_pair()), kNatural), Complex(0.0));
  const DiracPair rotated = numeric(rotated_pair());
  EXPECT_NEAR(t0_scalar(1.0, rotated, kNatural).real(), -1.0 / (2.0 * std::sqrt(2.0)), 1e-15);
  EXPECT_NE(t0_scalar(-1.0, rotated, kNatural), t0_scalar(1.0, rotated, kNatural));
  EXPECT_THROW(t0_scalar(0.0, rotated, kNatural), SingularAtZero);
}

TEST(Conjugation, MatchesClosedFormPieces) {
  std::vector<DiracPair> pairs{make_dirac_pair(D{1, 0, 0}, D{0, 1, 0})};
  for (const auto& p : test_pairs()) pairs.push_back(p);
  for (const auto& params : {kNatural, kScaled}) {
    const double mc = params.m0 * params.c;
    const auto grid = MomentumGrid::symmetric(5.0 * mc, 8192);
    for (const auto& pair : pairs) {
      for (double centre : {-2.5, 2.5}) {
        const SpinorGrid phi = bump_spinor(grid, centre * mc, 2.0 * mc, Complex(1, 0.2), 0.6);
        const SpinorGrid expected = apply_t_hat(phi, params) + apply_t0(phi, pair, params);
        EXPECT_LT(relative_difference(conjugate_toa_numeric(pair, params, phi), expected), 1e-6);
      }
    }
  }
}

TEST(Conjugation, StandardPairHasNoScalarPiece) {
  const auto grid = MomentumGrid::symmetric(5.0, 8192);
  const SpinorGrid phi = bump_spinor(grid, 2.5, 2.0, 1.0, 0.5);
  const DiracPair standard = numeric(standard_pair());
  EXPECT_EQ(testing::max_component(apply_t0(phi, standard, kNatural)), 0.0);
  EXPECT_LT(relative_difference(conjugate_toa_numeric(standard, kNatural, phi),
                                apply_t_hat(phi, kNatural)),
            1e-6);
}

TEST(Conjugation, PositiveEnergyStatesStayPositive) {
  const auto grid = MomentumGrid::symmetric(5.0, 8192);
  for (const auto& pair : test_pairs()) {
    const SpinorGrid phi = bump_spinor(grid, -2.5, 2.0, 1.0, 0.0);
    const SpinorGrid t_hat = apply_t_hat(phi, kNatural);
    const SpinorGrid t0 = apply_t0(phi, pair, kNatural);
    const SpinorGrid h = apply_hamiltonian_phi(phi, kNatural);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      ASSERT_EQ(t_hat.lower[k], Complex(0.0));
      ASSERT_EQ(t0.lower[k], Complex(0.0));
      ASSERT_EQ(h.lower[k], Complex(0.0));
    }
    const SpinorGrid conj = conjugate_toa_numeric(pair, kNatural, phi);
    SpinorGrid lower_only = SpinorGrid::zeros(grid);
    lower_only.lower = conj.lower;
    EXPECT_LT(lower_only.norm() / conj.norm(), 1e-8);
  }
}

TEST(Conjugation, RejectsSingularGrids) {
  const auto grid = MomentumGrid::uniform(-1.0, 1.0, 101);
  const SpinorGrid phi = SpinorGrid::zeros(grid);
  const DiracPair standard = numeric(standard_pair());
  EXPECT_THROW(apply_t_hat(phi, kNatural), SingularGrid);
  EXPECT_THROW(apply_t0(phi, standard, kNatural), SingularGrid);
  EXPECT_THROW(conjugate_toa_numeric(standard, kNatural, phi), SingularGrid);
}

TEST(PhiRepresentation, HamiltonianCommutesWithScalarPiece) {
  const auto grid = MomentumGrid::symmetric(5.0, 2048);
  for (const auto& pair : test_pairs()) {
    const SpinorGrid phi = bump_spinor(grid, 2.5, 2.0, Complex(0.4, 1), 0.7);
    const SpinorGrid a = apply_hamiltonian_phi(apply_t0(phi, pair, kScaled), kScaled);
    const SpinorGrid b = apply_t0(apply_hamiltonian_phi(phi, kScaled), pair, kScaled);
    EXPECT_LE(relative_difference(a, b), 1e-15);
  }
}

TEST(PhiRepresentation, CanonicalCommutator) {
  for (const auto& params : {kNatural, kScaled}) {
    const double mc = params.m0 * params.c;
    const auto grid = MomentumGrid::symmetric(5.0 * mc, 8192);
    const DiracPair pair = numeric(sample_dirac_pair(4));
    for (double centre : {-2.5, 2.5}) {
      const SpinorGrid phi = bump_spinor(grid, centre * mc, 2.0 * mc, 1.0, Complex(0, 0.5));
      auto t = [&](const SpinorGrid& s) { return apply_t_hat(s, params) + apply_t0(s, pair, params); };
      const SpinorGrid comm = apply_hamiltonian_phi(t(phi), params) -
                              t(apply_hamiltonian_phi(phi, params));
      EXPECT_LT(relative_difference(comm, Complex(0, params.hbar) * phi), 1e-6);
    }
  }
}

}  // namespace
}  // namespace toa
