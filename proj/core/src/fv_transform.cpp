#include "toa/fv_transform.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "toa/bender_dunne.hpp"
#include "toa/conjugacy.hpp"
#include "toa/errors.hpp"

namespace toa {

namespace {

const Matrix2d kSigma3 = pauli<Complex>(3);

void require_guard(double p, const DiracPair& pair, const PhysParams& params) {
  if (!u_guard_ok(p, pair, params)) {
    std::ostringstream os;
    os.precision(17);
    os << "U(p) denominator too small at p = " << p << " (shift " << u_shift(p, pair, params)
       << ", E_p " << params.energy(p) << ")";
    throw NearSingularU(os.str());
  }
}

void require_nonzero(double p) {
  if (p == 0.0) throw SingularAtZero("operator has a 1/p factor and is undefined at p = 0");
}

}  // namespace

Matrix2d hamiltonian_psi(double p, const DiracPair& pair, const PhysParams& params) {
  const double c = params.c;
  return Complex(c * p) * a_matrix(pair) + Complex(params.rest_energy()) * b_matrix(pair);
}

double u_shift(double p, const DiracPair& pair, const PhysParams& params) {
  const double e = params.energy(p);
  const double a3 = pair.alpha()[2], b3 = pair.beta()[2];
  const double pc = p * params.c, mc2 = params.rest_energy();
  const double s = a3 * pc + b3 * mc2;
  if (s >= 0.0) return e + s;
  // E + s = (E^2 - s^2) / (E - s) with E^2 - s^2 expanded, so that the
  // cancellation for alpha_3 -> +-1 at large |p| happens in exact coefficients.
  const double diff = pc * pc * (1.0 - a3 * a3) + mc2 * mc2 * (1.0 - b3 * b3) - 2.0 * a3 * b3 * pc * mc2;
  return std::max(diff, 0.0) / (e - s);
}

bool u_guard_ok(double p, const DiracPair& pair, const PhysParams& params) {
  return u_shift(p, pair, params) >= kUGuard * params.energy(p);
}

Matrix2d u_matrix(double p, const DiracPair& pair, const PhysParams& params) {
  require_guard(p, pair, params);
  const double e = params.energy(p);
  const double shift = u_shift(p, pair, params);
  const double norm = std::sqrt(2.0 * e * shift);
  Matrix2d u = Complex(1.0 / norm) * (Complex(e) * kSigma3 + hamiltonian_psi(p, pair, params));
  // The diagonal is +-(E + alpha_3 p c + beta_3 m0 c^2); use the stable shift.
  u(0, 0) = shift / norm;
  u(1, 1) = -shift / norm;
  return u;
}

Matrix2d du_inv_dp(double p, const DiracPair& pair, const PhysParams& params) {
  require_guard(p, pair, params);
  const double c = params.c;
  const double m0 = params.m0;
  const double e = params.energy(p);
  const double a3 = pair.alpha()[2];
  const double b3 = pair.beta()[2];
  const double shift = u_shift(p, pair, params);

  const double prefactor = std::pow(shift, -1.5) / (2.0 * e * std::sqrt(2.0 * e));
  const double s3 = p * p * c * c * c * a3 - c * e * e * a3 + p * m0 * std::pow(c, 4) * b3;
  const double sa = 2.0 * (c * e * e + p * c * c * e * a3 + m0 * c * c * c * e * b3);
  const double sh = 2.0 * p * c * c + p * p * c * c * c * a3 / e + c * e * a3 +
                    p * m0 * std::pow(c, 4) * b3 / e;

  return Complex(prefactor) * (Complex(s3) * kSigma3 + Complex(sa) * a_matrix(pair) -
                               Complex(sh) * hamiltonian_psi(p, pair, params));
}

THatCoeffs t_hat_coeffs(double p, const PhysParams& params) {
  require_nonzero(p);
  const double e = params.energy(p);
  const double c2 = params.c * params.c;
  return {Complex(0.0, -params.hbar * e / (p * c2)),
          Complex(0.0, params.hbar * params.m0 * params.m0 * c2 / (2.0 * p * p * e))};
}

Complex t0_scalar(double p, const DiracPair& pair, const PhysParams& params) {
  require_nonzero(p);
  require_guard(p, pair, params);
  const double shift = u_shift(p, pair, params);
  return -(pair.cross_z() / shift) * (params.hbar * params.m0 * params.c / (2.0 * p));
}

SpinorGrid apply_hamiltonian_phi(const SpinorGrid& phi, const PhysParams& params) {
  SpinorGrid out = phi;
  for (std::size_t k = 0; k < phi.size(); ++k) {
    const double e = params.energy(phi.grid[k]);
    out.upper[k] *= e;
    out.lower[k] *= -e;
  }
  return out;
}

SpinorGrid apply_t_hat(const SpinorGrid& phi, const PhysParams& params) {
  if (phi.grid.contains_zero()) throw SingularGrid("T-hat is undefined at p = 0");
  const auto du = derivative(phi.upper, phi.grid.spacing());
  const auto dl = derivative(phi.lower, phi.grid.spacing());
  SpinorGrid out = SpinorGrid::zeros(phi.grid);
  for (std::size_t k = 0; k < phi.size(); ++k) {
    const auto [drift, potential] = t_hat_coeffs(phi.grid[k], params);
    out.upper[k] = drift * du[k] + potential * phi.upper[k];
    out.lower[k] = -(drift * dl[k] + potential * phi.lower[k]);
  }
  return out;
}

SpinorGrid apply_t0(const SpinorGrid& phi, const DiracPair& pair, const PhysParams& params) {
  if (phi.grid.contains_zero()) throw SingularGrid("T-hat_0 is undefined at p = 0");
  SpinorGrid out = SpinorGrid::zeros(phi.grid);
  for (std::size_t k = 0; k < phi.size(); ++k) {
    const Complex s = t0_scalar(phi.grid[k], pair, params);
    out.upper[k] = s * phi.upper[k];
    out.lower[k] = s * phi.lower[k];
  }
  return out;
}

SpinorGrid apply_t_hat_bender_dunne(const SpinorGrid& phi, const PhysParams& params) {
  const SymMatrix2 identity = SymMatrix2::identity();
  const SpinorGrid t11 = apply_in_momentum_rep(OperatorPoly::term(1, 1, identity), phi, params);
  const SpinorGrid tm11 = apply_in_momentum_rep(OperatorPoly::term(-1, 1, identity), phi, params);
  const double c2 = params.c * params.c;
  const double m0 = params.m0;
  SpinorGrid out = SpinorGrid::zeros(phi.grid);
  for (std::size_t k = 0; k < phi.size(); ++k) {
    const double e = params.energy(phi.grid[k]);
    const double w11 = -1.0 / (2.0 * e);
    const double wm11 = -(m0 * m0 * c2 / (2.0 * e) + e / (2.0 * c2));
    out.upper[k] = w11 * t11.upper[k] + wm11 * tm11.upper[k];
    out.lower[k] = -(w11 * t11.lower[k] + wm11 * tm11.lower[k]);
  }
  return out;
}

SpinorGrid conjugate_toa_numeric(const DiracPair& pair, const PhysParams& params,
                                 const SpinorGrid& phi) {
  if (phi.grid.contains_zero()) throw SingularGrid("conjugation needs a grid without p = 0");
  SpinorGrid psi = SpinorGrid::zeros(phi.grid);
  std::vector<Matrix2d> u(phi.size());
  for (std::size_t k = 0; k < phi.size(); ++k) {
    u[k] = u_matrix(phi.grid[k], pair, params);
    psi.upper[k] = u[k](0, 0) * phi.upper[k] + u[k](0, 1) * phi.lower[k];
    psi.lower[k] = u[k](1, 0) * phi.upper[k] + u[k](1, 1) * phi.lower[k];
  }
  const SpinorGrid t_psi = apply_in_momentum_rep(toa_operator_psi(pair), psi, params);
  SpinorGrid out = SpinorGrid::zeros(phi.grid);
  for (std::size_t k = 0; k < phi.size(); ++k) {
    out.upper[k] = u[k](0, 0) * t_psi.upper[k] + u[k](0, 1) * t_psi.lower[k];
    out.lower[k] = u[k](1, 0) * t_psi.upper[k] + u[k](1, 1) * t_psi.lower[k];
  }
  return out;
}

std::size_t count_near_singular(const MomentumGrid& grid, const DiracPair& pair,
                                const PhysParams& params) {
  std::size_t count = 0;
  for (double p : grid.samples()) {
    if (!u_guard_ok(p, pair, params)) ++count;
  }
  return count;
}

}  // namespace toa
