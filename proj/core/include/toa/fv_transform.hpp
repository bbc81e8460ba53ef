#pragma once

#include <complex>
#include <vector>

#include "toa/clifford2.hpp"
#include "toa/grid.hpp"
#include "toa/phys_params.hpp"

namespace toa {

/// U(p) is evaluated only where E_p + alpha_3 p c + beta_3 m0 c^2 >= kUGuard * E_p.
inline constexpr double kUGuard = 1e-6;

/// H_Psi(p) = c A p + m0 c^2 B.
Matrix2d hamiltonian_psi(double p, const DiracPair& pair, const PhysParams& params);

/// E_p + alpha_3 p c + beta_3 m0 c^2; never negative for a valid pair.
double u_shift(double p, const DiracPair& pair, const PhysParams& params);

/// True when u_matrix(p) passes the conditioning guard.
bool u_guard_ok(double p, const DiracPair& pair, const PhysParams& params);

/// (E_p sigma_3 + H_Psi(p)) / sqrt(2 E_p (E_p + alpha_3 p c + beta_3 m0 c^2)).
/// Hermitian involution; U H_Psi U = sigma_3 E_p. Throws NearSingularU below the guard.
Matrix2d u_matrix(double p, const DiracPair& pair, const PhysParams& params);

/// Closed-form d(U^-1)/dp (U^-1 = U), expanded over sigma_3, A and H_Psi.
Matrix2d du_inv_dp(double p, const DiracPair& pair, const PhysParams& params);

struct THatCoeffs {
  /// Multiplies sigma_3 d/dp: -i hbar E_p / (p c^2).
  Complex drift;
  /// Multiplies sigma_3: i hbar m0^2 c^2 / (2 p^2 E_p).
  Complex potential;
};

/// Throws SingularAtZero for p = 0.
THatCoeffs t_hat_coeffs(double p, const PhysParams& params);

/// -(alpha_1 beta_2 - alpha_2 beta_1) / (E_p + p c alpha_3 + m0 c^2 beta_3) * hbar m0 c / (2p),
/// a scalar multiplying the identity. Throws SingularAtZero or NearSingularU.
Complex t0_scalar(double p, const DiracPair& pair, const PhysParams& params);

/// sigma_3 E_p Phi.
SpinorGrid apply_hamiltonian_phi(const SpinorGrid& phi, const PhysParams& params);

/// (T-hat Phi)(p) = sigma_3 (drift(p) Phi'(p) + potential(p) Phi(p)).
SpinorGrid apply_t_hat(const SpinorGrid& phi, const PhysParams& params);

/// (T-hat_0 Phi)(p) = t0_scalar(p) Phi(p).
SpinorGrid apply_t0(const SpinorGrid& phi, const DiracPair& pair, const PhysParams& params);

/// The same T-hat written in Bender-Dunne form:
///   -(1/2E_p) sigma_3 T_{1,1} - (m0^2 c^2 / 2E_p + E_p / 2c^2) sigma_3 T_{-1,1}.
SpinorGrid apply_t_hat_bender_dunne(const SpinorGrid& phi, const PhysParams& params);

/// U T_Psi U^-1 Phi computed numerically: U^-1 Phi pointwise, the
/// momentum-representation action of T_Psi (which differentiates U^-1 Phi
/// as a whole), then U pointwise. Throws SingularGrid / NearSingularU.
SpinorGrid conjugate_toa_numeric(const DiracPair& pair, const PhysParams& params,
                                 const SpinorGrid& phi);

/// Number of grid samples failing the U guard.
std::size_t count_near_singular(const MomentumGrid& grid, const DiracPair& pair,
                                const PhysParams& params);

}  // namespace toa
