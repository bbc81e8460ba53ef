#pragma once

#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "toa/clifford2.hpp"
#include "toa/grid.hpp"
#include "toa/phys_params.hpp"

namespace toa {

/// Free evolution under H_Phi = sigma_3 E_p: upper *= exp(-i E t / hbar),
/// lower *= exp(+i E t / hbar).
SpinorGrid evolve(const SpinorGrid& phi, double t, const PhysParams& params);

/// Two-component field sampled in configuration space.
struct PositionField {
  std::vector<double> x;
  std::vector<Complex> upper;
  std::vector<Complex> lower;

  /// Trapezoid-free uniform sum of |Phi(x)|^2 dx (x must be uniform).
  double norm_squared() const;
};

/// Fraction of the momentum-space norm carried by the outermost
/// max(4, N/50) samples at each edge.
double edge_mass_fraction(const SpinorGrid& phi);

inline constexpr double kTailMassLimit = 1e-8;

/// Phi(x) = (2 pi hbar)^(-1/2) sum_k exp(i p_k x / hbar) Phi(p_k) dp.
/// Throws TailMass when edge_mass_fraction exceeds kTailMassLimit.
PositionField to_position(const SpinorGrid& phi, std::span<const double> x,
                          const PhysParams& params);

/// (Pi Phi)(p) = Phi(-p) by exact sample permutation; needs a symmetric grid.
SpinorGrid parity_apply(const SpinorGrid& phi);

enum class ToaPiece { THat, T0 };

/// (Pi op - op Pi) Phi.
SpinorGrid parity_commutator(ToaPiece piece, const SpinorGrid& phi, const DiracPair& pair,
                             const PhysParams& params);

/// Closed form of [Pi, T-hat_0] Phi:
///   2 (E + m0 c^2 b3)(a1 b2 - a2 b1) / ((E + m0 c^2 b3)^2 - (p c a3)^2) * hbar m0 c / (2p) * Phi(-p).
SpinorGrid parity_commutator_t0_closed_form(const SpinorGrid& phi, const DiracPair& pair,
                                            const PhysParams& params);

/// Even (non-nodal) or odd (nodal) combination of the half-line solutions.
enum class Branch { NonNodal, Nodal };

std::string to_string(Branch branch);
Branch parse_branch(const std::string& text);

struct EigenfunctionOptions {
  /// Width of the Gaussian momentum window exp(-p^2 / (2 sigma^2)); 0 disables it.
  double window_sigma = 0.0;
  /// Relative tolerance of each adaptive Gauss-Kronrod segment.
  double quadrature_tolerance = 1e-13;
};

/// Eigenfunction of T-hat with eigenvalue tau in the lambda = +/-1 sector.
/// On p > 0 the first-order equation lambda (drift phi' + potential phi) = tau phi
/// is solved through its integrating factor, with the exponent accumulated by
/// adaptive quadrature between consecutive grid samples. The p < 0 half is
/// the mirror image (+ for NonNodal, - for Nodal). Normalized on the grid.
/// Throws SingularAtZero if the grid contains p = 0.
SpinorGrid toa_eigenfunction(double tau, int lambda, Branch branch, const MomentumGrid& grid,
                             const PhysParams& params, const EigenfunctionOptions& options = {});

/// ||T-hat Phi - tau Phi|| / ||Phi|| restricted to samples with |p| >= p_exclude
/// that are at least edge_cells away from either grid end.
double eigen_residual(const SpinorGrid& phi, double tau, const PhysParams& params,
                      double p_exclude, std::size_t edge_cells = 8);

/// rho(x, t) on a t-major grid: rho[ti * x.size() + xi].
struct DensityField {
  std::vector<double> x;
  std::vector<double> t;
  std::vector<double> rho;

  double at(std::size_t ti, std::size_t xi) const { return rho[ti * x.size() + xi]; }
  /// Total probability integral of rho dx at time index ti.
  double total(std::size_t ti) const;
};

/// rho(x, t) = |Phi(x, t)|^2 with Phi(t) = evolve(phi0, t). Time samples are
/// independent; `parallel` fans them out over hardware threads.
DensityField density_movie(const SpinorGrid& phi0, std::span<const double> t,
                           std::span<const double> x, const PhysParams& params,
                           bool parallel = false);

/// rho(0, t) evaluated exactly at x = 0 for each t.
std::vector<double> origin_density(const SpinorGrid& phi0, std::span<const double> t,
                                   const PhysParams& params);

/// Distance between the density maxima on x > 0 and x < 0 at each time
/// sample, each maximum refined by a three-point parabola.
std::vector<double> peak_separation(const DensityField& field);

/// ||T-hat Phi - (-m0 T_{-1,1} Phi)|| / ||T-hat Phi|| for an upper-component
/// Gaussian centred at p_center with width p_width, on a symmetric grid of
/// `count` samples spanning p_center + 10 p_width.
/// Throws SupportViolation unless p_center - 3 p_width > 0.
double nonrel_limit_check(double p_center, double p_width, const PhysParams& params,
                          std::size_t count = 4096);

/// Writes "# key: value" header lines, then "x,t,rho" rows in t-major order
/// with every number rendered as %.16e.
void write_density_csv(std::ostream& out, const DensityField& field,
                       const std::map<std::string, std::string>& header);

/// %.16e rendering used by every exported file.
std::string format_fixed17(double value);

}  // namespace toa
