#pragma once

#include <compare>
#include <map>
#include <string>
#include <vector>

#include "toa/bender_dunne.hpp"
#include "toa/clifford2.hpp"
#include "toa/symbolic.hpp"

namespace toa {

/// Unknown gamma_j^{m,n}: Pauli channel j of the coefficient C_{m,n}.
struct GammaKey {
  int j = 0;
  int m = 0;
  int n = 0;
  friend auto operator<=>(const GammaKey&, const GammaKey&) = default;
};

std::string to_string(const GammaKey& key);

/// Sparse table of coefficient values; absent keys are zero.
using GammaTable = std::map<GammaKey, SymScalar>;

/// Index window of the ansatz: m in [m_min, m_max], n in [0, n_max].
struct IndexWindow {
  int m_min = -3;
  int m_max = 3;
  int n_max = 3;

  bool contains(int m, int n) const { return m >= m_min && m <= m_max && n >= 0 && n <= n_max; }
};

/// One scalar equation: the sigma_channel component of the coefficient of
/// T_{m,n} in [H, T] = i hbar. Channel 0 is the identity part, which carries
/// the i hbar on the right at (0, 0); channels 1..3 are the sigma_j parts.
struct Equation {
  int channel = 0;
  BDIndex at;
  std::map<GammaKey, SymPoly> lhs;
  SymPoly rhs;
};

struct ConstraintSystem {
  ExactDiracPair pair;
  IndexWindow window;
  /// Unknowns in elimination order: n descending, then m ascending, then j.
  std::vector<GammaKey> unknowns;
  std::vector<Equation> equations;
};

/// All equations touching an in-window unknown, i.e. T_{m,n} slots with
/// m in [m_min, m_max + 1] and n in [0, n_max]. Unknowns outside the window
/// are zero, so the system describes exactly the window-supported solutions.
/// Throws WindowTooSmall unless the window covers m in [-2, 2], n in [0, 2].
ConstraintSystem build_constraints(const ExactDiracPair& pair, const IndexWindow& window = {});

struct MinimalSolution {
  GammaTable table;
  std::size_t equation_count = 0;
  std::size_t unknown_count = 0;
  std::size_t rank = 0;
  /// Every free column of the elimination (set to zero in the table).
  std::vector<GammaKey> free_variables;
  /// Free columns with n != 0; the minimal-solution claim expects none.
  std::vector<GammaKey> unexpected_free;
};

/// Exact elimination over Q(i) after removing the dimensional scale of each
/// unknown; every free variable is set to zero. Throws Inconsistent when a
/// row reduces to 0 = nonzero.
MinimalSolution solve_minimal(const ConstraintSystem& system);

/// The dimensional scale hbar^(1-n) c^(n-m-2) m0^(n-m-1) of gamma_j^{m,n}.
Monomial gamma_scale(int m, int n);

/// sum_{j,m,n} gamma_j^{m,n} sigma_j T_{m,n}.
OperatorPoly operator_from_gamma(const GammaTable& table);

/// -m0 B T_{-1,1} - (1/c) A T_{0,1}.
OperatorPoly toa_operator_psi(const ExactDiracPair& pair);
/// Same assembly for a double-valued pair; each double is converted exactly.
OperatorPoly toa_operator_psi(const DiracPair& pair);

/// [H, X] - i hbar sigma_0 T_{0,0}; empty exactly when X is conjugate to H.
OperatorPoly verify_conjugacy(const OperatorPoly& x, const ExactDiracPair& pair);

/// Equation count, rank, free variables and the solved table as text.
std::string format_solver_report(const ConstraintSystem& system, const MinimalSolution& solution);

}  // namespace toa
