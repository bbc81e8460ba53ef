#pragma once

#include <compare>
#include <map>
#include <string>

#include "toa/clifford2.hpp"
#include "toa/grid.hpp"
#include "toa/phys_params.hpp"
#include "toa/symbolic.hpp"

namespace toa {

/// Index (m, n) of the Bender-Dunne operator T_{m,n}: Weyl-symmetrized
/// product of p^m with q^n, n >= 0, m any integer.
struct BDIndex {
  int m = 0;
  int n = 0;
  friend auto operator<=>(const BDIndex&, const BDIndex&) = default;
};

/// Finite sum  sum C_{m,n} T_{m,n}  with symbolic 2x2 matrix coefficients.
/// Always canonical: no index maps to the zero matrix.
class OperatorPoly {
 public:
  using TermMap = std::map<BDIndex, SymMatrix2>;

  OperatorPoly() = default;

  static OperatorPoly term(BDIndex index, const SymMatrix2& coeff);
  static OperatorPoly term(int m, int n, const SymMatrix2& coeff) { return term({m, n}, coeff); }

  /// Accumulates coeff into the (m, n) slot, dropping it if the sum vanishes.
  void add(BDIndex index, const SymMatrix2& coeff);

  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  /// Coefficient of T_{m,n} (zero matrix when absent).
  SymMatrix2 coeff(BDIndex index) const;

  OperatorPoly& operator+=(const OperatorPoly& o);
  OperatorPoly& operator-=(const OperatorPoly& o);
  friend OperatorPoly operator+(OperatorPoly a, const OperatorPoly& b) { return a += b; }
  friend OperatorPoly operator-(OperatorPoly a, const OperatorPoly& b) { return a -= b; }
  friend bool operator==(const OperatorPoly&, const OperatorPoly&) = default;

  /// M * X: left-multiplies every coefficient.
  friend OperatorPoly operator*(const SymMatrix2& m, const OperatorPoly& x);
  /// X * M: right-multiplies every coefficient.
  friend OperatorPoly operator*(const OperatorPoly& x, const SymMatrix2& m);

 private:
  TermMap terms_;
};

/// Rebuilds the map dropping zero coefficients. OperatorPoly already keeps
/// this invariant; exposed so callers and tests can assert idempotence.
OperatorPoly canonical(const OperatorPoly& x);

/// p X using  p T_{m,n} = T_{m+1,n} - (i hbar n / 2) T_{m,n-1}.
OperatorPoly bd_left_mul_p(const OperatorPoly& x);
/// X p using  T_{m,n} p = T_{m+1,n} + (i hbar n / 2) T_{m,n-1}.
OperatorPoly bd_right_mul_p(const OperatorPoly& x);

/// H X - X H for H = c A p + m0 c^2 B, assembled index-shifted:
///   sum ( c[A, C_{m-1,n}] - (i hbar c (n+1)/2){A, C_{m,n+1}} + m0 c^2 [B, C_{m,n}] ) T_{m,n}.
OperatorPoly commutator_with_hamiltonian(const OperatorPoly& x, const ExactDiracPair& pair);

/// c A p + m0 c^2 B as an operator polynomial.
OperatorPoly hamiltonian_psi(const ExactDiracPair& pair);

/// Structured-text form for golden files:
///
///   operator-poly v1
///   terms <count>
///   T m=<m> n=<n>
///     00 <entry>
///     01 <entry>
///     10 <entry>
///     11 <entry>
///
/// Entries are exact SymPoly renderings; terms ordered by (m, n).
std::string serialize(const OperatorPoly& x);

/// Action in the momentum representation (p multiplies, q = i hbar d/dp):
///   T_{m,0} psi = p^m psi,   T_{m,1} psi = i hbar ( p^m psi' + (m/2) p^(m-1) psi ).
/// Supports m >= -1, n <= 1 (UnsupportedTerm otherwise). SingularGrid when any
/// sample is p = 0 and a negative power of p is required.
SpinorGrid apply_in_momentum_rep(const OperatorPoly& x, const SpinorGrid& psi,
                                 const PhysParams& params);

}  // namespace toa
