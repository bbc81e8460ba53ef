#include "toa/bender_dunne.hpp"

#include <cmath>
#include <sstream>

#include "toa/errors.hpp"

namespace toa {

namespace {

// -(i hbar n / 2) for the left rule; the right rule flips the sign.
SymPoly half_i_hbar(int n) {
  return SymPoly(QComplex(Rational(0), Rational(n, 2))) * SymPoly::hbar();
}

SymMatrix2 a_sym(const ExactDiracPair& pair) { return to_symbolic(a_matrix(pair)); }
SymMatrix2 b_sym(const ExactDiracPair& pair) { return to_symbolic(b_matrix(pair)); }

}  // namespace

OperatorPoly OperatorPoly::term(BDIndex index, const SymMatrix2& coeff) {
  OperatorPoly out;
  out.add(index, coeff);
  return out;
}

void OperatorPoly::add(BDIndex index, const SymMatrix2& coeff) {
  if (index.n < 0) throw std::invalid_argument("Bender-Dunne index n must be >= 0");
  if (coeff.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(index, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

SymMatrix2 OperatorPoly::coeff(BDIndex index) const {
  auto it = terms_.find(index);
  return it == terms_.end() ? SymMatrix2::zero() : it->second;
}

OperatorPoly& OperatorPoly::operator+=(const OperatorPoly& o) {
  for (const auto& [idx, c] : o.terms_) add(idx, c);
  return *this;
}

OperatorPoly& OperatorPoly::operator-=(const OperatorPoly& o) {
  for (const auto& [idx, c] : o.terms_) add(idx, -c);
  return *this;
}

OperatorPoly operator*(const SymMatrix2& m, const OperatorPoly& x) {
  OperatorPoly out;
  for (const auto& [idx, c] : x.terms_) out.add(idx, m * c);
  return out;
}

OperatorPoly operator*(const OperatorPoly& x, const SymMatrix2& m) {
  OperatorPoly out;
  for (const auto& [idx, c] : x.terms_) out.add(idx, c * m);
  return out;
}

OperatorPoly canonical(const OperatorPoly& x) {
  OperatorPoly out;
  for (const auto& [idx, c] : x.terms()) out.add(idx, c);
  return out;
}

OperatorPoly bd_left_mul_p(const OperatorPoly& x) {
  OperatorPoly out;
  for (const auto& [idx, c] : x.terms()) {
    out.add({idx.m + 1, idx.n}, c);
    if (idx.n > 0) out.add({idx.m, idx.n - 1}, -half_i_hbar(idx.n) * c);
  }
  return out;
}

OperatorPoly bd_right_mul_p(const OperatorPoly& x) {
  OperatorPoly out;
  for (const auto& [idx, c] : x.terms()) {
    out.add({idx.m + 1, idx.n}, c);
    if (idx.n > 0) out.add({idx.m, idx.n - 1}, half_i_hbar(idx.n) * c);
  }
  return out;
}

OperatorPoly commutator_with_hamiltonian(const OperatorPoly& x, const ExactDiracPair& pair) {
  const SymMatrix2 a = a_sym(pair);
  const SymMatrix2 b = b_sym(pair);
  const SymPoly c = SymPoly::c();
  const SymPoly m0c2 = SymPoly::m0() * SymPoly::c(2);

  // Each C T_{m,n} feeds the shifted slots (m+1, n), (m, n-1) and (m, n).
  OperatorPoly out;
  for (const auto& [idx, coeff] : x.terms()) {
    out.add({idx.m + 1, idx.n}, c * commutator(a, coeff));
    if (idx.n > 0) {
      out.add({idx.m, idx.n - 1}, -(half_i_hbar(idx.n) * c) * anticommutator(a, coeff));
    }
    out.add({idx.m, idx.n}, m0c2 * commutator(b, coeff));
  }
  return out;
}

OperatorPoly hamiltonian_psi(const ExactDiracPair& pair) {
  OperatorPoly h = OperatorPoly::term(1, 0, SymPoly::c() * a_sym(pair));
  h.add({0, 0}, SymPoly::m0() * SymPoly::c(2) * b_sym(pair));
  return h;
}

std::string serialize(const OperatorPoly& x) {
  std::ostringstream os;
  os << "operator-poly v1\n";
  os << "terms " << x.terms().size() << "\n";
  for (const auto& [idx, c] : x.terms()) {
    os << "T m=" << idx.m << " n=" << idx.n << "\n";
    for (int r = 0; r < 2; ++r) {
      for (int col = 0; col < 2; ++col) {
        os << "  " << r << col << " " << c(r, col).to_string() << "\n";
      }
    }
  }
  return os.str();
}

SpinorGrid apply_in_momentum_rep(const OperatorPoly& x, const SpinorGrid& psi,
                                 const PhysParams& params) {
  bool needs_inverse_p = false;
  for (const auto& [idx, c] : x.terms()) {
    if (idx.n > 1 || idx.m < -1) {
      throw UnsupportedTerm("T_{" + std::to_string(idx.m) + "," + std::to_string(idx.n) +
                            "} has no momentum-representation evaluator (need m >= -1, n <= 1)");
    }
    if (idx.m < 0) needs_inverse_p = true;
  }
  if (needs_inverse_p && psi.grid.contains_zero()) {
    throw SingularGrid("grid contains p = 0 but the operator carries negative powers of p");
  }

  const auto p = psi.grid.samples();
  const std::size_t n = psi.size();
  const auto d_upper = derivative(psi.upper, psi.grid.spacing());
  const auto d_lower = derivative(psi.lower, psi.grid.spacing());
  const Complex i_hbar(0.0, params.hbar);

  SpinorGrid out = SpinorGrid::zeros(psi.grid);
  std::vector<Complex> act_upper(n), act_lower(n);
  for (const auto& [idx, coeff] : x.terms()) {
    const Matrix2d cm = evaluate(coeff, params);
    for (std::size_t k = 0; k < n; ++k) {
      const double pm = std::pow(p[k], idx.m);
      if (idx.n == 0) {
        act_upper[k] = pm * psi.upper[k];
        act_lower[k] = pm * psi.lower[k];
      } else {
        // m = 0 contributes no p^(m-1) term, so p = 0 is harmless there.
        const double lower_power = idx.m == 0 ? 0.0 : 0.5 * idx.m * std::pow(p[k], idx.m - 1);
        act_upper[k] = i_hbar * (pm * d_upper[k] + lower_power * psi.upper[k]);
        act_lower[k] = i_hbar * (pm * d_lower[k] + lower_power * psi.lower[k]);
      }
    }
    for (std::size_t k = 0; k < n; ++k) {
      out.upper[k] += cm(0, 0) * act_upper[k] + cm(0, 1) * act_lower[k];
      out.lower[k] += cm(1, 0) * act_upper[k] + cm(1, 1) * act_lower[k];
    }
  }
  return out;
}

}  // namespace toa
