#include "toa/conjugacy.hpp"

#include <algorithm>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "toa/errors.hpp"

namespace toa {

std::string to_string(const GammaKey& key) {
  return "gamma_" + std::to_string(key.j) + "^{" + std::to_string(key.m) + "," +
         std::to_string(key.n) + "}";
}

Monomial gamma_scale(int m, int n) { return Monomial{1 - n, n - m - 2, n - m - 1}; }

ConstraintSystem build_constraints(const ExactDiracPair& pair, const IndexWindow& window) {
  if (window.m_min > -2 || window.m_max < 2 || window.n_max < 2) {
    throw WindowTooSmall("window m in [" + std::to_string(window.m_min) + ", " +
                         std::to_string(window.m_max) + "], n in [0, " +
                         std::to_string(window.n_max) +
                         "] does not cover m in [-2, 2], n in [0, 2]");
  }

  ConstraintSystem system{pair, window, {}, {}};
  for (int n = window.n_max; n >= 0; --n) {
    for (int m = window.m_min; m <= window.m_max; ++m) {
      for (int j = 0; j < 4; ++j) system.unknowns.push_back({j, m, n});
    }
  }

  // Rows keyed by (n, m, channel) so their order is fixed.
  std::map<std::tuple<int, int, int>, Equation> rows;
  auto row = [&](int channel, BDIndex at) -> Equation& {
    auto [it, inserted] = rows.try_emplace({at.n, at.m, channel});
    if (inserted) {
      it->second.channel = channel;
      it->second.at = at;
    }
    return it->second;
  };

  for (const auto& key : system.unknowns) {
    const auto basis = OperatorPoly::term(key.m, key.n, to_symbolic(pauli<QComplex>(key.j)));
    const OperatorPoly bracket = commutator_with_hamiltonian(basis, pair);
    for (const auto& [at, coeff] : bracket.terms()) {
      if (at.m < window.m_min || at.m > window.m_max + 1 || at.n > window.n_max) {
        throw std::logic_error("bracket escaped the equation range");
      }
      const auto parts = pauli_decompose(coeff);
      for (int k = 0; k < 4; ++k) {
        const SymPoly& value = parts[static_cast<std::size_t>(k)];
        if (value.is_zero()) continue;
        auto& lhs = row(k, at).lhs;
        lhs[key] += value;
        if (lhs[key].is_zero()) lhs.erase(key);
      }
    }
  }
  row(0, {0, 0}).rhs = SymPoly(QComplex::i()) * SymPoly::hbar();

  for (auto& [_, eq] : rows) {
    if (!eq.lhs.empty() || !eq.rhs.is_zero()) system.equations.push_back(std::move(eq));
  }
  return system;
}

namespace {

using SparseRow = std::map<std::size_t, QComplex>;

struct ScaledRow {
  SparseRow entries;
  QComplex rhs;
};

// Every term of a row carries the same dimensional monomial once each unknown
// is written as (dimensionless rational) * gamma_scale. Dividing it out
// leaves a linear equation over Q(i).
ScaledRow scale_equation(const Equation& eq, const std::map<GammaKey, std::size_t>& column) {
  std::optional<Monomial> common;
  auto check = [&](const Monomial& mono) {
    if (!common) {
      common = mono;
    } else if (*common != mono) {
      throw std::logic_error("dimensionally inhomogeneous constraint at T_{" +
                             std::to_string(eq.at.m) + "," + std::to_string(eq.at.n) + "}");
    }
  };
  ScaledRow out;
  for (const auto& [key, coeff] : eq.lhs) {
    const SymScalar s = coeff.as_monomial();
    check(s.exps * gamma_scale(key.m, key.n));
    out.entries.emplace(column.at(key), s.coeff);
  }
  if (!eq.rhs.is_zero()) {
    const SymScalar s = eq.rhs.as_monomial();
    check(s.exps);
    out.rhs = s.coeff;
  }
  return out;
}

void axpy(SparseRow& target, QComplex& target_rhs, const QComplex& factor, const ScaledRow& src) {
  for (const auto& [col, v] : src.entries) {
    auto [it, inserted] = target.try_emplace(col, QComplex());
    it->second -= factor * v;
    if (it->second.is_zero()) target.erase(it);
  }
  target_rhs -= factor * src.rhs;
}

}  // namespace

MinimalSolution solve_minimal(const ConstraintSystem& system) {
  std::map<GammaKey, std::size_t> column;
  for (std::size_t k = 0; k < system.unknowns.size(); ++k) column[system.unknowns[k]] = k;

  std::vector<ScaledRow> rows;
  rows.reserve(system.equations.size());
  for (const auto& eq : system.equations) rows.push_back(scale_equation(eq, column));

  // Reduced row echelon form; columns visited in unknown order, first
  // available row with a nonzero entry becomes the pivot.
  std::vector<std::optional<std::size_t>> pivot_row_of(system.unknowns.size());
  std::size_t next = 0;
  for (std::size_t col = 0; col < system.unknowns.size() && next < rows.size(); ++col) {
    std::size_t r = next;
    while (r < rows.size() && !rows[r].entries.contains(col)) ++r;
    if (r == rows.size()) continue;
    std::swap(rows[next], rows[r]);

    ScaledRow& pivot = rows[next];
    const QComplex inv = QComplex(1) / pivot.entries.at(col);
    for (auto& [_, v] : pivot.entries) v *= inv;
    pivot.rhs *= inv;

    for (std::size_t other = 0; other < rows.size(); ++other) {
      if (other == next) continue;
      auto it = rows[other].entries.find(col);
      if (it == rows[other].entries.end()) continue;
      const QComplex factor = it->second;
      axpy(rows[other].entries, rows[other].rhs, factor, pivot);
    }
    pivot_row_of[col] = next;
    ++next;
  }

  for (std::size_t r = next; r < rows.size(); ++r) {
    if (rows[r].entries.empty() && !rows[r].rhs.is_zero()) {
      throw Inconsistent("elimination reached 0 = " + rows[r].rhs.to_string());
    }
  }

  MinimalSolution out;
  out.equation_count = system.equations.size();
  out.unknown_count = system.unknowns.size();
  out.rank = next;
  for (std::size_t col = 0; col < system.unknowns.size(); ++col) {
    const GammaKey& key = system.unknowns[col];
    if (!pivot_row_of[col]) {
      out.free_variables.push_back(key);
      if (key.n != 0) out.unexpected_free.push_back(key);
      continue;
    }
    // Free columns are zero, so the pivot takes the reduced right-hand side.
    const QComplex& value = rows[*pivot_row_of[col]].rhs;
    if (!value.is_zero()) out.table.emplace(key, SymScalar{value, gamma_scale(key.m, key.n)});
  }
  return out;
}

OperatorPoly operator_from_gamma(const GammaTable& table) {
  OperatorPoly out;
  for (const auto& [key, value] : table) {
    out.add({key.m, key.n}, SymPoly(value) * to_symbolic(pauli<QComplex>(key.j)));
  }
  return out;
}

OperatorPoly toa_operator_psi(const ExactDiracPair& pair) {
  OperatorPoly out = OperatorPoly::term(-1, 1, -SymPoly::m0() * to_symbolic(b_matrix(pair)));
  out.add({0, 1}, -SymPoly::c(-1) * to_symbolic(a_matrix(pair)));
  return out;
}

OperatorPoly toa_operator_psi(const DiracPair& pair) {
  auto exact_combo = [](const std::array<double, 3>& v) {
    SymMatrix2 out;
    for (int j = 1; j <= 3; ++j) {
      out += SymPoly(QComplex(Rational(v[static_cast<std::size_t>(j - 1)]))) *
             to_symbolic(pauli<QComplex>(j));
    }
    return out;
  };
  OperatorPoly out = OperatorPoly::term(-1, 1, -SymPoly::m0() * exact_combo(pair.beta()));
  out.add({0, 1}, -SymPoly::c(-1) * exact_combo(pair.alpha()));
  return out;
}

OperatorPoly verify_conjugacy(const OperatorPoly& x, const ExactDiracPair& pair) {
  return commutator_with_hamiltonian(x, pair) -
         OperatorPoly::term(0, 0, SymPoly(QComplex::i()) * SymPoly::hbar() *
                                      to_symbolic(ExactMatrix2::identity()));
}

std::string format_solver_report(const ConstraintSystem& system, const MinimalSolution& solution) {
  std::ostringstream os;
  os << "conjugacy-solver report\n";
  os << "pair " << describe(system.pair) << "\n";
  os << "window m=[" << system.window.m_min << "," << system.window.m_max << "] n=[0,"
     << system.window.n_max << "]\n";
  os << "equations " << solution.equation_count << "\n";
  os << "unknowns " << solution.unknown_count << "\n";
  os << "rank " << solution.rank << "\n";
  os << "free " << solution.free_variables.size() << "\n";
  for (const auto& key : solution.free_variables) os << "  " << to_string(key) << "\n";
  os << "unexpected_free " << solution.unexpected_free.size() << "\n";
  for (const auto& key : solution.unexpected_free) os << "  " << to_string(key) << "\n";
  os << "solution " << solution.table.size() << "\n";
  for (const auto& [key, value] : solution.table) {
    os << "  " << to_string(key) << " = " << SymPoly(value).to_string() << "\n";
  }
  return os.str();
}

}  // namespace toa
