#include <gtest/gtest.h>

#include "printers.hpp"

#include "toa/bender_dunne.hpp"
#include "toa/conjugacy.hpp"
#include "toa/errors.hpp"

namespace toa {
namespace {

using V = std::array<Rational, 3>;

SymPoly num(const Rational& q) { return SymPoly(QComplex(q)); }
const SymPoly kI = SymPoly(QComplex::i());

struct Table {
  const GammaTable& t;
  SymPoly operator()(int j, int m, int n) const {
    auto it = t.find(GammaKey{j, m, n});
    return it == t.end() ? SymPoly() : SymPoly(it->second);
  }
};

// The four constraint families written out by hand, left side minus right side.
SymPoly family(int channel, int m, int n, const ExactDiracPair& pair, const Table& g) {
  const auto& a = pair.alpha();
  const auto& b = pair.beta();
  const SymPoly h = SymPoly::hbar(), c = SymPoly::c(), mc2 = SymPoly::m0() * SymPoly::c(2);
  const SymPoly anti = -(kI * h * c * SymPoly(n + 1));
  const SymPoly two_i = SymPoly(2) * kI;
  switch (channel) {
    case 0: {
      SymPoly dot;
      for (int j = 1; j <= 3; ++j) dot += g(j, m, n + 1) * num(a[static_cast<std::size_t>(j - 1)]);
      SymPoly out = anti * dot;
      if (m == 0 && n == 0) out -= kI * h;
      return out;
    }
    case 1:
      return c * two_i * (g(3, m - 1, n) * num(a[1]) - g(2, m - 1, n) * num(a[2])) +
             anti * g(0, m, n + 1) * num(a[0]) +
             mc2 * two_i * (g(3, m, n) * num(b[1]) - g(2, m, n) * num(b[2]));
    case 2:
      return c * two_i * (g(1, m - 1, n) * num(a[2]) - g(3, m - 1, n) * num(a[0])) +
             anti * g(0, m, n + 1) * num(a[1]) +
             mc2 * two_i * (g(1, m, n) * num(b[2]) - g(3, m, n) * num(b[0]));
    default:
      return c * two_i * (g(2, m - 1, n) * num(a[0]) - g(1, m - 1, n) * num(a[1])) +
             anti * g(0, m, n + 1) * num(a[2]) +
             mc2 * two_i * (g(2, m, n) * num(b[0]) - g(1, m, n) * num(b[1]));
  }
}

GammaTable expected_table(const ExactDiracPair& pair) {
  GammaTable t;
  for (int j = 1; j <= 3; ++j) {
    const auto k = static_cast<std::size_t>(j - 1);
    if (pair.alpha()[k] != 0) t.emplace(GammaKey{j, 0, 1}, SymScalar{QComplex(Rational(-pair.alpha()[k])), {0, -1, 0}});
    if (pair.beta()[k] != 0) t.emplace(GammaKey{j, -1, 1}, SymScalar{QComplex(Rational(-pair.beta()[k])), {0, 0, 1}});
  }
  return t;
}

TEST(Constraints, FirstFamilyAtOriginForStandardPair) {
  const ConstraintSystem sys = build_constraints(standard_pair(), IndexWindow{});
  const Equation* eq = nullptr;
  for (const auto& e : sys.equations) {
    if (e.channel == 0 && e.at == BDIndex{0, 0}) eq = &e;
  }
  ASSERT_NE(eq, nullptr);
  ASSERT_EQ(eq->lhs.size(), 1u);
  EXPECT_EQ(eq->lhs.begin()->first, (GammaKey{1, 0, 1}));
  // -i hbar c gamma = i hbar, i.e. -c gamma = 1 after dividing by i hbar.
  EXPECT_EQ(eq->lhs.begin()->second, -(kI * SymPoly::hbar() * SymPoly::c()));
  EXPECT_EQ(eq->rhs, kI * SymPoly::hbar());
}

TEST(Constraints, RightHandSideOnlyAtOrigin) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const ConstraintSystem sys = build_constraints(sample_dirac_pair(seed), IndexWindow{});
    for (const auto& e : sys.equations) {
      if (e.channel == 0 && e.at == BDIndex{0, 0}) continue;
      EXPECT_TRUE(e.rhs.is_zero()) << e.channel << " " << e.at.m << "," << e.at.n;
    }
  }
}

TEST(Constraints, RowsMatchHandWrittenFamilies) {
  // Substitute a dense random table into both the generated rows and the
  // hand-written families; they must agree term by term.
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const ExactDiracPair pair = sample_dirac_pair(seed);
    const IndexWindow window{};
    const ConstraintSystem sys = build_constraints(pair, window);
    GammaTable g;
    long counter = 1;
    for (const auto& key : sys.unknowns) {
      g.emplace(key, SymScalar{QComplex(Rational(counter % 7 - 3, 1 + counter % 5),
                                        Rational(counter % 3 - 1)),
                               gamma_scale(key.m, key.n)});
      ++counter;
    }
    std::map<std::tuple<int, int, int>, SymPoly> generated;
    for (const auto& e : sys.equations) {
      SymPoly sum;
      for (const auto& [key, coeff] : e.lhs) sum += coeff * SymPoly(g.at(key));
      generated[{e.channel, e.at.m, e.at.n}] = sum - e.rhs;
    }
    for (int m = window.m_min; m <= window.m_max + 1; ++m) {
      for (int n = 0; n <= window.n_max; ++n) {
        for (int ch = 0; ch < 4; ++ch) {
          auto it = generated.find({ch, m, n});
          const SymPoly got = it == generated.end() ? SymPoly() : it->second;
          ASSERT_EQ(got, family(ch, m, n, pair, Table{g}))
              << "seed " << seed << " channel " << ch << " at " << m << "," << n;
        }
      }
    }
  }
}

TEST(Constraints, WindowTooSmall) {
  EXPECT_THROW(build_constraints(standard_pair(), IndexWindow{-1, 3, 3}), WindowTooSmall);
  EXPECT_THROW(build_constraints(standard_pair(), IndexWindow{-3, 1, 3}), WindowTooSmall);
  EXPECT_THROW(build_constraints(standard_pair(), IndexWindow{-3, 3, 1}), WindowTooSmall);
  EXPECT_NO_THROW(build_constraints(standard_pair(), IndexWindow{-2, 2, 2}));
}

TEST(Solver, StandardPair) {
  const MinimalSolution s = solve_minimal(build_constraints(standard_pair(), IndexWindow{}));
  const GammaTable expected{{GammaKey{1, 0, 1}, SymScalar{-1, {0, -1, 0}}},
                            {GammaKey{3, -1, 1}, SymScalar{-1, {0, 0, 1}}}};
  EXPECT_EQ(s.table, expected);
  EXPECT_TRUE(s.unexpected_free.empty());
  for (const auto& key : s.free_variables) EXPECT_EQ(key.n, 0);
}

TEST(Solver, SigmaTwoSigmaThreePair) {
  const ExactDiracPair pair = make_dirac_pair(V{0, 1, 0}, V{0, 0, 1});
  const MinimalSolution s = solve_minimal(build_constraints(pair, IndexWindow{}));
  const GammaTable expected{{GammaKey{2, 0, 1}, SymScalar{-1, {0, -1, 0}}},
                            {GammaKey{3, -1, 1}, SymScalar{-1, {0, 0, 1}}}};
  EXPECT_EQ(s.table, expected);
}

TEST(Solver, SampledPairsMatchClosedForm) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const ExactDiracPair pair = sample_dirac_pair(seed);
    const MinimalSolution s = solve_minimal(build_constraints(pair, IndexWindow{}));
    ASSERT_EQ(s.table, expected_table(pair)) << "seed " << seed;
    ASSERT_TRUE(s.unexpected_free.empty());
    for (const auto& [key, _] : s.table) EXPECT_NE(key.j, 0);
  }
}

TEST(Solver, WindowEnlargementKeepsSolution) {
  for (std::uint64_t seed : {0u, 5u, 12u}) {
    const ExactDiracPair pair = sample_dirac_pair(seed);
    const auto small = solve_minimal(build_constraints(pair, IndexWindow{-3, 3, 3}));
    const auto large = solve_minimal(build_constraints(pair, IndexWindow{-4, 4, 4}));
    EXPECT_EQ(small.table, large.table);
    EXPECT_TRUE(large.unexpected_free.empty());
  }
}

TEST(Solver, SolutionSatisfiesAllFamilies) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const ExactDiracPair pair = sample_dirac_pair(seed);
    const IndexWindow window{};
    const MinimalSolution s = solve_minimal(build_constraints(pair, window));
    const Table g{s.table};
    const auto& a = pair.alpha();
    const auto& b = pair.beta();
    const SymPoly mc = SymPoly::m0() * SymPoly::c();
    auto A = [&](int j) { return num(a[static_cast<std::size_t>(j - 1)]); };
    auto B = [&](int j) { return num(b[static_cast<std::size_t>(j - 1)]); };
    for (int m = window.m_min; m <= window.m_max + 1; ++m) {
      for (int n = 0; n <= window.n_max; ++n) {
        for (int ch = 0; ch < 4; ++ch) EXPECT_TRUE(family(ch, m, n, pair, g).is_zero());

        // Combinations eliminating the third and first terms of the mixed families.
        const SymPoly cross = g(1, m - 1, n) * (B(2) * A(3) - B(3) * A(2)) +
                              g(2, m - 1, n) * (B(3) * A(1) - B(1) * A(3)) +
                              g(3, m - 1, n) * (B(1) * A(2) - B(2) * A(1));
        const SymPoly dot_ab = A(1) * B(1) + A(2) * B(2) + A(3) * B(3);
        const SymPoly half_h = SymPoly(QComplex(Rational(n + 1, 2))) * SymPoly::hbar();
        EXPECT_TRUE((cross - half_h * g(0, m, n + 1) * dot_ab).is_zero());
        const SymPoly cross_now = g(1, m, n) * (B(2) * A(3) - B(3) * A(2)) +
                                  g(2, m, n) * (B(3) * A(1) - B(1) * A(3)) +
                                  g(3, m, n) * (B(1) * A(2) - B(2) * A(1));
        EXPECT_TRUE((-(mc * cross_now) - half_h * g(0, m, n + 1)).is_zero());

        if (n == 0) continue;
        EXPECT_TRUE(g(0, m, n).is_zero());
        SymPoly dot;
        for (int j = 1; j <= 3; ++j) dot += g(j, m, n) * A(j);
        const SymPoly delta = (m == 0 && n == 1) ? SymPoly(1) : SymPoly();
        EXPECT_TRUE((-(SymPoly::c() * SymPoly(n) * dot) - delta).is_zero());
        EXPECT_EQ(g(3, m - 1, n) * A(2) + mc * g(3, m, n) * B(2),
                  g(2, m - 1, n) * A(3) + mc * g(2, m, n) * B(3));
        EXPECT_EQ(g(1, m - 1, n) * A(3) + mc * g(1, m, n) * B(3),
                  g(3, m - 1, n) * A(1) + mc * g(3, m, n) * B(1));
        EXPECT_EQ(g(2, m - 1, n) * A(1) + mc * g(2, m, n) * B(1),
                  g(1, m - 1, n) * A(2) + mc * g(1, m, n) * B(2));
      }
    }
  }
}

TEST(Solver, InconsistentSystemIsReported) {
  // gamma_1^{0,1} carries c^-1, so c * gamma = 1 and c * gamma = 2 are both
  // dimensionless and contradict each other.
  ConstraintSystem sys{standard_pair(), IndexWindow{}, {GammaKey{1, 0, 1}}, {}};
  sys.equations.push_back({0, {0, 0}, {{GammaKey{1, 0, 1}, SymPoly::c()}}, SymPoly(1)});
  sys.equations.push_back({0, {1, 0}, {{GammaKey{1, 0, 1}, SymPoly::c()}}, SymPoly(2)});
  EXPECT_THROW(solve_minimal(sys), Inconsistent);
}

TEST(Solver, ReportListsCountsAndSolution) {
  const ConstraintSystem sys = build_constraints(standard_pair(), IndexWindow{});
  const MinimalSolution s = solve_minimal(sys);
  const std::string text = format_solver_report(sys, s);
  EXPECT_NE(text.find("unknowns 112"), std::string::npos);
  EXPECT_NE(text.find("unexpected_free 0"), std::string::npos);
  EXPECT_NE(text.find("gamma_1^{0,1} = -1*c^-1"), std::string::npos);
  EXPECT_NE(text.find("gamma_3^{-1,1} = -1*m0"), std::string::npos);
  EXPECT_EQ(s.unknown_count, 112u);
  EXPECT_EQ(s.rank + s.free_variables.size(), s.unknown_count);
}

TEST(ToaOperator, StandardForm) {
  OperatorPoly expected = OperatorPoly::term(-1, 1, -SymPoly::m0() * to_symbolic(pauli<QComplex>(3)));
  expected.add({0, 1}, -SymPoly::c(-1) * to_symbolic(pauli<QComplex>(1)));
  EXPECT_EQ(toa_operator_psi(standard_pair()), expected);
  EXPECT_EQ(toa_operator_psi(to_numeric(standard_pair())), expected);
}

TEST(ToaOperator, BothConstructionRoutesAgree) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const ExactDiracPair pair = sample_dirac_pair(seed);
    const auto s = solve_minimal(build_constraints(pair, IndexWindow{}));
    EXPECT_EQ(operator_from_gamma(s.table), toa_operator_psi(pair));
    EXPECT_TRUE(verify_conjugacy(toa_operator_psi(pair), pair).is_zero());
  }
}

TEST(ToaOperator, ResidualOfZeroIsMinusIHbar) {
  const OperatorPoly r = verify_conjugacy(OperatorPoly{}, rotated_pair());
  EXPECT_EQ(r, OperatorPoly::term(0, 0, -(kI * SymPoly::hbar()) * SymMatrix2::identity()));
}

TEST(ToaOperator, CommutingAdditionsKeepConjugacy) {
  for (const auto& pair : {standard_pair(), sample_dirac_pair(3)}) {
    const OperatorPoly t = toa_operator_psi(pair);
    // H itself, and H^2 = c^2 p^2 + m0^2 c^4.
    EXPECT_TRUE(verify_conjugacy(t + hamiltonian_psi(pair), pair).is_zero());
    OperatorPoly h2 = OperatorPoly::term(2, 0, SymPoly::c(2) * SymMatrix2::identity());
    h2.add({0, 0}, SymPoly::m0(2) * SymPoly::c(4) * SymMatrix2::identity());
    EXPECT_TRUE(verify_conjugacy(t + h2, pair).is_zero());
    // A non-commuting addition breaks it.
    EXPECT_FALSE(verify_conjugacy(t + OperatorPoly::term(0, 1, SymMatrix2::identity()), pair)
                     .is_zero());
  }
}

}  // namespace
}  // namespace toa
