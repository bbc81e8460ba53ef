#include "toa_cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

#include <CLI11.hpp>

#include "toa/bender_dunne.hpp"
#include "toa/conjugacy.hpp"
#include "toa/errors.hpp"
#include "toa/fv_transform.hpp"

namespace toa::cli {

namespace {

double bump(double p, double a, double b) {
  const double u = (2.0 * p - a - b) / (b - a);
  if (std::abs(u) >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - u * u));
}

double component_norm(const std::vector<Complex>& v, double dp) {
  double s = 0.0;
  for (const auto& z : v) s += std::norm(z);
  return std::sqrt(s * dp);
}

std::string label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

void ensure_out_dir(const RunConfig& config) { std::filesystem::create_directories(config.out); }

template <class F>
double seconds_of(F&& body) {
  Stopwatch watch;
  body();
  return watch.seconds();
}

template <class F>
void timed(Report& report, F&& body) {
  report.charge(seconds_of(body));
}

ExactDiracPair require_any(const std::vector<NamedPair>& pairs) { return pairs.front().pair; }

}  // namespace

std::vector<SpinorGrid> bump_spinors(const MomentumGrid& grid, std::size_t count) {
  const double extent = std::max(std::abs(grid.p_min()), std::abs(grid.p_max()));
  std::vector<SpinorGrid> out;
  for (std::size_t k = 0; k < count; ++k) {
    const std::size_t slot = k % 5;
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    const double a = (0.1 + 0.06 * static_cast<double>(slot)) * extent;
    const double b = a + (0.4 + 0.04 * static_cast<double>(slot)) * extent;
    const Complex phase = std::polar(1.0, 0.7 * static_cast<double>(k));
    SpinorGrid phi = SpinorGrid::zeros(grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double p = sign * grid[i];
      phi.upper[i] = bump(p, a, b);
      if (slot >= 2) phi.lower[i] = 0.5 * phase * bump(p, a + 0.05 * extent, b - 0.05 * extent);
    }
    out.push_back(std::move(phi));
  }
  return out;
}

std::vector<SpinorGrid> gaussian_spinors(const MomentumGrid& grid, const PhysParams&) {
  const double extent = std::max(std::abs(grid.p_min()), std::abs(grid.p_max()));
  struct Shape {
    double center_u, width_u, center_l, width_l;
    Complex weight_l;
  };
  const Shape shapes[] = {
      {0.10, 0.05, 0.0, 0.0, 0.0},
      {0.0, 0.0, -0.15, 0.07, 1.0},
      {0.05, 0.04, -0.08, 0.06, Complex(0.3, -0.6)},
  };
  std::vector<SpinorGrid> out;
  for (const auto& s : shapes) {
    SpinorGrid phi = SpinorGrid::zeros(grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double p = grid[i] / extent;
      if (s.width_u > 0) phi.upper[i] = std::exp(-0.5 * std::pow((p - s.center_u) / s.width_u, 2));
      if (s.width_l > 0) {
        phi.lower[i] = s.weight_l * std::exp(-0.5 * std::pow((p - s.center_l) / s.width_l, 2));
      }
    }
    out.push_back(std::move(phi));
  }
  return out;
}

Report cmd_derive(const RunConfig& config) {
  const auto pairs = resolve_pairs(config);
  ensure_out_dir(config);
  Report report("derive");
  std::ofstream file(config.out / "derive-operators.txt", std::ios::binary);

  std::size_t mismatched = 0, nonzero_residual = 0, unexpected = 0, routes_differ = 0;
  std::size_t solved = 0;
  std::string first_error;
  const double t1 = seconds_of([&] {
    for (const auto& [name, pair] : pairs) {
      file << "### " << name << "\n";
      try {
        const ConstraintSystem system = build_constraints(pair, config.solver_window);
        const MinimalSolution solution = solve_minimal(system);
        ++solved;

        GammaTable expected;
        for (int j = 1; j <= 3; ++j) {
          const auto idx = static_cast<std::size_t>(j - 1);
          if (pair.alpha()[idx] != 0) {
            expected.emplace(GammaKey{j, 0, 1}, SymScalar{QComplex(-pair.alpha()[idx]), {0, -1, 0}});
          }
          if (pair.beta()[idx] != 0) {
            expected.emplace(GammaKey{j, -1, 1}, SymScalar{QComplex(-pair.beta()[idx]), {0, 0, 1}});
          }
        }
        if (solution.table != expected) ++mismatched;
        unexpected += solution.unexpected_free.size();

        const OperatorPoly t_psi = operator_from_gamma(solution.table);
        if (!(t_psi == toa_operator_psi(pair))) ++routes_differ;
        const OperatorPoly residual = verify_conjugacy(t_psi, pair);
        if (!residual.is_zero()) ++nonzero_residual;

        file << format_solver_report(system, solution);
        file << "residual " << (residual.is_zero() ? "zero" : "NONZERO") << "\n";
        file << serialize(t_psi) << "\n";
      } catch (const Inconsistent& e) {
        if (first_error.empty()) first_error = e.what();
        file << e.what() << "\n\n";
      }
    }
  });
  const double failures = static_cast<double>(pairs.size() - solved);
  report.within("solver_consistent_failures", failures, 0, 0, first_error);
  report.charge(t1);
  report.within("minimal_solution_mismatches", static_cast<double>(mismatched), 0, 0,
                std::to_string(pairs.size()) + " pairs");
  report.within("conjugacy_residual_nonzero", static_cast<double>(nonzero_residual), 0, 0);
  report.within("gamma_vs_direct_route_differ", static_cast<double>(routes_differ), 0, 0);
  report.within("unexpected_free_variables", static_cast<double>(unexpected), 0, 0);
  return report;
}

Report cmd_verify(const RunConfig& config) {
  const auto pairs = resolve_pairs(config);
  ensure_out_dir(config);
  const PhysParams& params = config.params;
  Report report("verify");
  const Matrix2d identity = Matrix2d::identity();
  const Matrix2d sigma3 = pauli<Complex>(3);
  const auto grid = MomentumGrid::symmetric(config.momentum.extent, config.momentum.count);

  double involution = 0.0, diagonal = 0.0;
  std::size_t near_singular = 0;
  const double t2 = seconds_of([&] {
    for (const auto& named : pairs) {
      const DiracPair pair = to_numeric(named.pair);
      near_singular += count_near_singular(grid, pair, params);
      for (double p : grid.samples()) {
        if (!u_guard_ok(p, pair, params)) continue;
        const Matrix2d u = u_matrix(p, pair, params);
        involution = std::max({involution, max_abs(u * u - identity), max_abs(u - u.adjoint())});
        const double e = params.energy(p);
        const Matrix2d d = u * hamiltonian_psi(p, pair, params) * u;
        diagonal = std::max(diagonal, max_abs(d - Complex(e) * sigma3) / e);
      }
    }
  });
  report.info("near_singular_points", static_cast<double>(near_singular),
              "excluded from the guarded checks");
  report.charge(t2);
  report.below("u_involution", involution, config.tolerance("u_involution"));
  report.below("diagonalization", diagonal, config.tolerance("diagonalization"),
               "max |U H U - sigma3 E| / E");

  double fd_error = 0.0;
  const double t3 = seconds_of([&] {
    const double mc = params.m0 * params.c;
    const double h = 3e-4 * mc;
    for (const auto& named : pairs) {
      const DiracPair pair = to_numeric(named.pair);
      for (double q : {-3.0, -1.3, -0.4, 0.0, 0.4, 1.3, 3.0}) {
        const double p = q * mc;
        bool guarded = true;
        for (int k = -2; k <= 2; ++k) guarded = guarded && u_guard_ok(p + k * h, pair, params);
        if (!guarded) continue;
        const Matrix2d fd = Complex(1.0 / (12.0 * h)) *
                            (u_matrix(p - 2 * h, pair, params) - u_matrix(p + 2 * h, pair, params) +
                             Complex(8.0) * (u_matrix(p + h, pair, params) -
                                             u_matrix(p - h, pair, params)));
        fd_error = std::max(fd_error, max_abs(du_inv_dp(p, pair, params) - fd));
      }
    }
  });
  report.below("du_inv_dp_fd", fd_error, config.tolerance("du_inv_dp_fd"));
  report.charge(t3);

  const auto vgrid = MomentumGrid::symmetric(config.verify_grid.extent, config.verify_grid.count);
  const auto spinors = bump_spinors(vgrid, config.verify_spinors);
  const double t0_sign = config.faults.flip_t0_sign ? -1.0 : 1.0;
  double closed_form_err = 0.0, phi_conj = 0.0, conj_leak = 0.0;
  std::string conj_error;
  const double t4 = seconds_of([&] {
    for (const auto& named : pairs) {
      const DiracPair pair = to_numeric(named.pair);
      for (const auto& phi : spinors) {
        try {
          const SpinorGrid numeric = conjugate_toa_numeric(pair, params, phi);
          const SpinorGrid closed =
              apply_t_hat(phi, params) + Complex(t0_sign) * apply_t0(phi, pair, params);
          closed_form_err = std::max(closed_form_err, relative_difference(numeric, closed));
        } catch (const Error& e) {
          if (conj_error.empty()) conj_error = named.label + ": " + e.what();
          closed_form_err = INFINITY;
        }
      }
    }
  });
  if (conj_error.empty()) {
    report.below("closed_form_conjugation", closed_form_err, config.tolerance("closed_form_conjugation"),
                 std::to_string(pairs.size()) + " pairs x " + std::to_string(spinors.size()) +
                     " spinors");
  } else {
    report.failed("closed_form_conjugation", conj_error);
  }
  report.charge(t4);

  const double t5 = seconds_of([&] {
    for (const auto& named : pairs) {
      const DiracPair pair = to_numeric(named.pair);
      auto t_phi = [&](const SpinorGrid& s) {
        return apply_t_hat(s, params) + apply_t0(s, pair, params);
      };
      for (const auto& phi : spinors) {
        const SpinorGrid bracket = apply_hamiltonian_phi(t_phi(phi), params) -
                                   t_phi(apply_hamiltonian_phi(phi, params));
        phi_conj = std::max(phi_conj,
                            relative_difference(bracket, Complex(0.0, params.hbar) * phi));
      }
    }
  });
  report.below("phi_conjugacy", phi_conj, config.tolerance("phi_conjugacy"),
               "[H_phi, T_phi] against i hbar");
  report.charge(t5);

  double h_t0 = 0.0;
  const double t6 = seconds_of([&] {
    for (const auto& named : pairs) {
      const DiracPair pair = to_numeric(named.pair);
      for (double p : vgrid.samples()) {
        const double e = params.energy(p);
        const Matrix2d h(Complex(e), Complex(0.0), Complex(0.0), Complex(-e));
        const Matrix2d t = t0_scalar(p, pair, params) * identity;
        h_t0 = std::max(h_t0, max_abs(commutator(h, t)));
      }
    }
  });
  report.within("h_t0_commutator", h_t0, 0.0, 0.0, "pointwise symbols, exact");
  report.charge(t6);

  double leak = 0.0;
  const double t7 = seconds_of([&] {
    for (const auto& named : pairs) {
      const DiracPair pair = to_numeric(named.pair);
      for (const auto& base : spinors) {
        for (int side = 0; side < 2; ++side) {
          SpinorGrid phi = base;
          auto& kill = side == 0 ? phi.lower : phi.upper;
          std::fill(kill.begin(), kill.end(), Complex{});
          const double norm = phi.norm();
          auto leakage = [&](const SpinorGrid& r) {
            return component_norm(side == 0 ? r.lower : r.upper, r.grid.spacing()) / norm;
          };
          for (const SpinorGrid& r :
               {apply_hamiltonian_phi(phi, params), apply_t_hat(phi, params),
                apply_t0(phi, pair, params), parity_apply(phi), evolve(phi, 0.7, params)}) {
            leak = std::max(leak, leakage(r));
          }
          if (conj_error.empty() && &base - spinors.data() < 2) {
            conj_leak = std::max(conj_leak, leakage(conjugate_toa_numeric(pair, params, phi)));
          }
        }
      }
    }
  });
  report.below("one_particle_leakage", leak, config.tolerance("leakage"),
               "H_phi, T-hat, T0, parity, evolution");
  report.charge(t7);
  report.below("conjugation_leakage", conj_leak, config.tolerance("conjugation_leakage"),
               "numerically conjugated T_psi, finite-difference limited");
  return report;
}

Report cmd_dynamics(const RunConfig& config) {
  ensure_out_dir(config);
  const PhysParams& params = config.params;
  Report report("dynamics");
  const auto grid = MomentumGrid::symmetric(config.momentum.extent, config.momentum.count);
  const auto x = linspace(-config.position.extent, config.position.extent, config.position.count);
  const double dx = x[1] - x[0];
  const double cells = config.tolerance("localization_cells");

  for (double tau : config.taus) {
    const auto t = linspace(std::min(0.0, 2.0 * tau), std::max(0.0, 2.0 * tau), config.time_samples);
    std::size_t tau_index = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (std::abs(t[i] - tau) < std::abs(t[tau_index] - tau)) tau_index = i;
    }
    auto cell_distance = [&](std::size_t i) {
      return std::abs(static_cast<double>(i) - static_cast<double>(tau_index));
    };

    for (Branch branch : config.branches) {
      const std::string tag = "tau=" + label(tau) + "," + to_string(branch);
      try {
        timed(report, [&] {
          const SpinorGrid raw = toa_eigenfunction(tau, config.lambda, branch, grid, params);
          report.below("eigen_residual[" + tag + "]",
                       eigen_residual(raw, tau, params, config.residual_p_exclude),
                       config.tolerance("eigen_residual"));
        });

        EigenfunctionOptions options;
        options.window_sigma = config.effective_window_sigma();
        const SpinorGrid phi = toa_eigenfunction(tau, config.lambda, branch, grid, params, options);
        DensityField field;
        timed(report, [&] {
          field = density_movie(phi, t, x, params, config.parallel);
          double drift = 0.0;
          for (std::size_t i = 0; i < t.size(); ++i) {
            drift = std::max(drift, std::abs(field.total(i) / field.total(0) - 1.0));
          }
          report.below("unitarity[" + tag + "]", drift, config.tolerance("unitarity"));
        });

        const std::string file_name = "density_tau" + label(tau) + "_" + to_string(branch) + ".csv";
        {
          std::ofstream csv(config.out / file_name, std::ios::binary);
          write_density_csv(
              csv, field,
              {{"tau", format_fixed17(tau)},
               {"branch", to_string(branch)},
               {"lambda", std::to_string(config.lambda)},
               {"window_sigma", format_fixed17(options.window_sigma)},
               {"p_grid", "symmetric staggered, p_max " + format_fixed17(config.momentum.extent) +
                              ", count " + std::to_string(grid.size())},
               {"x_grid", format_fixed17(x.front()) + " .. " + format_fixed17(x.back()) +
                              ", count " + std::to_string(x.size())},
               {"t_grid", format_fixed17(t.front()) + " .. " + format_fixed17(t.back()) +
                              ", count " + std::to_string(t.size())},
               {"params", "hbar " + format_fixed17(params.hbar) + ", c " +
                              format_fixed17(params.c) + ", m0 " + format_fixed17(params.m0)},
               {"columns", "x,t,rho"}});
        }

        timed(report, [&] {
          const auto rho0 = origin_density(phi, t, params);
          if (branch == Branch::NonNodal) {
            const auto peak = static_cast<std::size_t>(
                std::max_element(rho0.begin(), rho0.end()) - rho0.begin());
            report.within("origin_peak_t_cells[" + tag + "]", cell_distance(peak), 0, cells);
            const auto flat = static_cast<std::size_t>(
                std::max_element(field.rho.begin(), field.rho.end()) - field.rho.begin());
            const std::size_t ti = flat / x.size(), xi = flat % x.size();
            report.within("field_argmax_t_cells[" + tag + "]", cell_distance(ti), 0, cells);
            report.within("field_argmax_x_cells[" + tag + "]", std::abs(x[xi]) / dx, 0, cells);
          } else {
            report.below("origin_density_max[" + tag + "]",
                         *std::max_element(rho0.begin(), rho0.end()),
                         config.tolerance("origin_density_nodal"));
            const auto sep = peak_separation(field);
            const auto closest = static_cast<std::size_t>(
                std::min_element(sep.begin(), sep.end()) - sep.begin());
            report.within("closest_peaks_t_cells[" + tag + "]", cell_distance(closest), 0, cells);
          }
        });
      } catch (const Error& e) {
        report.failed("dynamics[" + tag + "]", e.what());
      }
    }
  }
  return report;
}

Report cmd_parity(const RunConfig& config) {
  const auto pairs = resolve_pairs(config);
  ensure_out_dir(config);
  const PhysParams& params = config.params;
  Report report("parity");
  const auto grid = MomentumGrid::symmetric(config.momentum.extent, config.momentum.count);
  const auto spinors = gaussian_spinors(grid, params);

  double involution = 0.0;
  double t_hat = 0.0, t0 = 0.0;
  std::size_t t0_vanishing = 0;
  std::string error;
  const double t8 = seconds_of([&] {
    for (const auto& phi : spinors) {
      involution = std::max(involution, (parity_apply(parity_apply(phi)) - phi).norm());
      const double norm = phi.norm();
      t_hat = std::max(t_hat, parity_commutator(ToaPiece::THat, phi, to_numeric(require_any(pairs)),
                                                params).norm() / norm);
    }
    for (const auto& named : pairs) {
      const DiracPair pair = to_numeric(named.pair);
      if (named.pair.cross_z() == 0) ++t0_vanishing;
      for (const auto& phi : spinors) {
        try {
          const SpinorGrid numeric = parity_commutator(ToaPiece::T0, phi, pair, params);
          const SpinorGrid closed = parity_commutator_t0_closed_form(phi, pair, params);
          t0 = std::max(t0, (numeric - closed).norm() / phi.norm());
        } catch (const Error& e) {
          if (error.empty()) error = named.label + ": " + e.what();
        }
      }
    }
  });
  report.within("parity_involution", involution, 0, 0);
  report.charge(t8);
  report.below("t_hat_parity", t_hat, config.tolerance("t_hat_parity"), "|[Pi, T-hat] phi| / |phi|");
  if (error.empty()) {
    report.below("t0_parity_closed_form", t0, config.tolerance("t0_parity_closed_form"));
  } else {
    report.failed("t0_parity_closed_form", error);
  }
  report.info("pairs_with_vanishing_t0", static_cast<double>(t0_vanishing),
              "alpha1 beta2 - alpha2 beta1 = 0, so T0 and its commutator are zero");
  return report;
}

Report cmd_nonrel(const RunConfig& config) {
  ensure_out_dir(config);
  const PhysParams& params = config.params;
  const double mc = params.m0 * params.c;
  Report report("nonrel");
  std::vector<double> values;
  timed(report, [&] {
    for (double center : config.nonrel.centers) {
      const double p = center * mc;
      const double d = nonrel_limit_check(p, config.nonrel.relative_width * p, params);
      values.push_back(d);
      const std::string name = "discrepancy[p=" + label(center) + " m0c]";
      if (center <= 0.01) {
        report.below(name, d, config.tolerance("nonrel_small"));
      } else {
        report.info(name, d);
      }
    }
  });
  const double spread = config.tolerance("nonrel_ratio_spread");
  for (std::size_t k = 1; k < values.size(); ++k) {
    const double expected = std::pow(config.nonrel.centers[k - 1] / config.nonrel.centers[k], 2);
    report.within("ratio[" + label(config.nonrel.centers[k - 1]) + "/" +
                      label(config.nonrel.centers[k]) + "]",
                  values[k - 1] / values[k], expected * (1.0 - spread), expected * (1.0 + spread),
                  "second-order scaling");
  }
  timed(report, [&] {
    const double p = config.nonrel.relativistic_center * mc;
    report.above("relativistic[p=" + label(config.nonrel.relativistic_center) + " m0c]",
                 nonrel_limit_check(p, config.nonrel.relative_width * p, params),
                 config.tolerance("nonrel_relativistic"), "limit not applicable");
  });
  return report;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Relativistic spin-1/2 time-of-arrival operator: derivation and checks", "toa"};
  app.require_subcommand(1);

  std::string config_path;
  Overrides overrides;
  std::size_t grid_n = 0;
  std::string out_dir;
  std::uint64_t seed = 0;

  struct Entry {
    const char* name;
    const char* help;
    Report (*run)(const RunConfig&);
  };
  const Entry entries[] = {
      {"derive", "Solve the conjugacy constraints and emit the operator", cmd_derive},
      {"verify", "Check the diagonalizing transform and the closed forms", cmd_verify},
      {"dynamics", "Eigenfunction density movies and localization checks", cmd_dynamics},
      {"parity", "Parity commutators of the two operator pieces", cmd_parity},
      {"nonrel", "Non-relativistic limit sweep", cmd_nonrel},
  };
  std::vector<CLI::App*> subs;
  for (const auto& e : entries) {
    CLI::App* sub = app.add_subcommand(e.name, e.help);
    sub->add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
    sub->add_option("--pair", overrides.pairs,
                    "Pair: standard, rotated, generic[:seed] or 'a1,a2,a3;b1,b2,b3' (repeatable)");
    sub->add_option("--tau", overrides.taus, "Arrival-time eigenvalue (repeatable)");
    sub->add_option("--grid-n", grid_n, "Momentum grid sample count");
    sub->add_option("--out", out_dir, "Output directory");
    sub->add_option("--seed", seed, "Seed for sampled pairs");
    sub->add_flag("--parallel", overrides.parallel, "Fan out independent time samples");
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  std::size_t chosen = 0;
  for (std::size_t k = 0; k < subs.size(); ++k) {
    if (subs[k]->parsed()) chosen = k;
  }
  CLI::App* sub = subs[chosen];
  if (sub->count("--grid-n") > 0) overrides.grid_n = grid_n;
  if (sub->count("--out") > 0) overrides.out = out_dir;
  if (sub->count("--seed") > 0) overrides.seed = seed;

  RunConfig config;
  try {
    config = load_config(config_path);
    apply_overrides(config, overrides);
  } catch (const ConfigError& e) {
    err << e.what() << "\n";
    return 2;
  }

  try {
    const Report report = entries[chosen].run(config);
    report.print(out);
    report.write(config.out / (std::string(entries[chosen].name) + "-report.json"));
    return report.pass() ? 0 : 1;
  } catch (const ConfigError& e) {
    err << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace toa::cli
