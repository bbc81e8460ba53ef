#include "toa/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <thread>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "toa/bender_dunne.hpp"
#include "toa/errors.hpp"
#include "toa/fv_transform.hpp"

namespace toa {

SpinorGrid evolve(const SpinorGrid& phi, double t, const PhysParams& params) {
  SpinorGrid out = phi;
  for (std::size_t k = 0; k < phi.size(); ++k) {
    const double phase = params.energy(phi.grid[k]) * t / params.hbar;
    const Complex rot = std::polar(1.0, -phase);
    out.upper[k] *= rot;
    out.lower[k] *= std::conj(rot);
  }
  return out;
}

double PositionField::norm_squared() const {
  if (x.size() < 2) return 0.0;
  const double dx = (x.back() - x.front()) / static_cast<double>(x.size() - 1);
  double sum = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) sum += std::norm(upper[k]) + std::norm(lower[k]);
  return sum * dx;
}

double edge_mass_fraction(const SpinorGrid& phi) {
  const std::size_t n = phi.size();
  const std::size_t band = std::min(n / 2, std::max<std::size_t>(4, n / 50));
  double edge = 0.0, total = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double w = std::norm(phi.upper[k]) + std::norm(phi.lower[k]);
    total += w;
    if (k < band || k >= n - band) edge += w;
  }
  return total == 0.0 ? 0.0 : edge / total;
}

namespace {

bool any_nonzero(const std::vector<Complex>& v) {
  return std::any_of(v.begin(), v.end(), [](const Complex& z) { return z != Complex{}; });
}

// Accumulates sum_k a_k exp(i p_k x / hbar) for every x. The phase factor is
// advanced by a per-x rotation and re-seeded every kReseed samples.
void fourier_sum(std::span<const double> p, double dp, std::span<const Complex> a,
                 std::span<const double> x, double hbar, std::vector<double>& out_re,
                 std::vector<double>& out_im) {
  constexpr std::size_t kReseed = 256;
  const std::size_t nx = x.size();
  std::vector<double> wr(nx), wi(nx), zr(nx), zi(nx);
  out_re.assign(nx, 0.0);
  out_im.assign(nx, 0.0);
  for (std::size_t xi = 0; xi < nx; ++xi) {
    zr[xi] = std::cos(dp * x[xi] / hbar);
    zi[xi] = std::sin(dp * x[xi] / hbar);
  }
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (k % kReseed == 0) {
      for (std::size_t xi = 0; xi < nx; ++xi) {
        wr[xi] = std::cos(p[k] * x[xi] / hbar);
        wi[xi] = std::sin(p[k] * x[xi] / hbar);
      }
    }
    const double ar = a[k].real();
    const double ai = a[k].imag();
    if (ar != 0.0 || ai != 0.0) {
      for (std::size_t xi = 0; xi < nx; ++xi) {
        out_re[xi] += wr[xi] * ar - wi[xi] * ai;
        out_im[xi] += wr[xi] * ai + wi[xi] * ar;
      }
    }
    for (std::size_t xi = 0; xi < nx; ++xi) {
      const double r = wr[xi] * zr[xi] - wi[xi] * zi[xi];
      wi[xi] = wr[xi] * zi[xi] + wi[xi] * zr[xi];
      wr[xi] = r;
    }
  }
}

}  // namespace

PositionField to_position(const SpinorGrid& phi, std::span<const double> x,
                          const PhysParams& params) {
  const double edge = edge_mass_fraction(phi);
  if (edge > kTailMassLimit) {
    throw TailMass("momentum-space edge mass fraction " + format_fixed17(edge) + " exceeds " +
                   format_fixed17(kTailMassLimit));
  }
  const double scale = phi.grid.spacing() / std::sqrt(2.0 * std::numbers::pi * params.hbar);
  PositionField out{std::vector<double>(x.begin(), x.end()), std::vector<Complex>(x.size()),
                    std::vector<Complex>(x.size())};
  std::vector<double> re, im;
  auto transform = [&](const std::vector<Complex>& component, std::vector<Complex>& target) {
    if (!any_nonzero(component)) return;
    fourier_sum(phi.grid.samples(), phi.grid.spacing(), component, x, params.hbar, re, im);
    for (std::size_t k = 0; k < x.size(); ++k) target[k] = Complex(re[k], im[k]) * scale;
  };
  transform(phi.upper, out.upper);
  transform(phi.lower, out.lower);
  return out;
}

SpinorGrid parity_apply(const SpinorGrid& phi) {
  if (!phi.grid.is_symmetric()) throw GridMismatch("parity needs a symmetric momentum grid");
  SpinorGrid out = phi;
  std::reverse(out.upper.begin(), out.upper.end());
  std::reverse(out.lower.begin(), out.lower.end());
  return out;
}

SpinorGrid parity_commutator(ToaPiece piece, const SpinorGrid& phi, const DiracPair& pair,
                             const PhysParams& params) {
  auto op = [&](const SpinorGrid& s) {
    return piece == ToaPiece::THat ? apply_t_hat(s, params) : apply_t0(s, pair, params);
  };
  return parity_apply(op(phi)) - op(parity_apply(phi));
}

SpinorGrid parity_commutator_t0_closed_form(const SpinorGrid& phi, const DiracPair& pair,
                                            const PhysParams& params) {
  const SpinorGrid mirrored = parity_apply(phi);
  SpinorGrid out = SpinorGrid::zeros(phi.grid);
  const double a3 = pair.alpha()[2];
  const double b3 = pair.beta()[2];
  for (std::size_t k = 0; k < phi.size(); ++k) {
    const double p = phi.grid[k];
    const double e = params.energy(p);
    const double even = e + params.rest_energy() * b3;
    const double odd = p * params.c * a3;
    const double factor = 2.0 * even * pair.cross_z() / (even * even - odd * odd) *
                          (params.hbar * params.m0 * params.c / (2.0 * p));
    out.upper[k] = factor * mirrored.upper[k];
    out.lower[k] = factor * mirrored.lower[k];
  }
  return out;
}

std::string to_string(Branch branch) {
  return branch == Branch::NonNodal ? "non-nodal" : "nodal";
}

Branch parse_branch(const std::string& text) {
  if (text == "non-nodal" || text == "nonnodal" || text == "+") return Branch::NonNodal;
  if (text == "nodal" || text == "-") return Branch::Nodal;
  throw ConfigError("unknown branch '" + text + "' (expected non-nodal or nodal)");
}

SpinorGrid toa_eigenfunction(double tau, int lambda, Branch branch, const MomentumGrid& grid,
                             const PhysParams& params, const EigenfunctionOptions& options) {
  if (lambda != 1 && lambda != -1) throw std::invalid_argument("lambda must be +1 or -1");
  if (grid.contains_zero()) throw SingularAtZero("eigenfunction grid contains p = 0");
  if (!grid.is_symmetric()) throw GridMismatch("eigenfunction needs a symmetric momentum grid");

  // phi'/phi = (lambda tau - potential) / drift, split into real and imaginary parts.
  auto log_derivative = [&](double s) {
    const auto [drift, potential] = t_hat_coeffs(s, params);
    return (static_cast<double>(lambda) * tau - potential) / drift;
  };
  auto real_part = [&](double s) { return log_derivative(s).real(); };
  auto imag_part = [&](double s) { return log_derivative(s).imag(); };

  using Quadrature = boost::math::quadrature::gauss_kronrod<double, 15>;
  const std::size_t half = grid.size() / 2;
  std::vector<Complex> positive(half);
  double log_amplitude = 0.0;
  double phase = 0.0;
  positive[0] = 1.0;
  for (std::size_t k = 1; k < half; ++k) {
    const double a = grid[half + k - 1];
    const double b = grid[half + k];
    log_amplitude += Quadrature::integrate(real_part, a, b, 20, options.quadrature_tolerance);
    phase += Quadrature::integrate(imag_part, a, b, 20, options.quadrature_tolerance);
    positive[k] = std::polar(std::exp(log_amplitude), phase);
  }

  SpinorGrid out = SpinorGrid::zeros(grid);
  auto& slot = lambda == 1 ? out.upper : out.lower;
  const double mirror_sign = branch == Branch::NonNodal ? 1.0 : -1.0;
  for (std::size_t k = 0; k < half; ++k) {
    double window = 1.0;
    if (options.window_sigma > 0.0) {
      const double u = grid[half + k] / options.window_sigma;
      window = std::exp(-0.5 * u * u);
    }
    slot[half + k] = window * positive[k];
    slot[half - 1 - k] = mirror_sign * slot[half + k];
  }
  out *= Complex(1.0 / out.norm());
  return out;
}

double eigen_residual(const SpinorGrid& phi, double tau, const PhysParams& params,
                      double p_exclude, std::size_t edge_cells) {
  const SpinorGrid t_phi = apply_t_hat(phi, params);
  double num = 0.0, den = 0.0;
  for (std::size_t k = edge_cells; k + edge_cells < phi.size(); ++k) {
    if (std::abs(phi.grid[k]) < p_exclude) continue;
    num += std::norm(t_phi.upper[k] - tau * phi.upper[k]) +
           std::norm(t_phi.lower[k] - tau * phi.lower[k]);
    den += std::norm(phi.upper[k]) + std::norm(phi.lower[k]);
  }
  return den == 0.0 ? 0.0 : std::sqrt(num / den);
}

double DensityField::total(std::size_t ti) const {
  if (x.size() < 2) return 0.0;
  const double dx = (x.back() - x.front()) / static_cast<double>(x.size() - 1);
  double sum = 0.0;
  for (std::size_t xi = 0; xi < x.size(); ++xi) sum += at(ti, xi);
  return sum * dx;
}

DensityField density_movie(const SpinorGrid& phi0, std::span<const double> t,
                           std::span<const double> x, const PhysParams& params, bool parallel) {
  DensityField field{std::vector<double>(x.begin(), x.end()), std::vector<double>(t.begin(), t.end()),
                     std::vector<double>(t.size() * x.size())};
  // Edge mass is invariant under evolution; checking once surfaces TailMass
  // before any worker starts.
  if (edge_mass_fraction(phi0) > kTailMassLimit) {
    throw TailMass("initial state carries edge mass " + format_fixed17(edge_mass_fraction(phi0)));
  }

  auto frame = [&](std::size_t ti) {
    const PositionField f = to_position(evolve(phi0, t[ti], params), x, params);
    for (std::size_t xi = 0; xi < x.size(); ++xi) {
      field.rho[ti * x.size() + xi] = std::norm(f.upper[xi]) + std::norm(f.lower[xi]);
    }
  };

  const std::size_t workers =
      parallel ? std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(),
                                                 static_cast<unsigned>(t.size())))
               : 1;
  if (workers <= 1) {
    for (std::size_t ti = 0; ti < t.size(); ++ti) frame(ti);
    return field;
  }
  std::vector<std::jthread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t ti = w; ti < t.size(); ti += workers) frame(ti);
    });
  }
  pool.clear();
  return field;
}

std::vector<double> origin_density(const SpinorGrid& phi0, std::span<const double> t,
                                   const PhysParams& params) {
  const double origin[] = {0.0};
  std::vector<double> out(t.size());
  for (std::size_t ti = 0; ti < t.size(); ++ti) {
    const PositionField f = to_position(evolve(phi0, t[ti], params), origin, params);
    out[ti] = std::norm(f.upper[0]) + std::norm(f.lower[0]);
  }
  return out;
}

namespace {

// Vertex of the parabola through (xi-1, xi, xi+1).
double refine_peak(const DensityField& field, std::size_t ti, std::size_t xi) {
  const double x0 = field.x[xi];
  if (xi == 0 || xi + 1 >= field.x.size()) return x0;
  const double ym = field.at(ti, xi - 1), y0 = field.at(ti, xi), yp = field.at(ti, xi + 1);
  const double curvature = ym - 2.0 * y0 + yp;
  if (curvature >= 0.0) return x0;
  const double dx = field.x[xi + 1] - field.x[xi];
  return x0 + 0.5 * dx * (ym - yp) / curvature;
}

}  // namespace

std::vector<double> peak_separation(const DensityField& field) {
  std::vector<double> out(field.t.size());
  for (std::size_t ti = 0; ti < field.t.size(); ++ti) {
    std::size_t best_pos = field.x.size(), best_neg = field.x.size();
    for (std::size_t xi = 0; xi < field.x.size(); ++xi) {
      const double r = field.at(ti, xi);
      if (field.x[xi] > 0.0) {
        if (best_pos == field.x.size() || r > field.at(ti, best_pos)) best_pos = xi;
      } else if (field.x[xi] < 0.0) {
        if (best_neg == field.x.size() || r > field.at(ti, best_neg)) best_neg = xi;
      }
    }
    if (best_pos == field.x.size() || best_neg == field.x.size()) {
      throw std::invalid_argument("peak separation needs samples on both sides of x = 0");
    }
    out[ti] = refine_peak(field, ti, best_pos) - refine_peak(field, ti, best_neg);
  }
  return out;
}

double nonrel_limit_check(double p_center, double p_width, const PhysParams& params,
                          std::size_t count) {
  if (!(p_width > 0.0) || !(p_center - 3.0 * p_width > 0.0)) {
    throw SupportViolation("need p_width > 0 and p_center - 3 p_width > 0");
  }
  const auto grid = MomentumGrid::symmetric(p_center + 10.0 * p_width, count);
  SpinorGrid phi = SpinorGrid::zeros(grid);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double u = (grid[k] - p_center) / p_width;
    phi.upper[k] = std::exp(-0.5 * u * u);
  }
  const SpinorGrid relativistic = apply_t_hat(phi, params);
  const SpinorGrid free_toa = apply_in_momentum_rep(
      OperatorPoly::term(-1, 1, -SymPoly::m0() * SymMatrix2::identity()), phi, params);
  return relative_difference(free_toa, relativistic);
}

std::string format_fixed17(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.16e", value);
  return buf;
}

void write_density_csv(std::ostream& out, const DensityField& field,
                       const std::map<std::string, std::string>& header) {
  for (const auto& [key, value] : header) out << "# " << key << ": " << value << "\n";
  out << "x,t,rho\n";
  for (std::size_t ti = 0; ti < field.t.size(); ++ti) {
    const std::string t = format_fixed17(field.t[ti]);
    for (std::size_t xi = 0; xi < field.x.size(); ++xi) {
      out << format_fixed17(field.x[xi]) << ',' << t << ',' << format_fixed17(field.at(ti, xi))
          << '\n';
    }
  }
}

}  // namespace toa
