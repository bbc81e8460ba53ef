#include "toa/grid.hpp"

#include <cmath>
#include <stdexcept>

#include "toa/errors.hpp"

namespace toa {

MomentumGrid::MomentumGrid(std::vector<double> samples, double spacing, bool symmetric)
    : samples_(std::make_shared<const std::vector<double>>(std::move(samples))),
      spacing_(spacing),
      symmetric_(symmetric) {}

MomentumGrid MomentumGrid::symmetric(double p_max, std::size_t count) {
  if (!(p_max > 0.0) || !std::isfinite(p_max)) {
    throw std::invalid_argument("symmetric grid needs a finite p_max > 0");
  }
  if (count < 6 || count % 2 != 0) {
    throw std::invalid_argument("symmetric grid needs an even count >= 6");
  }
  const double dp = 2.0 * p_max / static_cast<double>(count);
  const std::size_t half = count / 2;
  std::vector<double> p(count);
  // Positive half first, then mirror, so p[mirror(k)] == -p[k] bit for bit.
  for (std::size_t k = 0; k < half; ++k) {
    p[half + k] = (static_cast<double>(k) + 0.5) * dp;
  }
  for (std::size_t k = 0; k < half; ++k) {
    p[half - 1 - k] = -p[half + k];
  }
  return MomentumGrid(std::move(p), dp, true);
}

MomentumGrid MomentumGrid::uniform(double p_min, double p_max, std::size_t count) {
  if (!(p_max > p_min) || count < 6) {
    throw std::invalid_argument("uniform grid needs p_max > p_min and count >= 6");
  }
  auto p = linspace(p_min, p_max, count);
  return MomentumGrid(std::move(p), (p_max - p_min) / static_cast<double>(count - 1), false);
}

bool MomentumGrid::contains_zero() const {
  for (double p : *samples_) {
    if (p == 0.0) return true;
  }
  return false;
}

SpinorGrid SpinorGrid::zeros(const MomentumGrid& grid) {
  return SpinorGrid{grid, std::vector<Complex>(grid.size()), std::vector<Complex>(grid.size())};
}

double SpinorGrid::norm_squared() const {
  double sum = 0.0;
  for (std::size_t k = 0; k < size(); ++k) sum += std::norm(upper[k]) + std::norm(lower[k]);
  return sum * grid.spacing();
}

double SpinorGrid::norm() const { return std::sqrt(norm_squared()); }

namespace {

void require_same_grid(const SpinorGrid& a, const SpinorGrid& b) {
  if (!(a.grid == b.grid)) throw GridMismatch("spinors live on different momentum grids");
}

}  // namespace

SpinorGrid& SpinorGrid::operator+=(const SpinorGrid& o) {
  require_same_grid(*this, o);
  for (std::size_t k = 0; k < size(); ++k) {
    upper[k] += o.upper[k];
    lower[k] += o.lower[k];
  }
  return *this;
}

SpinorGrid& SpinorGrid::operator-=(const SpinorGrid& o) {
  require_same_grid(*this, o);
  for (std::size_t k = 0; k < size(); ++k) {
    upper[k] -= o.upper[k];
    lower[k] -= o.lower[k];
  }
  return *this;
}

SpinorGrid& SpinorGrid::operator*=(Complex s) {
  for (auto& z : upper) z *= s;
  for (auto& z : lower) z *= s;
  return *this;
}

double relative_difference(const SpinorGrid& a, const SpinorGrid& b) {
  const double diff = (a - b).norm();
  const double ref = b.norm();
  if (ref == 0.0) return diff == 0.0 ? 0.0 : INFINITY;
  return diff / ref;
}

std::vector<Complex> derivative(std::span<const Complex> f, double h) {
  const std::size_t n = f.size();
  if (n < 5) throw std::invalid_argument("derivative needs at least 5 samples");
  std::vector<Complex> d(n);
  const double inv = 1.0 / (12.0 * h);
  for (std::size_t k = 2; k + 2 < n; ++k) {
    d[k] = (f[k - 2] - 8.0 * f[k - 1] + 8.0 * f[k + 1] - f[k + 2]) * inv;
  }
  d[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) * inv;
  d[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) * inv;
  d[n - 1] = (25.0 * f[n - 1] - 48.0 * f[n - 2] + 36.0 * f[n - 3] - 16.0 * f[n - 4] + 3.0 * f[n - 5]) * inv;
  d[n - 2] = (3.0 * f[n - 1] + 10.0 * f[n - 2] - 18.0 * f[n - 3] + 6.0 * f[n - 4] - f[n - 5]) * inv;
  return d;
}

std::vector<double> linspace(double a, double b, std::size_t n) {
  if (n == 0) return {};
  if (n == 1) return {a};
  std::vector<double> x(n);
  const double step = (b - a) / static_cast<double>(n - 1);
  for (std::size_t k = 0; k < n; ++k) x[k] = a + step * static_cast<double>(k);
  x.back() = b;
  return x;
}

}  // namespace toa
