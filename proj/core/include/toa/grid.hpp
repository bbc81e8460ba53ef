#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace toa {

using Complex = std::complex<double>;

/// Uniformly spaced momentum samples, shared immutably between copies.
class MomentumGrid {
 public:
  /// Staggered grid on [-p_max, p_max]: p_k = -p_max + (k + 1/2) dp with an
  /// even count, so 0 is never a sample and samples come in exact +/- pairs.
  static MomentumGrid symmetric(double p_max, std::size_t count);

  /// Endpoint-inclusive uniform grid; may contain p = 0 and need not be symmetric.
  static MomentumGrid uniform(double p_min, double p_max, std::size_t count);

  std::span<const double> samples() const { return *samples_; }
  double operator[](std::size_t k) const { return (*samples_)[k]; }
  std::size_t size() const { return samples_->size(); }
  double spacing() const { return spacing_; }
  double p_min() const { return samples_->front(); }
  double p_max() const { return samples_->back(); }

  bool is_symmetric() const { return symmetric_; }
  bool contains_zero() const;
  /// Index of -p_k; requires is_symmetric().
  std::size_t mirror(std::size_t k) const { return size() - 1 - k; }

  friend bool operator==(const MomentumGrid& a, const MomentumGrid& b) {
    return a.samples_ == b.samples_ || *a.samples_ == *b.samples_;
  }

 private:
  MomentumGrid(std::vector<double> samples, double spacing, bool symmetric);

  std::shared_ptr<const std::vector<double>> samples_;
  double spacing_ = 0.0;
  bool symmetric_ = false;
};

/// Two-component wavefunction sampled on a momentum grid.
struct SpinorGrid {
  MomentumGrid grid;
  std::vector<Complex> upper;
  std::vector<Complex> lower;

  static SpinorGrid zeros(const MomentumGrid& grid);

  std::size_t size() const { return grid.size(); }
  /// Midpoint-rule value of the integral of |upper|^2 + |lower|^2 dp.
  double norm_squared() const;
  double norm() const;

  SpinorGrid& operator+=(const SpinorGrid& o);
  SpinorGrid& operator-=(const SpinorGrid& o);
  SpinorGrid& operator*=(Complex s);
  friend SpinorGrid operator+(SpinorGrid a, const SpinorGrid& b) { return a += b; }
  friend SpinorGrid operator-(SpinorGrid a, const SpinorGrid& b) { return a -= b; }
  friend SpinorGrid operator*(Complex s, SpinorGrid a) { return a *= s; }
};

/// ||a - b|| / ||b|| in the grid norm (0 when both vanish).
double relative_difference(const SpinorGrid& a, const SpinorGrid& b);

/// Centered fourth-order first derivative; fourth-order one-sided stencils
/// at the two outermost samples of each end. Requires at least 5 samples.
std::vector<Complex> derivative(std::span<const Complex> f, double h);

/// n points from a to b inclusive.
std::vector<double> linspace(double a, double b, std::size_t n);

}  // namespace toa
