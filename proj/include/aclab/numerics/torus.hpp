#pragma once

#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

namespace aclab::numerics {

/// Uniform grid x_j = -pi + 2 pi j / n on the periodic interval [-pi, pi).
class TorusGrid {
 public:
  static constexpr std::size_t kDefaultPoints = 2048;

  explicit TorusGrid(std::size_t n_points = kDefaultPoints);

  std::size_t size() const noexcept { return n_; }
  double spacing() const noexcept { return 2.0 * std::numbers::pi / static_cast<double>(n_); }
  double x(std::size_t j) const noexcept {
    return -std::numbers::pi + spacing() * static_cast<double>(j);
  }
  /// Index of the grid point at -x_j.
  std::size_t mirror(std::size_t j) const noexcept { return (n_ - j) % n_; }
  /// Index of x = 0.
  std::size_t origin() const noexcept { return n_ / 2; }
  /// Largest sine mode that is not aliased on this grid.
  std::size_t max_mode() const noexcept { return n_ / 2 - 1; }

  bool operator==(const TorusGrid&) const = default;

 private:
  std::size_t n_;
};

/// Real samples of a 2 pi-periodic function on a TorusGrid.
class TorusField {
 public:
  TorusField(TorusGrid grid, std::vector<double> values);

  const TorusGrid& grid() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t j) const noexcept { return values_[j]; }
  std::size_t size() const noexcept { return values_.size(); }

  double max_abs() const noexcept;
  /// Periodic trapezoid rule, spectrally accurate for smooth fields.
  double integral() const noexcept;
  /// Max over j of |f(x_j) + f(-x_j)|.
  double oddness_defect() const noexcept;

 private:
  TorusGrid grid_;
  std::vector<double> values_;
};

/// Coefficients c_1..c_M of f(x) = sum_m c_m sin(m x); coeffs()[m-1] is c_m.
class SineSpectrum {
 public:
  SineSpectrum() = default;
  explicit SineSpectrum(std::vector<double> coeffs);

  std::size_t max_mode() const noexcept { return coeffs_.size(); }
  double coeff(std::size_t m) const noexcept {
    return m >= 1 && m <= coeffs_.size() ? coeffs_[m - 1] : 0.0;
  }
  std::span<const double> coeffs() const noexcept { return coeffs_; }
  std::vector<double>& mutable_coeffs() noexcept { return coeffs_; }

  bool is_finite() const noexcept;
  /// L2 norm on the torus: sqrt(pi * sum c_m^2).
  double l2_norm() const noexcept;

 private:
  std::vector<double> coeffs_;
};

inline constexpr double kSymmetryTolerance = 1e-8;

/// c_m = (1/pi) int f(x) sin(mx) dx by the discrete transform, m = 1..n/2-1.
/// Throws Error(SymmetryViolation) when f is not odd to `symmetry_tol`.
SineSpectrum sine_transform(const TorusField& field, double symmetry_tol = kSymmetryTolerance);

/// Inverse of sine_transform: samples of sum_m c_m sin(mx) on the grid.
/// Modes above the grid's max_mode are ignored.
TorusField synthesize(const SineSpectrum& spec, const TorusGrid& grid);

/// order 1: sum_m m c_m cos(mx); order 2: -sum_m m^2 c_m sin(mx).
TorusField spectral_derivative(const SineSpectrum& spec, int order, const TorusGrid& grid);

// Raw transforms on a power-of-two sample count; used by the evolution loop
// where the grid objects would only add allocation.
void sine_synthesis(std::span<const double> coeffs, std::span<double> out);
void cosine_synthesis(std::span<const double> coeffs, std::span<double> out);
/// First `coeffs.size()` sine coefficients of the samples.
void sine_analysis(std::span<const double> samples, std::span<double> coeffs);
/// a_k = (1/pi) int f cos(kx) dx for k = 0..out.size()-1.
void cosine_analysis(std::span<const double> samples, std::span<double> out);

}  // namespace aclab::numerics
