#include "aclab/numerics/torus.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "aclab/error.hpp"

namespace aclab::numerics {
namespace {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// Plans are created once per size and reused with the new-array execute
// interface, which is safe to call concurrently.
struct Plans {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
};

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [n, p] : plans_) {
      fftw_destroy_plan(p.forward);
      fftw_destroy_plan(p.backward);
    }
  }

  Plans get(std::size_t n) {
    std::lock_guard lock(mutex_);
    auto it = plans_.find(n);
    if (it != plans_.end()) return it->second;
    double* real = fftw_alloc_real(n);
    fftw_complex* spec = fftw_alloc_complex(n / 2 + 1);
    const int len = static_cast<int>(n);
    Plans p;
    p.forward = fftw_plan_dft_r2c_1d(len, real, spec, FFTW_ESTIMATE);
    p.backward = fftw_plan_dft_c2r_1d(len, spec, real, FFTW_ESTIMATE);
    fftw_free(real);
    fftw_free(spec);
    plans_.emplace(n, p);
    return p;
  }

 private:
  std::mutex mutex_;
  std::map<std::size_t, Plans> plans_;
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

struct RealBuffer {
  explicit RealBuffer(std::size_t n) : data(fftw_alloc_real(n)) {}
  ~RealBuffer() { fftw_free(data); }
  RealBuffer(const RealBuffer&) = delete;
  RealBuffer& operator=(const RealBuffer&) = delete;
  double* data;
};

struct ComplexBuffer {
  explicit ComplexBuffer(std::size_t n) : data(fftw_alloc_complex(n)) {}
  ~ComplexBuffer() { fftw_free(data); }
  ComplexBuffer(const ComplexBuffer&) = delete;
  ComplexBuffer& operator=(const ComplexBuffer&) = delete;
  fftw_complex* data;
};

void check_size(std::size_t n) {
  require(is_power_of_two(n) && n >= 4, ErrorKind::Domain,
          "transform length must be a power of two, got " + std::to_string(n));
}

double parity(std::size_t m) { return (m % 2 == 0) ? 1.0 : -1.0; }

// Grid offset x_0 = -pi turns sin(m x_j) into (-1)^m sin(2 pi m j / n).
template <bool Sine>
void synthesize_raw(std::span<const double> coeffs, std::span<double> out) {
  const std::size_t n = out.size();
  check_size(n);
  const std::size_t half = n / 2;
  ComplexBuffer spec(half + 1);
  RealBuffer real(n);
  for (std::size_t k = 0; k <= half; ++k) spec.data[k][0] = spec.data[k][1] = 0.0;
  const std::size_t top = std::min(coeffs.size(), half - 1);
  for (std::size_t m = 1; m <= top; ++m) {
    const double c = parity(m) * coeffs[m - 1];
    if constexpr (Sine) {
      spec.data[m][1] = -0.5 * c;
    } else {
      spec.data[m][0] = 0.5 * c;
    }
  }
  fftw_execute_dft_c2r(cache().get(n).backward, spec.data, real.data);
  std::copy(real.data, real.data + n, out.begin());
}

void forward(std::span<const double> samples, ComplexBuffer& spec) {
  const std::size_t n = samples.size();
  check_size(n);
  RealBuffer real(n);
  std::copy(samples.begin(), samples.end(), real.data);
  fftw_execute_dft_r2c(cache().get(n).forward, real.data, spec.data);
}

}  // namespace

TorusGrid::TorusGrid(std::size_t n_points) : n_(n_points) {
  require(n_points >= 16 && is_power_of_two(n_points), ErrorKind::Domain,
          "grid size must be a power of two >= 16, got " + std::to_string(n_points));
}

TorusField::TorusField(TorusGrid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  require(values_.size() == grid_.size(), ErrorKind::Domain, "field size does not match grid");
  for (double v : values_) require(std::isfinite(v), ErrorKind::Domain, "field has non-finite values");
}

double TorusField::max_abs() const noexcept {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double TorusField::integral() const noexcept {
  double s = 0.0;
  for (double v : values_) s += v;
  return s * grid_.spacing();
}

double TorusField::oddness_defect() const noexcept {
  double worst = 0.0;
  for (std::size_t j = 0; j < values_.size(); ++j) {
    worst = std::max(worst, std::abs(values_[j] + values_[grid_.mirror(j)]));
  }
  return worst;
}

SineSpectrum::SineSpectrum(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {}

bool SineSpectrum::is_finite() const noexcept {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](double c) { return std::isfinite(c); });
}

double SineSpectrum::l2_norm() const noexcept {
  double s = 0.0;
  for (double c : coeffs_) s += c * c;
  return std::sqrt(std::numbers::pi * s);
}

void sine_synthesis(std::span<const double> coeffs, std::span<double> out) {
  synthesize_raw<true>(coeffs, out);
}

void cosine_synthesis(std::span<const double> coeffs, std::span<double> out) {
  synthesize_raw<false>(coeffs, out);
}

void sine_analysis(std::span<const double> samples, std::span<double> coeffs) {
  const std::size_t n = samples.size();
  ComplexBuffer spec(n / 2 + 1);
  forward(samples, spec);
  const double scale = 2.0 / static_cast<double>(n);
  for (std::size_t m = 1; m <= coeffs.size(); ++m) {
    coeffs[m - 1] = m < n / 2 ? -scale * parity(m) * spec.data[m][1] : 0.0;
  }
}

void cosine_analysis(std::span<const double> samples, std::span<double> out) {
  const std::size_t n = samples.size();
  ComplexBuffer spec(n / 2 + 1);
  forward(samples, spec);
  const double scale = 2.0 / static_cast<double>(n);
  for (std::size_t k = 0; k < out.size(); ++k) {
    // The Nyquist term is shared between +k and -k.
    const double w = k == n / 2 ? 0.5 : 1.0;
    out[k] = k <= n / 2 ? w * scale * parity(k) * spec.data[k][0] : 0.0;
  }
}

SineSpectrum sine_transform(const TorusField& field, double symmetry_tol) {
  const double defect = field.oddness_defect();
  if (!(defect <= symmetry_tol)) {
    throw Error(ErrorKind::SymmetryViolation,
                "field is not odd about x=0: defect " + std::to_string(defect));
  }
  std::vector<double> coeffs(field.grid().max_mode());
  sine_analysis(field.values(), coeffs);
  return SineSpectrum(std::move(coeffs));
}

TorusField synthesize(const SineSpectrum& spec, const TorusGrid& grid) {
  std::vector<double> values(grid.size());
  sine_synthesis(spec.coeffs(), values);
  return TorusField(grid, std::move(values));
}

TorusField spectral_derivative(const SineSpectrum& spec, int order, const TorusGrid& grid) {
  require(order == 1 || order == 2, ErrorKind::Domain, "derivative order must be 1 or 2");
  std::vector<double> scaled(spec.coeffs().begin(), spec.coeffs().end());
  for (std::size_t m = 1; m <= scaled.size(); ++m) {
    const double md = static_cast<double>(m);
    scaled[m - 1] *= order == 1 ? md : -md * md;
  }
  std::vector<double> values(grid.size());
  if (order == 1) {
    cosine_synthesis(scaled, values);
  } else {
    sine_synthesis(scaled, values);
  }
  return TorusField(grid, std::move(values));
}

}  // namespace aclab::numerics
