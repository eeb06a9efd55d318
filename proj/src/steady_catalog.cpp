#include "aclab/steady_catalog.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "aclab/error.hpp"
#include "aclab/parallel.hpp"

namespace aclab::steady {
namespace {

using numerics::TorusField;
using numerics::TorusGrid;
using std::numbers::pi;

std::size_t next_power_of_two(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace

int count_states(double kappa) {
  require(kappa > 0.0, ErrorKind::Domain, "kappa must be positive");
  if (kappa >= 1.0) return 0;
  int m = static_cast<int>(std::floor(1.0 / kappa));
  while (m * kappa >= 1.0) --m;
  while ((m + 1) * kappa < 1.0) ++m;
  return m;
}

TorusField compress(const TorusField& f, int j) {
  const TorusGrid& grid = f.grid();
  const std::size_t n = grid.size();
  std::vector<double> values(n);
  // j x_i = -j pi + 2 pi j i / n, which is the grid point k = j i + (1 - j) n / 2 (mod n).
  const std::size_t shift = (static_cast<std::size_t>(j - 1) * (n / 2)) % n;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t k = (static_cast<std::size_t>(j) * i + n - shift) % n;
    values[i] = f[k];
  }
  return TorusField(grid, std::move(values));
}

SteadyCatalog build_catalog(double kappa, const TorusGrid& grid) {
  if (!(kappa > 0.0 && kappa < 1.0)) {
    std::ostringstream msg;
    msg << "catalog requires kappa in (0, 1), got " << kappa;
    throw Error(ErrorKind::Domain, msg.str());
  }
  SteadyCatalog cat;
  cat.kappa = kappa;
  cat.m = count_states(kappa);

  // Replica j has transition layers of width ~ sqrt2 kappa regardless of j.
  const double kmin = ground::min_resolvable_kappa(grid.size());
  for (int j = 1; j <= cat.m; ++j) {
    if (kappa < kmin) {
      std::ostringstream msg;
      msg << "replica j=" << j << " (kappa=" << kappa << ") is not resolved on " << grid.size()
          << " points; minimum kappa is " << kmin;
      throw Error(ErrorKind::Resolution, msg.str());
    }
  }

  std::vector<std::optional<Replica>> slots(static_cast<std::size_t>(cat.m));
  parallel_for(slots.size(), [&](std::size_t idx) {
    const int j = static_cast<int>(idx) + 1;
    const ground::GroundState gs = ground::build_ground_state(j * kappa, grid);
    TorusField field = j == 1 ? gs.field() : compress(gs.field(), j);
    Replica r{j, field, ground::energy(field, kappa), 2.0 * pi / j, ground::pde_residual(field, kappa)};
    if (!(r.residual < ground::kResidualThreshold)) {
      std::ostringstream msg;
      msg << "replica j=" << j << " has PDE residual " << r.residual;
      throw Error(ErrorKind::Resolution, msg.str());
    }
    slots[idx] = std::move(r);
  });
  for (auto& s : slots) cat.replicas.push_back(std::move(*s));
  return cat;
}

std::string_view to_string(OrbitKind kind) noexcept {
  switch (kind) {
    case OrbitKind::Unbounded: return "unbounded";
    case OrbitKind::HeteroclinicOrConstant: return "heteroclinic_or_constant";
    case OrbitKind::Periodic: return "periodic";
    case OrbitKind::Zero: return "zero";
  }
  return "unknown";
}

double conserved_quantity(double u, double v, double kappa) {
  const double u2 = u * u;
  return kappa * kappa * v * v + u2 - 0.5 * u2 * u2;
}

OrbitClass classify_orbit(double u0, double v0, double kappa) {
  require(kappa > 0.0, ErrorKind::Domain, "kappa must be positive");
  OrbitClass oc;
  const double C = conserved_quantity(u0, v0, kappa);
  oc.C = C;
  const double to_zero = std::abs(C), to_half = std::abs(C - 0.5);
  oc.near_boundary = (to_zero > kBoundaryTolerance && to_zero <= kNearBoundaryBand) ||
                     (to_half > kBoundaryTolerance && to_half <= kNearBoundaryBand);
  const double au = std::abs(u0);

  if (to_zero <= kBoundaryTolerance) {
    // C = 0 inside the well forces (u, v) = (0, 0); outside it is the |u| >= sqrt2 branch.
    oc.kind = au < 1.0 ? OrbitKind::Zero : OrbitKind::Unbounded;
    return oc;
  }
  if (to_half <= kBoundaryTolerance) {
    oc.kind = au <= 1.0 ? OrbitKind::HeteroclinicOrConstant : OrbitKind::Unbounded;
    return oc;
  }
  if (C < 0.0 || C > 0.5) {
    oc.kind = OrbitKind::Unbounded;
    return oc;
  }
  const double root = std::sqrt(1.0 - 2.0 * C);
  const double amplitude = std::sqrt(1.0 - root);
  if (au > amplitude * (1.0 + 1e-12) && au > 1.0) {
    oc.kind = OrbitKind::Unbounded;  // outer branch, |u| >= sqrt(1 + sqrt(1 - 2C))
    return oc;
  }
  oc.kind = OrbitKind::Periodic;
  oc.amplitude = amplitude;
  oc.period = minimal_period(C, kappa);
  return oc;
}

double minimal_period(double C, double kappa) {
  if (!(C > 0.0 && C < 0.5) || !(kappa > 0.0)) {
    std::ostringstream msg;
    msg << "minimal period needs 0 < C < 1/2 and kappa > 0, got C=" << C << ", kappa=" << kappa;
    throw Error(ErrorKind::Domain, msg.str());
  }
  // q = 1 - N^2 = sqrt(1 - 2C) directly, without forming N.
  return 4.0 * std::numbers::sqrt2 * kappa * ground::eval_g_complement(std::sqrt(1.0 - 2.0 * C));
}

double spectral_gap(const TorusField& background, double kappa, std::size_t modes) {
  require(modes >= 1, ErrorKind::Domain, "mode cutoff must be positive");
  const auto spec = numerics::sine_transform(background);
  // Cosine coefficients up to 2*modes must be unaliased: resample on a grid
  // with Nyquist >= 2*modes (exact for the band-limited background).
  const std::size_t n = std::max(background.size(), next_power_of_two(4 * modes + 4));
  std::vector<double> u(n);
  numerics::sine_synthesis(spec.coeffs(), u);
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = 3.0 * u[i] * u[i] - 1.0;
  std::vector<double> a(2 * modes + 1);
  numerics::cosine_analysis(w, a);

  // int w sin(mx) sin(m'x) dx = (pi/2)(a_|m-m'| - a_{m+m'}); Gram matrix is pi * I.
  Eigen::MatrixXd Q(modes, modes);
  for (std::size_t i = 0; i < modes; ++i) {
    for (std::size_t k = 0; k < modes; ++k) {
      const std::size_t m = i + 1, mp = k + 1;
      const std::size_t diff = m > mp ? m - mp : mp - m;
      Q(i, k) = 0.5 * (a[diff] - a[m + mp]);
      if (i == k) Q(i, k) += kappa * kappa * static_cast<double>(m * m);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(Q, Eigen::EigenvaluesOnly);
  require(solver.info() == Eigen::Success, ErrorKind::ConstructionFailure, "eigen-solver failed");
  return solver.eigenvalues()(0);
}

double spectral_gap(const ground::GroundState& gs, std::size_t modes) {
  require(modes >= 64, ErrorKind::Domain, "spectral gap needs at least 64 modes");
  return spectral_gap(gs.field(), gs.kappa(), modes);
}

BasinVerdict basin_criterion(const TorusField& u0, double kappa) {
  if (u0.oddness_defect() > numerics::kSymmetryTolerance) {
    throw Error(ErrorKind::SymmetryViolation, "initial datum must be odd for the basin criterion");
  }
  require(kappa > 0.0, ErrorKind::Domain, "kappa must be positive");
  BasinVerdict v;
  v.energy = ground::energy(u0, kappa);
  if (kappa >= 0.5) {
    v.note = "criterion not applicable: 2*kappa >= 1";
    return v;
  }
  v.applicable = true;
  std::size_t n = u0.size();
  while (2.0 * kappa < ground::min_resolvable_kappa(n)) n *= 2;
  v.threshold = ground::build_ground_state(2.0 * kappa, TorusGrid(n)).energy();
  v.below_threshold = v.energy < v.threshold;
  v.note = v.below_threshold ? "E(u0) < E0(2 kappa): converges to +-U_kappa" : "E(u0) >= E0(2 kappa): criterion inconclusive";
  return v;
}

}  // namespace aclab::steady
