#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "greenlab/geometry.hpp"

namespace greenlab {

/// Truncated frequency content of an empirical measure μ = (1/n) Σ δ_{x_j}.
///
/// Torus: raw coefficients μ̂(k) = (1/n) Σ_j exp(-2πi k·x_j) for every k in
/// the cube 0 < |k|_∞ <= K (flattened, lexicographic, d entries per mode).
/// Sphere: degree powers p_l for 1 <= l <= L.
///
/// The heat multiplier exp(-λt) is not folded into the stored numbers; the
/// norms apply it.
struct SpectralMeasure {
  Manifold manifold = Manifold::torus(1);
  int truncation = 0;
  double heat_time = 0.0;
  std::size_t n = 0;
  std::vector<int> modes;
  std::vector<std::complex<double>> coefficients;
  std::vector<double> degree_powers;  // index l-1
  /// Upper bound on the omitted contribution to the squared Ḣ⁻¹ norm of the
  /// heat-smoothed measure (infinite when no finite bound exists).
  double tail_bound = 0.0;
  /// Contribution of the omitted modes that is known exactly (the self-pair
  /// part on T^1) and already added into hminus1_norm's value.
  double exact_tail = 0.0;
};

SpectralMeasure spectral_measure(const PointConfiguration& config, int truncation, double heat_time);

struct NormEstimate {
  double value = 0.0;       // ‖·‖ (square root of squared)
  double squared = 0.0;     // truncated sum plus exact tail
  double tail_bound = 0.0;  // bound on |true squared - squared|
};

/// Ḣ⁻¹ norm of e^{tΔ}(μ - dx), torus weights 1/(4π²|k|²), sphere 1/λ_l.
NormEstimate hminus1_norm(const SpectralMeasure& sm);

/// Diaphony on T^1 with weights 1/(4π²k²). K = 0 picks the smallest
/// truncation whose tail bound is below 1e-10. value = F_N, squared = F_N².
NormEstimate diaphony_t1(const PointConfiguration& config, int K = 0);

enum class HeatRepresentation { Auto, Images, Fourier };

/// Periodic heat kernel on T^1 at displacement u for time t.
double heat_density_1d(double u, double t, HeatRepresentation rep = HeatRepresentation::Auto);

/// Heat kernel e^{tΔ}δ_center evaluated at x on T^d (product of 1D kernels).
/// Auto switches from images to Fourier at 4πt = 1.
double heat_density_torus(std::span<const double> x, std::span<const double> center, double t,
                          HeatRepresentation rep = HeatRepresentation::Auto);

/// Heat kernel on S^d: Σ_l exp(-λ_l t) N(l,d)/|S^d| P̃_l(τ), τ = <x, y>.
double heat_density_sphere(int d, double tau, double t);

/// Eigenvalue of the Coulomb kernel ‖x-y‖^{-(d-2)} on degree-l harmonics of
/// S^d, normalized by |S^d| so that a_0 equals c_d. Cached.
double funk_hecke_eigenvalue(int d, int l);

/// Eigenvalue l(l+d-1) of -Δ on degree-l harmonics of S^d.
double sphere_laplace_eigenvalue(int d, int l);

struct LaplacianConstant {
  double c1 = 0.0;
  double residual = 0.0;  // max relative deviation of Δf/f from c1
};

/// c_1 in Δ_y ‖x-y‖^{-(d-2)} = c_1 ‖x-y‖^{-(d-2)} away from the diagonal,
/// from finite differences of the polar Laplace-Beltrami operator on a
/// lattice in [π/4, 3π/4]. Throws NumericalFailure if Δf/f is not constant
/// to 1e-6.
LaplacianConstant riesz_laplacian_constant(int d);

/// ∫ e^{2tΔ}δ_{x_l}(y) ‖x_k - y‖^{-(d-2)} dy on S^d for <x_k, x_l> = tau,
/// by the spectral sum Σ_l exp(-2λ_l t) N(l,d) a_l P̃_l(tau). Requires t > 0.
double coulomb_heat_average(int d, double tau, double t);

}  // namespace greenlab
