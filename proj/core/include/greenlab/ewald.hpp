#pragma once

#include <span>
#include <vector>

#include "greenlab/geometry.hpp"

namespace greenlab {

/// Mean-zero Green function of -Δ on the unit torus T^d,
///
///   G(z) = Σ_{k≠0} e^{2πik·z} / (4π²|k|²),
///
/// evaluated by splitting the heat integral at time T: the short-time part
/// ∫_0^T (Θ_t(z) - 1) dt is a Gaussian image sum in closed form (incomplete
/// gamma functions), the long-time part is a Fourier series damped by
/// exp(-4π²|k|²T) and truncated to the ball |k| <= K.
class TorusGreen {
 public:
  static constexpr double kDefaultTolerance = 1e-10;

  /// K = 0 picks the smallest ball radius whose Fourier tail bound is below
  /// kDefaultTolerance; T = 0 uses 1/(2π²).
  explicit TorusGreen(int d, int K = 0, double T = 0.0);

  int dim() const noexcept { return d_; }
  int truncation() const noexcept { return K_; }
  double split_time() const noexcept { return T_; }
  /// Bound on the omitted Fourier modes, uniform in z.
  double tail_bound() const noexcept { return tail_; }

  /// Throws Singularity at z = 0 (mod 1) for d >= 2.
  double value(std::span<const double> z) const;
  /// Value and gradient with respect to z.
  double value_and_gradient(std::span<const double> z, std::span<double> grad) const;

  /// Short-time (image-sum) part only, excluding the -T constant.
  double image_part(std::span<const double> z, std::span<double> grad) const;
  /// Damped Fourier part only.
  double fourier_part(std::span<const double> z, std::span<double> grad) const;

  /// Σ_{k≠0} e^{-8π²|k|²t} cos(2πk·z) / (4π²|k|²), finite at z = 0.
  double smoothed_value(std::span<const double> z, double t) const;

  /// Rigorous bound on Σ_{|k|>K} exp(-a|k|²)/(4π²|k|²) over Z^d.
  static double fourier_tail(int d, double a, double K);
  static int default_truncation(int d, double T, double tol = kDefaultTolerance);

 private:
  int d_;
  int K_;
  double T_;
  double tail_;
  double image_radius2_;
  // Half-space modes (first nonzero component positive), flattened d-tuples,
  // and their doubled coefficients.
  std::vector<int> modes_;
  std::vector<double> coeff_;
  std::vector<int> images_;
};

/// ∫_0^T (4πt)^{-d/2} exp(-r²/(4t)) dt and its r-derivative.
double heat_split_profile(int d, double r, double T, double* derivative = nullptr);

/// Heat-smoothed Green function Σ_{k≠0} e^{-8π²|k|²t} cos(2πk·z) / (4π²|k|²),
/// finite at z = 0 for every d. Used for the diagonal estimate of the
/// smoothed self-interaction.
double heat_smoothed_green_torus(std::span<const double> z, int d, double t);

/// Ewald summation of Σ_{j≠l} G(x_j - x_l) over a whole torus configuration,
/// with a short real-space cutoff (minimum image only) and structure factors.
class EwaldSum {
 public:
  explicit EwaldSum(int d, double tolerance = 1e-12);

  int dim() const noexcept { return d_; }
  double split_time() const noexcept { return T_; }
  int truncation() const noexcept { return K_; }
  std::size_t mode_count() const noexcept { return mode_count_; }

  double energy(const PointConfiguration& config) const;
  /// Energy and its gradient (n*d entries, point-major).
  double energy_and_gradient(const PointConfiguration& config, std::vector<double>& grad) const;

 private:
  double evaluate(const PointConfiguration& config, std::vector<double>* grad) const;

  int d_;
  double T_;
  double cutoff_;
  int K_;
  std::size_t mode_count_ = 0;
  // Doubled mode coefficient indexed by |k|².
  std::vector<double> coeff_by_norm2_;
};

}  // namespace greenlab
