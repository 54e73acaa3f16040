#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "greenlab/error.hpp"
#include "greenlab/geometry.hpp"
#include "greenlab/kernels.hpp"

namespace greenlab {

struct OptimizerParams {
  std::size_t max_iters = 2000;
  double grad_tol = 1e-8;     // on the Euclidean norm of the stacked Riemannian gradient
  double initial_step = 0.0;  // 0 = 0.1 n^{-1/d} / max_k ‖g_k‖
  double shrink = 0.5;
  double c1 = 1e-4;           // Armijo sufficient-decrease constant
  std::uint64_t seed = 0;
  std::size_t restarts = 4;   // number of descents; the first starts from config0

  void validate() const;
};

struct MinimizationResult {
  PointConfiguration config;
  std::vector<double> energy_history;
  double grad_norm_final = 0.0;
  std::size_t iterations_used = 0;
  bool converged = false;
  double min_separation = 0.0;
  std::size_t restart = 0;  // which descent produced the result
};

/// Raised when the line search cannot find a decrease after 60 consecutive
/// step reductions. Carries the state reached so far.
class StallError : public NumericalFailure {
 public:
  StallError(const std::string& what, double residual, MinimizationResult result)
      : NumericalFailure(what, residual), result_(std::move(result)) {}
  const MinimizationResult& result() const noexcept { return result_; }

 private:
  MinimizationResult result_;
};

/// Energy Σ_{k≠l} K(x_k, x_l) as seen by the optimizer. Torus Green kernels
/// with d >= 2 are evaluated by Ewald summation; everything else pairwise.
double objective_energy(const PointConfiguration& config, const KernelSpec& kernel);

/// Per-point Riemannian gradient of Σ_{k≠l} K(x_k, x_l), point-major with the
/// configuration's stride. Sphere gradients are projected to the tangent space.
std::vector<double> energy_gradient(const PointConfiguration& config, const KernelSpec& kernel);

/// Armijo gradient descent with retraction (wrap on the torus, normalize on
/// the sphere), keeping the best of params.restarts descents.
MinimizationResult minimize(const PointConfiguration& config0, const KernelSpec& kernel,
                            const OptimizerParams& params = {});

/// Minimum pairwise geodesic distance; n < 2 is an error.
double min_separation(const PointConfiguration& config);

struct GradientCheck {
  double max_abs_error = 0.0;
  double max_rel_error = 0.0;  // max_abs_error / max |analytic directional derivative|
};

/// Compares energy_gradient with central differences of objective_energy
/// along every coordinate direction (tangent-projected and retracted on the
/// sphere).
GradientCheck check_gradient(const PointConfiguration& config, const KernelSpec& kernel, double h = 1e-5);

}  // namespace greenlab
