#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>

#include "greenlab/geometry.hpp"

namespace greenlab {

enum class KernelKind { GreenTorus1, GreenTorusSpectral, GreenSphere2, CoulombSphere, LogSphere2, Riesz };

enum class Normalization { Raw, MeanZero };

/// Which pair interaction is in force and on which manifold it lives.
struct KernelSpec {
  KernelKind kind = KernelKind::GreenTorus1;
  int dim = 1;            // intrinsic dimension of the underlying manifold
  int truncation = 0;     // K (torus spectral) or L (sphere Green); 0 selects the default
  double split_time = 0;  // heat-split time T for the torus spectral Green; 0 selects 1/(2π²)
  double exponent = 0;    // Riesz exponent s
  Normalization normalization = Normalization::Raw;

  static KernelSpec green_t1();
  static KernelSpec green_torus(int d, int K = 0, double T = 0.0);
  static KernelSpec green_sphere2(int L = 0);
  static KernelSpec coulomb(int d, Normalization norm = Normalization::Raw);
  static KernelSpec log_sphere2(Normalization norm = Normalization::Raw);
  static KernelSpec riesz(int d, double s, Normalization norm = Normalization::Raw);

  Manifold manifold() const;
  /// Infinite on the diagonal; coincident points are then an error.
  bool singular() const;
  /// e.g. "green_torus(d=3)", "coulomb(d=3,mean-zero)".
  std::string name() const;
  /// Throws InvalidInput for impossible combinations.
  void validate() const;

  bool operator==(const KernelSpec&) const = default;
};

inline constexpr int kDefaultSphereGreenDegree = 2000;

// --- closed forms and constants -------------------------------------------

/// u²/2 - u/2 + 1/12 on u ∈ [0, 1].
double green_t1(double u);

/// Torus Green function on T^d at displacement z (heat-split evaluation).
double green_torus_spectral(std::span<const double> z, int d, int K = 0, double T = 0.0);

/// Mean-zero Green function of S² via its Legendre series through degree L,
/// with the last retained term weighted by 1/2.
double green_sphere2(std::span<const double> x, std::span<const double> y, int L = kDefaultSphereGreenDegree);
/// Same series as a function of t = <x, y>; also returns dG/dt when asked.
double green_sphere2_profile(double t, int L, double* derivative = nullptr);

/// ‖x - y‖^{-(d-2)} on S^d, d >= 3.
double coulomb_sphere(std::span<const double> x, std::span<const double> y, int d);

/// Average of the Coulomb kernel over S^d × S^d, by quadrature in the polar
/// angle. Cached per d.
double cd_constant(int d);

/// Average of ‖x - y‖^{-s} over S^d × S^d (requires 0 < s < d).
double riesz_mean(int d, double s);

/// Average of -ln‖x - y‖ over S² × S², equal to 1/2 - ln 2.
double log_sphere2_mean();

// --- evaluator --------------------------------------------------------------

class TorusGreen;

/// Kernel evaluator with precomputed tables; cheap to copy.
class Kernel {
 public:
  explicit Kernel(const KernelSpec& spec);

  const KernelSpec& spec() const noexcept { return spec_; }
  const Manifold& manifold() const noexcept { return manifold_; }
  /// Constant subtracted from the raw kernel (0 when raw or already mean-zero).
  double offset() const noexcept { return offset_; }

  /// Throws Singularity (without indices) on coincident points.
  double value(std::span<const double> a, std::span<const double> b) const;
  /// Value and ambient gradient with respect to a (not projected).
  double value_and_gradient(std::span<const double> a, std::span<const double> b, std::span<double> grad) const;

 private:
  KernelSpec spec_;
  Manifold manifold_;
  double offset_ = 0.0;
  int degree_ = 0;
  std::shared_ptr<const TorusGreen> green_;
};

// --- energies ---------------------------------------------------------------

struct EnergyReport {
  KernelSpec kernel;
  std::size_t n = 0;
  double total = 0.0;       // Σ_{k≠l} K(x_k, x_l) over ordered pairs
  double normalized = 0.0;  // total / n²
  double min_separation = 0.0;
};

/// Ordered-pair energy. Coincident points with a singular kernel raise a
/// Singularity naming both indices. The sum is assembled from per-point
/// partials in index order, so it does not depend on the thread count.
EnergyReport pair_energy(const PointConfiguration& config, const KernelSpec& kernel);

/// Minimum pairwise geodesic distance, or the manifold diameter when n < 2.
double min_pair_distance(const PointConfiguration& config);

}  // namespace greenlab
