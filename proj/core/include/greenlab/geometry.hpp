#pragma once

// Ambient spaces (flat unit torus, unit sphere), point configurations on
// them, distances, point generators and the tangent-space primitives used by
// the optimizer.
//
// Conventions:
//  * The torus T^d is the unit cell [0,1)^d with volume 1.
//  * The sphere S^d is stored in ambient coordinates R^{d+1}.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace greenlab {

enum class ManifoldKind { FlatTorus, Sphere };

/// Surface area |S^d| of the unit sphere in R^{d+1}.
double sphere_area(int d);

class Manifold {
 public:
  static Manifold torus(int dim);
  static Manifold sphere(int dim);

  ManifoldKind kind() const noexcept { return kind_; }
  int dim() const noexcept { return dim_; }
  double volume() const noexcept { return volume_; }
  bool is_torus() const noexcept { return kind_ == ManifoldKind::FlatTorus; }
  bool is_sphere() const noexcept { return kind_ == ManifoldKind::Sphere; }

  // Number of stored coordinates per point: d on the torus, d+1 on the sphere.
  int ambient_dim() const noexcept { return is_torus() ? dim_ : dim_ + 1; }

  // Largest geodesic distance between two points.
  double diameter() const noexcept;

  // "torus" or "sphere".
  std::string kind_name() const;
  // e.g. "T^3", "S^2".
  std::string label() const;

  bool operator==(const Manifold&) const = default;

 private:
  Manifold(ManifoldKind kind, int dim, double volume)
      : kind_(kind), dim_(dim), volume_(volume) {}

  ManifoldKind kind_;
  int dim_;
  double volume_;
};

/// Immutable ordered list of points on a manifold.
///
/// Torus coordinates are wrapped into [0,1) on construction. Sphere points
/// within 1e-6 of unit norm are renormalized; anything further away is
/// rejected with InvalidInput.
class PointConfiguration {
 public:
  explicit PointConfiguration(Manifold manifold);
  PointConfiguration(Manifold manifold, std::vector<double> coords);

  const Manifold& manifold() const noexcept { return manifold_; }
  std::size_t size() const noexcept { return coords_.size() / stride(); }
  bool empty() const noexcept { return coords_.empty(); }
  std::size_t stride() const noexcept { return static_cast<std::size_t>(manifold_.ambient_dim()); }

  std::span<const double> point(std::size_t i) const {
    return {coords_.data() + i * stride(), stride()};
  }
  std::span<const double> coords() const noexcept { return coords_; }

 private:
  Manifold manifold_;
  std::vector<double> coords_;
};

// --- distances -------------------------------------------------------------

/// Flat geodesic distance on the unit torus (per-axis wrap, Euclidean norm).
double torus_distance(std::span<const double> a, std::span<const double> b);

enum class SphereMetric { Chordal, Geodesic };

double sphere_distance(std::span<const double> a, std::span<const double> b, SphereMetric metric);

/// Geodesic distance on the given manifold (no validation beyond sizes).
double geodesic_distance(const Manifold& m, std::span<const double> a, std::span<const double> b);

/// Wrapped per-axis displacement a - b on the torus, each component in [-1/2, 1/2].
void torus_displacement(std::span<const double> a, std::span<const double> b, std::span<double> out);

// --- generators ------------------------------------------------------------

/// n independent uniform points; deterministic in (manifold, n, seed).
PointConfiguration uniform_sample(const Manifold& m, std::size_t n, std::uint64_t seed);

/// Cell centers ((2i-1)/(2m), ...) of the m^d cube partition of T^d.
PointConfiguration grid_torus(int m, int d);

/// n points uniform in a geodesic ball of the given radius around a random
/// center (torus: Euclidean ball, wrapped; sphere: cap sampled via tangent ball).
PointConfiguration cluster_sample(const Manifold& m, std::size_t n, double radius, std::uint64_t seed);

struct Kronecker {
  double alpha;
};
struct VanDerCorput {
  int base = 2;
};
using LowDiscrepancy = std::variant<Kronecker, VanDerCorput>;

/// Points x_1..x_n on T^1: frac(k*alpha) or the radical inverse of k.
PointConfiguration lowdisc_sequence(const LowDiscrepancy& kind, std::size_t n);

/// Radical inverse of k in the given base.
double radical_inverse(std::uint64_t k, int base);

// --- tangent primitives ----------------------------------------------------

/// v - <v,x> x for a unit vector x.
std::vector<double> tangent_project(std::span<const double> x, std::span<const double> v);

/// Applies a rotation (row-major (d+1)x(d+1) matrix) to every sphere point.
PointConfiguration rotate(const PointConfiguration& config, std::span<const double> rotation);

/// Adds a common offset (mod 1) to every torus point.
PointConfiguration translate(const PointConfiguration& config, std::span<const double> offset);

/// Random rotation of R^{dim} from QR of a Gaussian matrix, row-major.
std::vector<double> random_rotation(int dim, std::uint64_t seed);

// --- CSV -------------------------------------------------------------------
//
// One point per row, decimal coordinates separated by ',', preceded by the
// header line `# manifold=<kind> dim=<d> n=<n>`. Other '#' lines are ignored.

void write_csv(std::ostream& out, const PointConfiguration& config);
PointConfiguration read_csv(std::istream& in);

}  // namespace greenlab
