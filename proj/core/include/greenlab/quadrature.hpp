#pragma once

#include <cstddef>
#include <vector>

#include "greenlab/geometry.hpp"

namespace greenlab {

/// Equal-weight discretization of the normalized volume measure of a manifold.
struct QuadratureRule {
  PointConfiguration nodes;
  std::vector<double> weights;
  // Upper bound on W2(volume measure, discretization). Exact on the torus;
  // on the sphere it is a probed covering radius (see sphere_quadrature).
  double w2_bound = 0.0;
  // Largest distance from a point of the manifold to its nearest node.
  double mesh_radius = 0.0;
};

/// m^d cell centers with equal weights.
QuadratureRule torus_quadrature(int m, int d);

/// M near-uniform nodes on S^2 (Fibonacci spiral) or S^3 (Hopf coordinates
/// with a Kronecker sequence in the two fiber angles). Other dimensions throw.
/// The mesh radius is estimated by probing with a dense deterministic sample
/// and inflated by a 5% safety margin.
QuadratureRule sphere_quadrature(int d, std::size_t M);

/// Torus rule with roughly M nodes (m = round(M^{1/d})), or a sphere rule with
/// exactly M nodes.
QuadratureRule uniform_quadrature(const Manifold& manifold, std::size_t M);

}  // namespace greenlab
