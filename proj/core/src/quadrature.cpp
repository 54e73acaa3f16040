#include "greenlab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "greenlab/error.hpp"
#include "greenlab/parallel.hpp"

namespace greenlab {

namespace {

constexpr double kGolden = 1.6180339887498948482;
constexpr double kPlastic = 1.3247179572447460260;

std::vector<double> fibonacci_s2(std::size_t M, double offset) {
  std::vector<double> c(3 * M);
  for (std::size_t i = 0; i < M; ++i) {
    const double z = 1.0 - (2.0 * (static_cast<double>(i) + 0.5)) / static_cast<double>(M);
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = 2.0 * std::numbers::pi * std::fmod(static_cast<double>(i) / kGolden + offset, 1.0);
    c[3 * i] = r * std::cos(phi);
    c[3 * i + 1] = r * std::sin(phi);
    c[3 * i + 2] = z;
  }
  return c;
}

std::vector<double> hopf_s3(std::size_t M, double offset) {
  std::vector<double> c(4 * M);
  const double a1 = 1.0 / kPlastic, a2 = 1.0 / (kPlastic * kPlastic);
  for (std::size_t i = 0; i < M; ++i) {
    const double u = (static_cast<double>(i) + 0.5) / static_cast<double>(M);
    const double eta = std::asin(std::sqrt(u));
    const double k = static_cast<double>(i) + offset;
    const double x1 = 2.0 * std::numbers::pi * (k * a1 - std::floor(k * a1));
    const double x2 = 2.0 * std::numbers::pi * (k * a2 - std::floor(k * a2));
    c[4 * i] = std::cos(eta) * std::cos(x1);
    c[4 * i + 1] = std::cos(eta) * std::sin(x1);
    c[4 * i + 2] = std::sin(eta) * std::cos(x2);
    c[4 * i + 3] = std::sin(eta) * std::sin(x2);
  }
  return c;
}

double probe_mesh_radius(const PointConfiguration& nodes) {
  const auto& m = nodes.manifold();
  const std::size_t M = nodes.size();
  const std::size_t probes = std::min<std::size_t>(16384, 8 * M);
  // A dense, differently-seeded copy of the same construction plus uniform
  // random probes.
  const int d = m.dim();
  std::vector<double> probe_coords =
      d == 2 ? fibonacci_s2(probes / 2, 0.31830988618) : hopf_s3(probes / 2, 0.5772156649);
  const auto random = uniform_sample(m, probes - probes / 2, 0x5eedULL);
  probe_coords.insert(probe_coords.end(), random.coords().begin(), random.coords().end());
  const PointConfiguration probe(m, std::move(probe_coords));

  std::vector<double> best(probe.size());
  parallel::for_each_index(probe.size(), [&](std::size_t p) {
    const auto x = probe.point(p);
    double max_dot = -2.0;
    for (std::size_t j = 0; j < M; ++j) {
      const auto y = nodes.point(j);
      double dot = 0.0;
      for (std::size_t a = 0; a < x.size(); ++a) dot += x[a] * y[a];
      max_dot = std::max(max_dot, dot);
    }
    best[p] = std::acos(std::clamp(max_dot, -1.0, 1.0));
  });
  return *std::max_element(best.begin(), best.end());
}

}  // namespace

QuadratureRule torus_quadrature(int m, int d) {
  QuadratureRule rule{grid_torus(m, d), {}, 0.0, 0.0};
  rule.weights.assign(rule.nodes.size(), 1.0 / static_cast<double>(rule.nodes.size()));
  // Uniform measure on a cube of side 1/m moved to its center.
  rule.w2_bound = std::sqrt(d / 12.0) / m;
  rule.mesh_radius = 0.5 * std::sqrt(static_cast<double>(d)) / m;
  return rule;
}

QuadratureRule sphere_quadrature(int d, std::size_t M) {
  if (M < 1) throw InvalidInput("quadrature size must be >= 1");
  std::vector<double> coords;
  if (d == 2) {
    coords = fibonacci_s2(M, 0.0);
  } else if (d == 3) {
    coords = hopf_s3(M, 0.0);
  } else {
    throw InvalidInput("sphere quadrature is available for S^2 and S^3 only");
  }
  QuadratureRule rule{PointConfiguration(Manifold::sphere(d), std::move(coords)), {}, 0.0, 0.0};
  rule.weights.assign(M, 1.0 / static_cast<double>(M));
  rule.mesh_radius = 1.05 * probe_mesh_radius(rule.nodes);
  rule.w2_bound = rule.mesh_radius;
  return rule;
}

QuadratureRule uniform_quadrature(const Manifold& manifold, std::size_t M) {
  if (manifold.is_sphere()) return sphere_quadrature(manifold.dim(), M);
  const int m = std::max(1, static_cast<int>(std::lround(std::pow(static_cast<double>(M), 1.0 / manifold.dim()))));
  return torus_quadrature(m, manifold.dim());
}

}  // namespace greenlab
