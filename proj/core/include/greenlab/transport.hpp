#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "greenlab/geometry.hpp"
#include "greenlab/sinkhorn.hpp"

namespace greenlab {

enum class TransportMethod { CircleExact, NetworkFlow, Sinkhorn };

std::string method_name(TransportMethod method);
TransportMethod parse_method(const std::string& name);

struct PlanEntry {
  std::size_t row = 0;
  std::size_t col = 0;
  double mass = 0.0;
};

/// Wasserstein value with the information needed to trust it.
struct W2Estimate {
  int p = 2;
  double value = 0.0;
  // Additive bound on |value - W_p(μ, ν)| where ν is the continuous target
  // (discretization) plus the solver gap.
  double error_bound = 0.0;
  TransportMethod method = TransportMethod::NetworkFlow;
  std::size_t M = 0;        // number of target nodes (0 for circle-exact)
  double epsilon = 0.0;     // final entropic regularization (Sinkhorn only)
  std::size_t iterations = 0;  // pivots or Sinkhorn sweeps
  // Sinkhorn divergence S_ε^{1/2}, when debiasing was requested.
  std::optional<double> debiased;
  // Sparse coupling, filled only when TransportOptions::keep_plan is set.
  std::vector<PlanEntry> plan;
};

struct TransportOptions {
  TransportMethod method = TransportMethod::NetworkFlow;
  SinkhornOptions sinkhorn{};
  bool debias = false;
  bool keep_plan = false;
};

/// Exact W_p (p = 1 or 2) between the empirical measure of a T^1
/// configuration and the uniform measure.
W2Estimate w_p_circle_exact(const PointConfiguration& config, int p);

/// W_2 between the empirical measure and the volume measure, with the target
/// replaced by an equal-weight quadrature of about M nodes.
W2Estimate w2_semidiscrete(const PointConfiguration& config, std::size_t M, const TransportOptions& options = {});

/// Exact W_2 between the empirical measure of `a` and the weighted point list
/// (b, weights). Weights must be nonnegative and sum to 1 within 1e-12.
W2Estimate w2_empirical_pair(const PointConfiguration& a, const PointConfiguration& b,
                             std::span<const double> weights);

/// Exact W_2 between two weighted point lists on the same manifold.
W2Estimate w2_discrete(const PointConfiguration& a, std::span<const double> wa, const PointConfiguration& b,
                       std::span<const double> wb);

/// Discrepancy over all arcs of the circle, sup_I |μ(I) - |I||, computed
/// from the sorted points.
double star_discrepancy_t1(const PointConfiguration& config);

/// Squared geodesic distance matrix (rows = a, columns = b), row-major.
std::vector<double> squared_distance_matrix(const PointConfiguration& a, const PointConfiguration& b);

}  // namespace greenlab
