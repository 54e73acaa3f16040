#include "greenlab/transport.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

#include "greenlab/error.hpp"
#include "greenlab/network_simplex.hpp"
#include "greenlab/parallel.hpp"
#include "greenlab/quadrature.hpp"

namespace greenlab {

namespace {

constexpr std::size_t kMaxNetworkArcs = 10'000'000;
constexpr std::size_t kMaxDebiasSize = 4096;
constexpr std::int64_t kQuantum = std::int64_t{1} << 40;

std::vector<double> sorted_circle_points(const PointConfiguration& config) {
  if (!config.manifold().is_torus() || config.manifold().dim() != 1) {
    throw InvalidInput("expected a configuration on T^1");
  }
  if (config.empty()) throw InvalidInput("expected at least one point");
  std::vector<double> x(config.coords().begin(), config.coords().end());
  std::sort(x.begin(), x.end());
  return x;
}

// Offsets of each sorted point from the center of the arc it is assigned to
// by the monotone matching.
std::vector<double> arc_offsets(const std::vector<double>& x) {
  const double n = static_cast<double>(x.size());
  std::vector<double> c(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) c[i] = x[i] - (static_cast<double>(i) + 0.5) / n;
  return c;
}

struct Quantized {
  std::vector<std::int64_t> mass;
  double l1_error = 0.0;
};

bool is_uniform(std::span<const double> w) {
  const double target = 1.0 / static_cast<double>(w.size());
  return std::all_of(w.begin(), w.end(), [&](double v) { return std::abs(v - target) <= 1e-15; });
}

// Integer masses summing to `total`, by largest remainders.
Quantized quantize(std::span<const double> w, std::int64_t total) {
  Quantized q;
  q.mass.resize(w.size());
  std::vector<std::pair<double, std::size_t>> remainder(w.size());
  std::int64_t assigned = 0;
  const auto T = static_cast<long double>(total);
  for (std::size_t i = 0; i < w.size(); ++i) {
    const long double scaled = static_cast<long double>(w[i]) * T;
    const auto whole = static_cast<std::int64_t>(std::floor(scaled));
    q.mass[i] = whole;
    assigned += whole;
    remainder[i] = {static_cast<double>(scaled - static_cast<long double>(whole)), i};
  }
  std::int64_t left = total - assigned;
  std::sort(remainder.begin(), remainder.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  });
  for (std::size_t k = 0; left > 0 && k < remainder.size(); ++k, --left) ++q.mass[remainder[k].second];
  for (std::size_t i = 0; i < w.size(); ++i) {
    q.l1_error += std::abs(static_cast<double>(static_cast<long double>(q.mass[i]) / T) - w[i]);
  }
  return q;
}

void check_weights(std::span<const double> w, std::size_t expected) {
  if (w.size() != expected) throw InvalidInput("weight count does not match the number of points");
  double sum = 0.0;
  for (double v : w) {
    if (!(v >= 0.0)) throw InvalidInput("weights must be nonnegative");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-12) throw InvalidInput("weights must sum to 1");
}

}  // namespace

std::string method_name(TransportMethod method) {
  switch (method) {
    case TransportMethod::CircleExact:
      return "circle-exact";
    case TransportMethod::NetworkFlow:
      return "network-flow";
    case TransportMethod::Sinkhorn:
      return "sinkhorn";
  }
  return "unknown";
}

TransportMethod parse_method(const std::string& name) {
  if (name == "circle-exact") return TransportMethod::CircleExact;
  if (name == "network-flow") return TransportMethod::NetworkFlow;
  if (name == "sinkhorn") return TransportMethod::Sinkhorn;
  throw InvalidInput("unknown transport method '" + name + "'");
}

std::vector<double> squared_distance_matrix(const PointConfiguration& a, const PointConfiguration& b) {
  if (!(a.manifold() == b.manifold())) throw InvalidInput("configurations live on different manifolds");
  const Manifold& m = a.manifold();
  const std::size_t rows = a.size(), cols = b.size();
  std::vector<double> cost(rows * cols);
  parallel::for_each_index(rows, [&](std::size_t i) {
    const auto x = a.point(i);
    for (std::size_t j = 0; j < cols; ++j) {
      const double r = geodesic_distance(m, x, b.point(j));
      cost[i * cols + j] = r * r;
    }
  });
  return cost;
}

W2Estimate w_p_circle_exact(const PointConfiguration& config, int p) {
  if (p != 1 && p != 2) throw InvalidInput("circle-exact supports p = 1 or p = 2");
  const auto x = sorted_circle_points(config);
  const auto c = arc_offsets(x);
  const double n = static_cast<double>(x.size());
  const double h = 1.0 / n;
  W2Estimate est;
  est.p = p;
  est.method = TransportMethod::CircleExact;

  if (p == 2) {
    const double mean = std::accumulate(c.begin(), c.end(), 0.0) / n;
    double var = 0.0;
    for (double ci : c) var += (ci - mean) * (ci - mean);
    var /= n;
    est.value = std::sqrt(var + 1.0 / (12.0 * n * n));
    est.error_bound = 1e-14;
    return est;
  }

  // Cost of sending the mass of one point to an arc of length h centered at
  // distance u, and its derivative in u.
  auto phi = [h](double u) { return std::abs(u) >= 0.5 * h ? h * std::abs(u) : u * u + 0.25 * h * h; };
  auto dphi = [h](double u) { return std::abs(u) >= 0.5 * h ? std::copysign(h, u) : 2.0 * u; };
  double lo = *std::min_element(c.begin(), c.end()) - h;
  double hi = *std::max_element(c.begin(), c.end()) + h;
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double s = 0.5 * (lo + hi);
    double slope = 0.0;
    for (double ci : c) slope -= dphi(ci - s);
    (slope < 0.0 ? lo : hi) = s;
  }
  const double s = 0.5 * (lo + hi);
  double total = 0.0;
  for (double ci : c) total += phi(ci - s);
  est.value = total;
  // |f(s) - f(s*)| <= (Σ |φ'|) |s - s*| <= (hi - lo).
  est.error_bound = std::max(hi - lo, 1e-14);
  est.iterations = 200;
  return est;
}

double star_discrepancy_t1(const PointConfiguration& config) {
  const auto x = sorted_circle_points(config);
  const double n = static_cast<double>(x.size());
  double mx = -1e300, mn = 1e300;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double delta = (static_cast<double>(i) + 1.0) / n - x[i];
    mx = std::max(mx, delta);
    mn = std::min(mn, delta);
  }
  return std::min(1.0, 1.0 / n + mx - mn);
}

W2Estimate w2_discrete(const PointConfiguration& a, std::span<const double> wa, const PointConfiguration& b,
                       std::span<const double> wb) {
  check_weights(wa, a.size());
  check_weights(wb, b.size());
  if (a.empty() || b.empty()) throw InvalidInput("transport needs nonempty measures");
  if (a.size() * b.size() > kMaxNetworkArcs) throw InvalidInput("problem exceeds the network-flow size guard (n*M <= 1e7)");

  const bool ua = is_uniform(wa), ub = is_uniform(wb);
  const auto na = static_cast<std::int64_t>(a.size()), nb = static_cast<std::int64_t>(b.size());
  std::int64_t total = kQuantum;
  if (ua && ub) {
    total = std::lcm(na, nb);
  } else if (ua) {
    total = na * (kQuantum / na);
  } else if (ub) {
    total = nb * (kQuantum / nb);
  }
  const Quantized qa = quantize(wa, total);
  const Quantized qb = quantize(wb, total);

  const auto cost = squared_distance_matrix(a, b);
  TransportSimplex simplex(qa.mass, qb.mass, cost);
  const auto result = simplex.solve(false);

  W2Estimate est;
  est.p = 2;
  est.method = TransportMethod::NetworkFlow;
  est.M = b.size();
  est.iterations = result.pivots;
  est.value = std::sqrt(std::max(0.0, result.cost / static_cast<double>(total)));
  // W2(a, ã) <= diam * sqrt(TV(a, ã)).
  const double diam = a.manifold().diameter();
  est.error_bound = diam * (std::sqrt(0.5 * qa.l1_error) + std::sqrt(0.5 * qb.l1_error));
  return est;
}

W2Estimate w2_empirical_pair(const PointConfiguration& a, const PointConfiguration& b,
                             std::span<const double> weights) {
  std::vector<double> wa(a.size(), a.empty() ? 0.0 : 1.0 / static_cast<double>(a.size()));
  return w2_discrete(a, wa, b, weights);
}

W2Estimate w2_semidiscrete(const PointConfiguration& config, std::size_t M, const TransportOptions& options) {
  if (config.empty()) throw InvalidInput("transport needs at least one point");
  const Manifold& m = config.manifold();
  if (options.method == TransportMethod::CircleExact) {
    if (!m.is_torus() || m.dim() != 1) throw InvalidInput("circle-exact requires T^1");
    return w_p_circle_exact(config, 2);
  }
  const QuadratureRule rule = uniform_quadrature(m, M);
  const std::size_t n = config.size();
  const std::size_t nodes = rule.nodes.size();
  if (nodes < n) throw InvalidInput("quadrature size M must be at least the number of points");
  const std::vector<double> wa(n, 1.0 / static_cast<double>(n));

  if (options.method == TransportMethod::NetworkFlow) {
    if (n * nodes > kMaxNetworkArcs) throw InvalidInput("problem exceeds the network-flow size guard (n*M <= 1e7)");
    const auto na = static_cast<std::int64_t>(n), nb = static_cast<std::int64_t>(nodes);
    const std::int64_t g = std::gcd(na, nb);
    const std::vector<std::int64_t> supply(n, nb / g);
    const std::vector<std::int64_t> demand(nodes, na / g);
    const auto cost = squared_distance_matrix(config, rule.nodes);
    TransportSimplex simplex(supply, demand, cost);
    const auto result = simplex.solve(options.keep_plan);
    const double total = static_cast<double>(na / g * nb);

    W2Estimate est;
    est.p = 2;
    est.method = TransportMethod::NetworkFlow;
    est.M = nodes;
    est.iterations = result.pivots;
    est.value = std::sqrt(std::max(0.0, result.cost / total));
    est.error_bound = rule.w2_bound;
    if (options.keep_plan) {
      est.plan.reserve(result.plan.size());
      for (const auto& [i, j, f] : result.plan) est.plan.push_back({i, j, static_cast<double>(f) / total});
    }
    return est;
  }

  const auto cost = squared_distance_matrix(config, rule.nodes);
  const SinkhornResult res = sinkhorn(wa, rule.weights, cost, options.sinkhorn);
  W2Estimate est;
  est.p = 2;
  est.method = TransportMethod::Sinkhorn;
  est.M = nodes;
  est.epsilon = res.epsilon;
  est.iterations = res.iterations;
  est.value = std::sqrt(std::max(0.0, res.primal));
  est.error_bound = est.value - std::sqrt(std::max(0.0, res.dual)) + rule.w2_bound;
  if (options.debias) {
    if (nodes > kMaxDebiasSize) throw InvalidInput("debiasing is limited to M <= 4096 nodes");
    const auto caa = squared_distance_matrix(config, config);
    const auto cbb = squared_distance_matrix(rule.nodes, rule.nodes);
    const double saa = sinkhorn_self_cost(wa, caa, res.epsilon);
    const double sbb = sinkhorn_self_cost(rule.weights, cbb, res.epsilon);
    est.debiased = std::sqrt(std::max(0.0, res.regularized - 0.5 * saa - 0.5 * sbb));
  }
  return est;
}

}  // namespace greenlab
