#include <gtest/gtest.h>

#include <cstdint>
#include <limits>
#include <numeric>
#include <random>

#include "greenlab/error.hpp"
#include "greenlab/network_simplex.hpp"

using namespace greenlab;

namespace {

// Successive shortest paths with Bellman-Ford on the residual graph.
double min_cost_flow_oracle(const std::vector<std::int64_t>& supply, const std::vector<std::int64_t>& demand,
                            const std::vector<double>& cost) {
  const int r = static_cast<int>(supply.size()), c = static_cast<int>(demand.size());
  const int src = r + c, snk = r + c + 1, nodes = r + c + 2;
  struct Arc {
    int to;
    std::int64_t cap;
    double cost;
    int rev;
  };
  std::vector<std::vector<Arc>> g(nodes);
  auto add = [&](int u, int v, std::int64_t cap, double w) {
    g[u].push_back({v, cap, w, static_cast<int>(g[v].size())});
    g[v].push_back({u, 0, -w, static_cast<int>(g[u].size()) - 1});
  };
  for (int i = 0; i < r; ++i) add(src, i, supply[i], 0.0);
  for (int j = 0; j < c; ++j) add(r + j, snk, demand[j], 0.0);
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < c; ++j) add(i, r + j, std::numeric_limits<std::int64_t>::max() / 4, cost[i * c + j]);
  }
  double total = 0.0;
  for (;;) {
    std::vector<double> dist(nodes, std::numeric_limits<double>::infinity());
    std::vector<int> pv(nodes, -1), pe(nodes, -1);
    dist[src] = 0.0;
    for (int round = 0; round < nodes; ++round) {
      bool changed = false;
      for (int u = 0; u < nodes; ++u) {
        if (dist[u] == std::numeric_limits<double>::infinity()) continue;
        for (int e = 0; e < static_cast<int>(g[u].size()); ++e) {
          const Arc& a = g[u][e];
          if (a.cap > 0 && dist[u] + a.cost < dist[a.to] - 1e-12) {
            dist[a.to] = dist[u] + a.cost;
            pv[a.to] = u;
            pe[a.to] = e;
            changed = true;
          }
        }
      }
      if (!changed) break;
    }
    if (pv[snk] < 0) break;
    std::int64_t push = std::numeric_limits<std::int64_t>::max();
    for (int v = snk; v != src; v = pv[v]) push = std::min(push, g[pv[v]][pe[v]].cap);
    for (int v = snk; v != src; v = pv[v]) {
      Arc& a = g[pv[v]][pe[v]];
      a.cap -= push;
      g[v][a.rev].cap += push;
      total += push * a.cost;
    }
  }
  return total;
}

struct Problem {
  std::vector<std::int64_t> supply, demand;
  std::vector<double> cost;
};

Problem random_problem(std::mt19937_64& rng, int r, int c, int mass) {
  Problem p;
  std::uniform_int_distribution<int> pick_r(0, r - 1), pick_c(0, c - 1);
  std::uniform_real_distribution<double> w(0.0, 1.0);
  p.supply.assign(r, 0);
  p.demand.assign(c, 0);
  for (int k = 0; k < mass; ++k) {
    ++p.supply[pick_r(rng)];
    ++p.demand[pick_c(rng)];
  }
  p.cost.resize(static_cast<std::size_t>(r) * c);
  for (double& x : p.cost) x = w(rng);
  return p;
}

}  // namespace

TEST(NetworkSimplex, MatchesShortestPathOracle) {
  std::mt19937_64 rng(2718);
  for (int rep = 0; rep < 60; ++rep) {
    const int r = 1 + rep % 7, c = 1 + (rep * 3) % 9;
    const Problem p = random_problem(rng, r, c, 5 + rep);
    TransportSimplex solver(p.supply, p.demand, p.cost);
    const auto result = solver.solve(true);
    EXPECT_NEAR(result.cost, min_cost_flow_oracle(p.supply, p.demand, p.cost), 1e-9) << rep;

    std::vector<std::int64_t> rows(r, 0), cols(c, 0);
    double plan_cost = 0.0;
    for (const auto& [i, j, f] : result.plan) {
      EXPECT_GT(f, 0);
      rows[i] += f;
      cols[j] += f;
      plan_cost += f * p.cost[i * c + j];
    }
    EXPECT_EQ(rows, p.supply);
    EXPECT_EQ(cols, p.demand);
    EXPECT_NEAR(plan_cost, result.cost, 1e-9);
  }
}

TEST(NetworkSimplex, PotentialsCertifyOptimality) {
  std::mt19937_64 rng(31);
  const int r = 12, c = 20;
  const Problem p = random_problem(rng, r, c, 400);
  TransportSimplex solver(p.supply, p.demand, p.cost);
  const auto result = solver.solve(true);
  const auto u = solver.row_potentials();
  const auto v = solver.column_potentials();
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < c; ++j) EXPECT_GE(p.cost[i * c + j] - u[i] - v[j], -1e-9);
  }
  double dual = 0.0;
  for (int i = 0; i < r; ++i) dual += p.supply[i] * u[i];
  for (int j = 0; j < c; ++j) dual += p.demand[j] * v[j];
  EXPECT_NEAR(dual, result.cost, 1e-8);
}

TEST(NetworkSimplex, AssignmentMatchesPermutationSearch) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> w(0.0, 1.0);
  const int n = 7;
  std::vector<double> cost(n * n);
  for (double& x : cost) x = w(rng);
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += cost[i * n + perm[i]];
    best = std::min(best, s);
  } while (std::next_permutation(perm.begin(), perm.end()));
  const std::vector<std::int64_t> ones(n, 1);
  EXPECT_NEAR(TransportSimplex(ones, ones, cost).solve().cost, best, 1e-12);
}

TEST(NetworkSimplex, RejectsInvalidProblems) {
  const std::vector<std::int64_t> s{1, 2}, d{3}, bad{2};
  const std::vector<double> cost{0.5, 0.5};
  EXPECT_THROW(TransportSimplex(s, bad, cost), InvalidInput);
  EXPECT_THROW(TransportSimplex(s, d, std::vector<double>{0.5}), InvalidInput);
  EXPECT_THROW(TransportSimplex(std::vector<std::int64_t>{-1, 4}, d, cost), InvalidInput);
  EXPECT_THROW(TransportSimplex(s, d, std::vector<double>{0.5, std::numeric_limits<double>::infinity()}), InvalidInput);
}
