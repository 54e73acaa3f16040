#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <tuple>
#include <vector>

namespace greenlab {

/// Exact balanced transportation problem
///
///   minimize Σ_ij f_ij C_ij  subject to  Σ_j f_ij = supply_i,  Σ_i f_ij = demand_j,  f >= 0,
///
/// over the complete bipartite graph, solved by the primal network simplex
/// method with block-search pivoting. Supplies are integers; costs are a
/// dense row-major matrix.
class TransportSimplex {
 public:
  struct Result {
    double cost = 0.0;  // Σ f_ij C_ij
    std::uint64_t pivots = 0;
    // Nonzero flows (row, column, amount).
    std::vector<std::tuple<std::size_t, std::size_t, std::int64_t>> plan;
  };

  TransportSimplex(std::span<const std::int64_t> supply, std::span<const std::int64_t> demand,
                   std::span<const double> cost);

  Result solve(bool keep_plan = false);

  /// Dual potentials (u for rows, v for columns) at the optimum, such that
  /// C_ij - u_i - v_j >= 0 with equality on the support.
  std::vector<double> row_potentials() const;
  std::vector<double> column_potentials() const;

 private:
  enum State : int { kLower = 1, kTree = 0 };
  static constexpr int kUp = 1;
  static constexpr int kDown = -1;

  int source(std::size_t e) const;
  int target(std::size_t e) const;

  bool find_entering_arc();
  void find_join_node();
  bool find_leaving_arc();
  void change_flow();
  void update_tree_structure();
  void update_potential();

  std::size_t rows_, cols_, nodes_, arcs_;
  std::span<const double> cost_;
  double art_cost_ = 0.0;
  double epsilon_ = 0.0;

  std::vector<std::int64_t> supply_;
  std::vector<std::int64_t> flow_;
  std::vector<signed char> state_;
  // Artificial arc endpoints (index e - arcs_).
  std::vector<int> art_source_, art_target_;

  std::vector<int> parent_, pred_, thread_, rev_thread_, succ_num_, last_succ_, dirty_revs_;
  std::vector<signed char> pred_dir_;
  std::vector<double> pi_;

  std::size_t block_size_ = 0, next_arc_ = 0;
  std::size_t in_arc_ = 0;
  int join_ = 0, u_in_ = 0, v_in_ = 0, u_out_ = 0, v_out_ = 0;
  std::int64_t delta_ = 0;
  int root_ = 0;
};

}  // namespace greenlab
