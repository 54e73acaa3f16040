#include "greenlab/network_simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "greenlab/error.hpp"

namespace greenlab {

namespace {
constexpr std::int64_t kInfFlow = std::numeric_limits<std::int64_t>::max();
}

TransportSimplex::TransportSimplex(std::span<const std::int64_t> supply, std::span<const std::int64_t> demand,
                                   std::span<const double> cost)
    : rows_(supply.size()), cols_(demand.size()), nodes_(rows_ + cols_), arcs_(rows_ * cols_), cost_(cost) {
  if (rows_ == 0 || cols_ == 0) throw InvalidInput("transport problem needs at least one source and one sink");
  if (cost.size() != arcs_) throw InvalidInput("cost matrix has the wrong size");
  if (nodes_ >= static_cast<std::size_t>(std::numeric_limits<int>::max())) throw InvalidInput("transport problem too large");
  std::int64_t sum_s = 0, sum_d = 0;
  for (auto s : supply) {
    if (s < 0) throw InvalidInput("supplies must be nonnegative");
    sum_s += s;
  }
  for (auto d : demand) {
    if (d < 0) throw InvalidInput("demands must be nonnegative");
    sum_d += d;
  }
  if (sum_s != sum_d) throw InvalidInput("total supply and demand differ");

  supply_.resize(nodes_);
  std::copy(supply.begin(), supply.end(), supply_.begin());
  for (std::size_t j = 0; j < cols_; ++j) supply_[rows_ + j] = -demand[j];

  double max_cost = 0.0;
  for (double c : cost) {
    if (!std::isfinite(c)) throw InvalidInput("transport costs must be finite");
    max_cost = std::max(max_cost, std::abs(c));
  }
  art_cost_ = (max_cost + 1.0) * static_cast<double>(nodes_);
  // Potentials reach art_cost_ in magnitude; reduced costs below this are roundoff.
  epsilon_ = std::max(1e-14 * art_cost_, 1e-13 * (max_cost + 1.0));

  const std::size_t all = arcs_ + nodes_;
  flow_.assign(all, 0);
  state_.assign(all, kLower);
  art_source_.resize(nodes_);
  art_target_.resize(nodes_);

  const std::size_t N = nodes_ + 1;
  parent_.assign(N, -1);
  pred_.assign(N, -1);
  thread_.assign(N, 0);
  rev_thread_.assign(N, 0);
  succ_num_.assign(N, 0);
  last_succ_.assign(N, 0);
  pred_dir_.assign(N, 0);
  pi_.assign(N, 0.0);

  // Initial tree: every node hangs off an artificial root.
  root_ = static_cast<int>(nodes_);
  parent_[root_] = -1;
  pred_[root_] = -1;
  thread_[root_] = 0;
  rev_thread_[0] = root_;
  succ_num_[root_] = static_cast<int>(nodes_) + 1;
  last_succ_[root_] = root_ - 1;
  pi_[root_] = 0.0;
  for (int u = 0; u < root_; ++u) {
    const std::size_t e = arcs_ + static_cast<std::size_t>(u);
    parent_[u] = root_;
    pred_[u] = static_cast<int>(e - arcs_);
    thread_[u] = u + 1;
    rev_thread_[u + 1] = u;
    succ_num_[u] = 1;
    last_succ_[u] = u;
    state_[e] = kTree;
    if (supply_[u] >= 0) {
      pred_dir_[u] = kUp;
      pi_[u] = 0.0;
      art_source_[u] = u;
      art_target_[u] = root_;
      flow_[e] = supply_[u];
    } else {
      pred_dir_[u] = kDown;
      pi_[u] = art_cost_;
      art_source_[u] = root_;
      art_target_[u] = u;
      flow_[e] = -supply_[u];
    }
  }

  block_size_ = std::max<std::size_t>(static_cast<std::size_t>(std::sqrt(static_cast<double>(arcs_))), 10);
}

int TransportSimplex::source(std::size_t e) const {
  return e < arcs_ ? static_cast<int>(e / cols_) : art_source_[e - arcs_];
}

int TransportSimplex::target(std::size_t e) const {
  return e < arcs_ ? static_cast<int>(rows_ + e % cols_) : art_target_[e - arcs_];
}

bool TransportSimplex::find_entering_arc() {
  double min = -epsilon_;
  bool found = false;
  std::size_t cnt = block_size_;
  std::size_t e = next_arc_;
  auto scan = [&](std::size_t from, std::size_t to) {
    for (e = from; e != to; ++e) {
      if (state_[e] == kLower) {
        const double c = cost_[e] + pi_[e / cols_] - pi_[rows_ + e % cols_];
        if (c < min) {
          min = c;
          in_arc_ = e;
          found = true;
        }
      }
      if (--cnt == 0) {
        if (found) return true;
        cnt = block_size_;
      }
    }
    return false;
  };
  if (scan(next_arc_, arcs_) || scan(0, next_arc_)) {
    next_arc_ = e + 1 == arcs_ ? 0 : e + 1;
    return true;
  }
  return found;
}

void TransportSimplex::find_join_node() {
  int u = source(in_arc_), v = target(in_arc_);
  while (u != v) {
    if (succ_num_[u] < succ_num_[v]) {
      u = parent_[u];
    } else {
      v = parent_[v];
    }
  }
  join_ = u;
}

namespace {
// pred_ holds signed codes: values >= 0 index artificial arcs, values <= -2
// encode the real arc e as -(e + 2).
inline std::size_t decode_arc(int p, std::size_t arcs) {
  return p >= 0 ? arcs + static_cast<std::size_t>(p) : static_cast<std::size_t>(-(static_cast<long long>(p) + 2));
}
}  // namespace

bool TransportSimplex::find_leaving_arc() {
  // Entering arcs are always at their lower bound (no capacities), so the
  // cycle is oriented source -> target.
  const int first = source(in_arc_);
  const int second = target(in_arc_);
  delta_ = kInfFlow;
  int result = 0;
  for (int u = first; u != join_; u = parent_[u]) {
    const std::size_t e = decode_arc(pred_[u], arcs_);
    const std::int64_t d = pred_dir_[u] == kDown ? kInfFlow : flow_[e];
    if (d < delta_) {
      delta_ = d;
      u_out_ = u;
      result = 1;
    }
  }
  for (int u = second; u != join_; u = parent_[u]) {
    const std::size_t e = decode_arc(pred_[u], arcs_);
    const std::int64_t d = pred_dir_[u] == kUp ? kInfFlow : flow_[e];
    if (d <= delta_) {
      delta_ = d;
      u_out_ = u;
      result = 2;
    }
  }
  if (result == 1) {
    u_in_ = first;
    v_in_ = second;
  } else {
    u_in_ = second;
    v_in_ = first;
  }
  return result != 0;
}

void TransportSimplex::change_flow() {
  if (delta_ > 0) {
    flow_[in_arc_] += delta_;
    for (int u = source(in_arc_); u != join_; u = parent_[u]) {
      flow_[decode_arc(pred_[u], arcs_)] -= pred_dir_[u] * delta_;
    }
    for (int u = target(in_arc_); u != join_; u = parent_[u]) {
      flow_[decode_arc(pred_[u], arcs_)] += pred_dir_[u] * delta_;
    }
  }
  state_[in_arc_] = kTree;
  state_[decode_arc(pred_[u_out_], arcs_)] = kLower;
}

void TransportSimplex::update_tree_structure() {
  const int old_rev_thread = rev_thread_[u_out_];
  const int old_succ_num = succ_num_[u_out_];
  const int old_last_succ = last_succ_[u_out_];
  v_out_ = parent_[u_out_];
  const int in_code = -static_cast<int>(in_arc_) - 2;
  const int in_source = source(in_arc_);

  if (u_in_ == u_out_) {
    parent_[u_in_] = v_in_;
    pred_[u_in_] = in_code;
    pred_dir_[u_in_] = u_in_ == in_source ? kUp : kDown;
    if (thread_[v_in_] != u_out_) {
      int after = thread_[old_last_succ];
      thread_[old_rev_thread] = after;
      rev_thread_[after] = old_rev_thread;
      after = thread_[v_in_];
      thread_[v_in_] = u_out_;
      rev_thread_[u_out_] = v_in_;
      thread_[old_last_succ] = after;
      rev_thread_[after] = old_last_succ;
    }
  } else {
    const int thread_continue = old_rev_thread == v_in_ ? thread_[old_last_succ] : thread_[v_in_];

    // Re-hang the stem u_in -> ... -> u_out under v_in.
    int stem = u_in_;
    int par_stem = v_in_;
    int next_stem = 0;
    int last = last_succ_[u_in_];
    int before = 0, after = thread_[last];
    thread_[v_in_] = u_in_;
    dirty_revs_.clear();
    dirty_revs_.push_back(v_in_);
    while (stem != u_out_) {
      next_stem = parent_[stem];
      thread_[last] = next_stem;
      dirty_revs_.push_back(last);

      before = rev_thread_[stem];
      thread_[before] = after;
      rev_thread_[after] = before;

      parent_[stem] = par_stem;
      par_stem = stem;
      stem = next_stem;

      last = last_succ_[stem] == last_succ_[par_stem] ? rev_thread_[par_stem] : last_succ_[stem];
      after = thread_[last];
    }
    parent_[u_out_] = par_stem;
    thread_[last] = thread_continue;
    rev_thread_[thread_continue] = last;
    last_succ_[u_out_] = last;

    if (old_rev_thread != v_in_) {
      thread_[old_rev_thread] = after;
      rev_thread_[after] = old_rev_thread;
    }
    for (int u : dirty_revs_) rev_thread_[thread_[u]] = u;

    int tmp_sc = 0;
    const int tmp_ls = last_succ_[u_out_];
    for (int u = u_out_, p = parent_[u]; u != u_in_; u = p, p = parent_[u]) {
      pred_[u] = pred_[p];
      pred_dir_[u] = static_cast<signed char>(-pred_dir_[p]);
      tmp_sc += succ_num_[u] - succ_num_[p];
      succ_num_[u] = tmp_sc;
      last_succ_[p] = tmp_ls;
    }
    pred_[u_in_] = in_code;
    pred_dir_[u_in_] = u_in_ == in_source ? kUp : kDown;
    succ_num_[u_in_] = old_succ_num;
  }

  const int up_limit_out = last_succ_[join_] == v_in_ ? join_ : -1;
  const int last_succ_out = last_succ_[u_out_];
  for (int u = v_in_; u != -1 && last_succ_[u] == v_in_; u = parent_[u]) {
    last_succ_[u] = last_succ_out;
  }
  if (join_ != old_rev_thread && v_in_ != old_rev_thread) {
    for (int u = v_out_; u != up_limit_out && last_succ_[u] == old_last_succ; u = parent_[u]) {
      last_succ_[u] = old_rev_thread;
    }
  } else if (last_succ_out != old_last_succ) {
    for (int u = v_out_; u != up_limit_out && last_succ_[u] == old_last_succ; u = parent_[u]) {
      last_succ_[u] = last_succ_out;
    }
  }

  for (int u = v_in_; u != join_; u = parent_[u]) succ_num_[u] += old_succ_num;
  for (int u = v_out_; u != join_; u = parent_[u]) succ_num_[u] -= old_succ_num;
}

void TransportSimplex::update_potential() {
  const double c = cost_[in_arc_];
  const double sigma = pi_[v_in_] - pi_[u_in_] - (pred_dir_[u_in_] == kUp ? c : -c);
  const int end = thread_[last_succ_[u_in_]];
  for (int u = u_in_; u != end; u = thread_[u]) pi_[u] += sigma;
}

TransportSimplex::Result TransportSimplex::solve(bool keep_plan) {
  Result result;
  while (find_entering_arc()) {
    find_join_node();
    if (!find_leaving_arc() || delta_ == kInfFlow) {
      throw NumericalFailure("network simplex: unbounded pivot");
    }
    change_flow();
    update_tree_structure();
    update_potential();
    ++result.pivots;
  }
  for (std::size_t u = 0; u < nodes_; ++u) {
    if (flow_[arcs_ + u] != 0) {
      throw NumericalFailure("network simplex: artificial arc carries flow", static_cast<double>(flow_[arcs_ + u]));
    }
  }
  long double total = 0.0L;
  for (std::size_t e = 0; e < arcs_; ++e) {
    if (flow_[e] == 0) continue;
    total += static_cast<long double>(flow_[e]) * cost_[e];
    if (keep_plan) result.plan.emplace_back(e / cols_, e % cols_, flow_[e]);
  }
  result.cost = static_cast<double>(total);
  return result;
}

std::vector<double> TransportSimplex::row_potentials() const {
  std::vector<double> u(rows_);
  for (std::size_t i = 0; i < rows_; ++i) u[i] = -pi_[i];
  return u;
}

std::vector<double> TransportSimplex::column_potentials() const {
  std::vector<double> v(cols_);
  for (std::size_t j = 0; j < cols_; ++j) v[j] = pi_[rows_ + j];
  return v;
}

}  // namespace greenlab
