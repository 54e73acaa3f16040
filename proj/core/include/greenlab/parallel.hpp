#pragma once

#include <cstddef>
#include <functional>
#include <numeric>
#include <span>
#include <vector>

namespace greenlab::parallel {

// Worker count used by every parallel loop in the library. Defaults to 1.
void set_threads(unsigned count);
unsigned threads();

// Calls body(i) for every i in [0, count), splitting the range into
// contiguous chunks over the configured worker count. Each index is visited
// exactly once; exceptions from workers are rethrown on the caller's thread.
// Calls made from inside a worker run serially on that worker.
void for_each_index(std::size_t count, const std::function<void(std::size_t)>& body);

// Sums per-index partials in index order. Combined with for_each_index
// writing one partial per index, results do not depend on the thread count.
inline double ordered_sum(std::span<const double> partials) {
  return std::accumulate(partials.begin(), partials.end(), 0.0);
}

}  // namespace greenlab::parallel
