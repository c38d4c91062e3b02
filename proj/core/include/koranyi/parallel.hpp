#pragma once

// Deterministic fork/join over index ranges. The range is cut into chunks
// whose boundaries depend only on the range size, so reductions that sum
// chunk partials in chunk order give the same bits for any thread count.

#include <cstddef>
#include <functional>
#include <vector>

namespace koranyi {

// Worker count from KORANYI_THREADS (default 1, clamped to [1, 256]).
int thread_count();

// Override for the current process; 0 restores the environment setting.
void set_thread_count(int n);

// Calls body(begin, end) on disjoint chunks covering [0, count).
void parallel_for(std::size_t count, const std::function<void(std::size_t, std::size_t)>& body,
                  std::size_t min_chunk = 1);

// Chunk layout used by parallel_for for a given count.
std::vector<std::size_t> chunk_bounds(std::size_t count, std::size_t min_chunk = 1);

// Sum of term(i) over [0, count), chunk partials added in a fixed order.
template <class T, class F>
T parallel_sum(std::size_t count, F&& term, std::size_t min_chunk = 1) {
  const auto bounds = chunk_bounds(count, min_chunk);
  std::vector<T> partial(bounds.size() > 0 ? bounds.size() - 1 : 0, T{});
  parallel_for(
      partial.size(),
      [&](std::size_t b, std::size_t e) {
        for (std::size_t c = b; c < e; ++c) {
          T acc{};
          for (std::size_t i = bounds[c]; i < bounds[c + 1]; ++i) acc += term(i);
          partial[c] = acc;
        }
      },
      1);
  T total{};
  for (const auto& p : partial) total += p;
  return total;
}

}  // namespace koranyi
