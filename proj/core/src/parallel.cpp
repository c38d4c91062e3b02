#include "koranyi/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

namespace koranyi {

namespace {

std::atomic<int> g_override{0};

constexpr std::size_t kMaxChunks = 256;

}  // namespace

int thread_count() {
  if (const int o = g_override.load(); o > 0) return o;
  const char* env = std::getenv("KORANYI_THREADS");
  if (env == nullptr) return 1;
  try {
    return std::clamp(std::stoi(env), 1, 256);
  } catch (...) {
    return 1;
  }
}

void set_thread_count(int n) { g_override.store(std::max(0, n)); }

std::vector<std::size_t> chunk_bounds(std::size_t count, std::size_t min_chunk) {
  min_chunk = std::max<std::size_t>(1, min_chunk);
  std::size_t chunks = std::min(kMaxChunks, (count + min_chunk - 1) / min_chunk);
  std::vector<std::size_t> b;
  if (count == 0) return b;
  chunks = std::max<std::size_t>(1, chunks);
  b.reserve(chunks + 1);
  for (std::size_t c = 0; c <= chunks; ++c) b.push_back(count * c / chunks);
  return b;
}

void parallel_for(std::size_t count, const std::function<void(std::size_t, std::size_t)>& body,
                  std::size_t min_chunk) {
  if (count == 0) return;
  const auto bounds = chunk_bounds(count, min_chunk);
  const std::size_t chunks = bounds.size() - 1;
  const auto workers = std::min<std::size_t>(static_cast<std::size_t>(thread_count()), chunks);
  if (workers <= 1) {
    body(0, count);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto run = [&] {
    for (;;) {
      const std::size_t c = next.fetch_add(1);
      if (c >= chunks) return;
      try {
        body(bounds[c], bounds[c + 1]);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(run);
  run();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace koranyi
