#ifndef VARLEX_PARALLEL_HPP
#define VARLEX_PARALLEL_HPP

#include <cstddef>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace varlex {

/// Thread cap from VARLEX_THREADS (unset, 0 or 1 means serial). Results are
/// independent of the cap: work is split into fixed shards whose outputs are
/// combined in index order by the callers.
inline unsigned thread_cap() {
  const char* env = std::getenv("VARLEX_THREADS");
  if (!env) return 1;
  const long v = std::strtol(env, nullptr, 10);
  if (v <= 1) return 1;
  return static_cast<unsigned>(v);
}

/// Runs body(0..count-1); shards are distributed round-robin when more than
/// one thread is allowed. body must write only to its own shard's slots.
inline void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
  const unsigned threads = thread_cap();
  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  const unsigned used = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  std::vector<std::thread> pool;
  pool.reserve(used);
  for (unsigned t = 0; t < used; ++t) {
    pool.emplace_back([&, t]() {
      for (std::size_t i = t; i < count; i += used) body(i);
    });
  }
  for (std::thread& th : pool) th.join();
}

}  // namespace varlex

#endif
