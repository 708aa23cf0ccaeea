#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace whitham {

/// Counter-based uniform variates: the value depends only on (seed, index,
/// stream), so sharded scans produce identical samples for any job count.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Uniform in [0, 1).
inline double counter_uniform(std::uint64_t seed, std::uint64_t index, std::uint64_t stream = 0) {
  const std::uint64_t h = splitmix64(splitmix64(seed ^ (stream * 0xd1b54a32d192ed03ULL)) + index);
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

/// Runs body(begin, end, shard) over [0, count) split into `jobs` contiguous
/// shards. Shard results are expected to be merged by the caller in shard order.
template <class Body> void parallel_shards(std::size_t count, unsigned jobs, Body&& body) {
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  if (jobs == 1) {
    body(std::size_t{0}, count, 0u);
    return;
  }
  std::vector<std::thread> threads;
  std::vector<std::exception_ptr> errors(jobs);
  threads.reserve(jobs);
  for (unsigned s = 0; s < jobs; ++s) {
    const std::size_t begin = count * s / jobs;
    const std::size_t end = count * (s + 1) / jobs;
    threads.emplace_back([&body, &errors, begin, end, s] {
      try {
        body(begin, end, s);
      } catch (...) {
        errors[s] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

} // namespace whitham
