#pragma once

#include <atomic>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace toricwedge {

/// Worker count from TORICWEDGE_WORKERS, else the hardware concurrency (at least 1).
inline std::size_t default_workers() {
  if (const char* env = std::getenv("TORICWEDGE_WORKERS")) {
    try {
      const long n = std::stol(env);
      if (n >= 1) return static_cast<std::size_t>(n);
    } catch (const std::exception&) {
    }
  }
  const auto hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

/**
 * Applies fn to every input on up to `workers` threads. Results are returned
 * in input order, so the output does not depend on scheduling. The first
 * exception (by input index) is rethrown after all workers finish.
 */
template <typename T, typename Fn>
auto parallel_map(const std::vector<T>& inputs, Fn&& fn, std::size_t workers)
    -> std::vector<decltype(fn(inputs.front()))> {
  using R = decltype(fn(inputs.front()));
  std::vector<R> out(inputs.size());
  std::vector<std::exception_ptr> errors(inputs.size());
  if (workers <= 1 || inputs.size() <= 1) {
    for (std::size_t k = 0; k < inputs.size(); ++k) out[k] = fn(inputs[k]);
    return out;
  }
  std::atomic<std::size_t> next{0};
  auto run = [&] {
    for (std::size_t k; (k = next++) < inputs.size();) {
      try {
        out[k] = fn(inputs[k]);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < std::min(workers, inputs.size()); ++w) pool.emplace_back(run);
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace toricwedge
