#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <type_traits>
#include <vector>

namespace alphaeta {

/// Evaluates f(0..n-1) on up to `threads` workers and returns the results in
/// index order. Completion order never leaks into the output.
template <typename F>
auto parallel_map(std::size_t n, unsigned threads, F&& f) {
  using R = std::invoke_result_t<F&, std::size_t>;
  std::vector<R> out(n);
  unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) out[i] = f(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  auto body = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        out[i] = f(i);
      } catch (...) {
        std::lock_guard lock(error_mu);
        if (!error) error = std::current_exception();
        next.store(n);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(body);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
  return out;
}

/// Splits `total` trials into `chunks` nearly equal pieces; piece sizes depend
/// only on (total, chunks).
inline std::vector<std::size_t> split_trials(std::size_t total, std::size_t chunks) {
  std::vector<std::size_t> sizes(chunks, total / chunks);
  for (std::size_t i = 0; i < total % chunks; ++i) ++sizes[i];
  return sizes;
}

}  // namespace alphaeta
