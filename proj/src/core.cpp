#include "fio/core.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

namespace fio {

namespace {

template <class T>
T pairwise_impl(const T* data, std::size_t n) {
  if (n <= 8) {
    T acc{};
    for (std::size_t i = 0; i < n; ++i) acc += data[i];
    return acc;
  }
  const std::size_t half = n / 2;
  return pairwise_impl(data, half) + pairwise_impl(data + half, n - half);
}

std::atomic<int> g_threads{1};

}  // namespace

double pairwise_sum(std::span<const double> values) {
  return pairwise_impl(values.data(), values.size());
}

cplx pairwise_sum(std::span<const cplx> values) {
  return pairwise_impl(values.data(), values.size());
}

void set_threads(int count) { g_threads = std::max(1, count); }

int threads() { return g_threads; }

namespace {
// Nested loops run serially on the worker that reached them.
thread_local bool t_in_parallel = false;
}  // namespace

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
  const auto workers = static_cast<std::size_t>(std::min<std::size_t>(g_threads, count));
  if (workers <= 1 || t_in_parallel) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = count * w / workers;
    const std::size_t end = count * (w + 1) / workers;
    pool.emplace_back([&, begin, end] {
      t_in_parallel = true;
      try {
        for (std::size_t i = begin; i < end; ++i) body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

double CounterRng::normal(std::uint64_t counter) const {
  double u1 = uniform(2 * counter);
  const double u2 = uniform(2 * counter + 1);
  if (u1 <= 0.0) u1 = 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

}  // namespace fio
