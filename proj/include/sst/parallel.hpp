#pragma once

// Index-space kernels shared by the brute-force oracles and the W-pattern
// search. Each kernel has a plain serial loop (the reference) and an OpenMP
// version that must return exactly what the serial loop returns.

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <optional>
#include <utility>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace sst {

enum class Exec { Serial, Parallel };

int max_threads();

namespace detail {

class FirstError {
 public:
  void capture() {
#pragma omp critical(sst_first_error)
    {
      if (!error_) error_ = std::current_exception();
    }
  }
  void rethrow() const {
    if (error_) std::rethrow_exception(error_);
  }

 private:
  std::exception_ptr error_;
};

}  // namespace detail

/// Lowest index in [0, n) for which pred(i) holds.
template <class Pred>
std::optional<std::size_t> find_first_serial(std::size_t n, Pred&& pred) {
  for (std::size_t i = 0; i < n; ++i)
    if (pred(i)) return i;
  return std::nullopt;
}

template <class Pred>
std::optional<std::size_t> find_first(std::size_t n, Pred&& pred, Exec exec) {
  if (exec == Exec::Serial || n < 2) return find_first_serial(n, pred);

  std::atomic<std::size_t> best{n};
  detail::FirstError error;
  const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t k = 0; k < count; ++k) {
    const auto i = static_cast<std::size_t>(k);
    if (i >= best.load(std::memory_order_relaxed)) continue;
    try {
      if (pred(i)) {
        std::size_t cur = best.load(std::memory_order_relaxed);
        while (i < cur && !best.compare_exchange_weak(cur, i, std::memory_order_relaxed)) {
        }
      }
    } catch (...) {
      error.capture();
    }
  }
  error.rethrow();
  if (best.load() == n) return std::nullopt;
  return best.load();
}

/// Maximum of value(i) over [0, n) with the lowest maximizing index.
/// Returns {0, value_type{}} for n == 0.
template <class Value, class F>
std::pair<std::size_t, Value> argmax_first_serial(std::size_t n, F&& value) {
  std::pair<std::size_t, Value> best{0, Value{}};
  for (std::size_t i = 0; i < n; ++i) {
    Value v = value(i);
    if (i == 0 || v > best.second) best = {i, v};
  }
  return best;
}

template <class Value, class F>
std::pair<std::size_t, Value> argmax_first(std::size_t n, F&& value, Exec exec) {
  if (exec == Exec::Serial || n < 2) return argmax_first_serial<Value>(n, value);

  std::pair<std::size_t, Value> best{n, Value{}};
  detail::FirstError error;
  const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel
  {
    std::pair<std::size_t, Value> local{n, Value{}};
#pragma omp for schedule(dynamic, 16) nowait
    for (std::int64_t k = 0; k < count; ++k) {
      const auto i = static_cast<std::size_t>(k);
      try {
        Value v = value(i);
        if (local.first == n || v > local.second) local = {i, v};
      } catch (...) {
        error.capture();
      }
    }
#pragma omp critical(sst_argmax_merge)
    {
      if (local.first != n) {
        if (best.first == n || local.second > best.second ||
            (local.second == best.second && local.first < best.first))
          best = local;
      }
    }
  }
  error.rethrow();
  return best;
}

}  // namespace sst
