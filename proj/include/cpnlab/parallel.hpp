#pragma once

// Node-level map-reduce kernels. Every reduction in the library goes through
// these: values are computed per node (in parallel when OpenMP is enabled)
// into a buffer and then summed in index order, so serial and parallel runs
// produce bit-identical results.

#include <cstddef>
#include <exception>
#include <functional>
#include <span>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace cpnlab {

enum class Exec { Serial, Parallel };

// Process-wide default; tests flip it to compare the two paths.
Exec default_exec();
void set_default_exec(Exec exec);
int thread_count();

// Calls fn(i) for every i in [0, n). The first exception thrown by any
// iteration is rethrown after the loop completes.
template <class Fn>
void for_each_index(std::size_t n, Fn&& fn, Exec exec = default_exec()) {
  if (exec == Exec::Serial) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::exception_ptr first;
#pragma omp parallel for schedule(dynamic, 64)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
    try {
      fn(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(cpnlab_first_exception)
      if (!first) first = std::current_exception();
    }
  }
  if (first) std::rethrow_exception(first);
}

template <class T, class Fn>
std::vector<T> map_indices(std::size_t n, Fn&& fn, Exec exec = default_exec()) {
  std::vector<T> out(n);
  for_each_index(n, [&](std::size_t i) { out[i] = fn(i); }, exec);
  return out;
}

// Index-ordered compensated sum.
inline double ordered_sum(std::span<const double> values) {
  double sum = 0.0, carry = 0.0;
  for (double v : values) {
    const double y = v - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  return sum;
}

// Serial reference: the plain loop the kernels are tested against.
template <class Fn>
double serial_weighted_sum(std::size_t n, Fn&& fn, std::span<const double> weights) {
  std::vector<double> terms(n);
  for (std::size_t i = 0; i < n; ++i) terms[i] = weights[i] * fn(i);
  return ordered_sum(terms);
}

template <class Fn>
double weighted_sum(std::size_t n, Fn&& fn, std::span<const double> weights, Exec exec = default_exec()) {
  if (exec == Exec::Serial) return serial_weighted_sum(n, fn, weights);
  auto terms = map_indices<double>(n, [&](std::size_t i) { return weights[i] * fn(i); }, exec);
  return ordered_sum(terms);
}

}  // namespace cpnlab
