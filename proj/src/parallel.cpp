#include "pslab/parallel.hpp"

#include <omp.h>

#include <algorithm>
#include <cstdlib>
#include <string>
#include <thread>

namespace pslab {
namespace {

int initial_thread_count() {
  if (const char* env = std::getenv("PSLAB_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) return n;
    } catch (...) {
    }
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

int& thread_setting() {
  static int n = initial_thread_count();
  return n;
}

}  // namespace

int thread_count() { return thread_setting(); }

void set_thread_count(int n) { thread_setting() = std::max(1, n); }

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body) {
  const int workers = thread_count();
  if (workers <= 1 || n < 2) {
    body(0, n);
    return;
  }
  const auto chunks = static_cast<std::ptrdiff_t>(std::min<std::size_t>(n, 4 * static_cast<std::size_t>(workers)));
#pragma omp parallel for schedule(static) num_threads(workers)
  for (std::ptrdiff_t c = 0; c < chunks; ++c) {
    const std::size_t begin = n * static_cast<std::size_t>(c) / static_cast<std::size_t>(chunks);
    const std::size_t end = n * static_cast<std::size_t>(c + 1) / static_cast<std::size_t>(chunks);
    body(begin, end);
  }
}

double pairwise_sum(std::span<const double> values) {
  constexpr std::size_t kBlock = 64;
  if (values.size() <= kBlock) {
    double s = 0.0;
    for (double x : values) s += x;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

}  // namespace pslab
