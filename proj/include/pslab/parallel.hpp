#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace pslab {

/// Worker count used by parallel loops. Initialized from PSLAB_THREADS,
/// falling back to the number of hardware threads.
int thread_count();
void set_thread_count(int n);

/// Runs body(begin, end) over a static partition of [0, n).
///
/// Callers must only write to slots owned by their index range; the partition
/// never influences results.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

/// Pairwise (cascade) summation in a fixed order, independent of thread count.
double pairwise_sum(std::span<const double> values);

}  // namespace pslab
