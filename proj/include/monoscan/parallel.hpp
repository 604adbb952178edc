#ifndef MONOSCAN_PARALLEL_HPP_
#define MONOSCAN_PARALLEL_HPP_

#include <cstddef>
#include <functional>

namespace monoscan {

// Worker count: hardware concurrency, capped by MONOSCAN_THREADS if set.
std::size_t worker_count();

// Calls body(k) for k in [0, count) on up to worker_count() threads. Indices
// are claimed dynamically; callers write results into slot k so the outcome
// does not depend on scheduling. The first exception thrown is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace monoscan

#endif  // MONOSCAN_PARALLEL_HPP_
