#pragma once

#include <cstddef>
#include <functional>

namespace cesradon {

/// Upper bound on worker threads used by parallel_for (0 = hardware concurrency).
void set_max_threads(unsigned n) noexcept;
unsigned max_threads() noexcept;

/// Runs body(i) for i in [0, n). Indices are handed out in contiguous chunks;
/// the first exception thrown by any worker is rethrown on the caller.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace cesradon
