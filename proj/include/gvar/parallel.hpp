#pragma once

#include <cstddef>
#include <functional>

namespace gvar {

/// Number of worker threads used by sampling loops (default 1).
/// Results never depend on this value: work is cut into fixed chunks whose
/// partial results are combined in chunk order.
void set_threads(unsigned n);
unsigned threads();

/// Calls fn(i) for every i in [0, count), spread over threads().
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

} // namespace gvar
