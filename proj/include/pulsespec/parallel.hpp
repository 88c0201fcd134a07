#pragma once

#include <cstddef>
#include <functional>

namespace pulsespec {

/// Worker count used when a caller passes 0.
unsigned default_threads();

/// Runs task(i) for i in [0, n_tasks) on up to `threads` workers. Tasks are
/// handed out dynamically, so results must not depend on which worker ran
/// them. Rethrows the first exception after all workers finish.
void parallel_for(std::size_t n_tasks, unsigned threads, const std::function<void(std::size_t)>& task);

}  // namespace pulsespec
