#pragma once

#include <cstddef>
#include <functional>

namespace linattn {

// Runs fn(0..count-1) on up to `threads` workers. Each index is handled by
// exactly one call, so results written per index are order independent.
// The first exception thrown by any task is rethrown after all workers join.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn);

}  // namespace linattn
