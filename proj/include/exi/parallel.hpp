#pragma once

#include <cstddef>
#include <functional>

namespace exi {

/// Runs fn(i) for i in [0, count) on up to `threads` worker threads.
/// Work is claimed from a shared atomic counter; callers get determinism by
/// making fn(i) depend only on i (per-index substreams, per-index output
/// slots), never on scheduling. threads <= 1 runs inline. The first
/// exception thrown by any fn is rethrown on the calling thread.
void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& fn);

}  // namespace exi
