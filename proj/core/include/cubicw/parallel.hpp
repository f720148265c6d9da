#pragma once

#include <functional>

namespace cubicw {

int default_workers();

/// Runs f(i) for i in [0, count) on a small worker pool. Callers own result
/// storage indexed by i, so gathered output keeps input order. The first
/// exception thrown by any task is rethrown after all workers join.
void parallel_for(long count, const std::function<void(long)>& f, int workers = 0);

}  // namespace cubicw
