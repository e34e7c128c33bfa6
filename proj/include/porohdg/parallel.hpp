#pragma once

#include <functional>

namespace porohdg {

/// Worker count: hardware concurrency capped by POROHDG_THREADS when set.
int worker_count();

/// Runs body(i) for i in [0, n) on up to worker_count() threads. Each index
/// is visited exactly once; the first exception thrown is rethrown.
void parallel_for(int n, const std::function<void(int)>& body);

}  // namespace porohdg
