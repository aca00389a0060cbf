#pragma once

namespace bgk {

/// Upper bound on worker threads, read once from BGK_THREADS (default 1).
int thread_budget();

/// Applies the budget to Eigen's internal parallelism.
void apply_thread_budget();

}  // namespace bgk
