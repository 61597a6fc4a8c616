// OpenMP worker control. Kernels write results into per-index slots and
// reduce serially, so output never depends on the worker count.
#pragma once

namespace torustwist {

enum class Execution { Serial, Parallel };

/// Sets the OpenMP team size used by every parallel kernel (n >= 1).
void set_workers(int n);
int workers();

}  // namespace torustwist
