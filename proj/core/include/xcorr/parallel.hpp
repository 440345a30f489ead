// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <functional>

namespace xcorr {

// Process-wide worker count used by the compute kernels (default 1). Kernels
// split work into pieces whose boundaries do not depend on this number, so
// results are identical for any setting.
void set_thread_count(int threads);
int thread_count();

// Calls fn(i) exactly once for every i in [0, n), spread over thread_count()
// workers. The first exception (by index) is rethrown after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace xcorr
