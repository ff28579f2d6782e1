#pragma once

namespace convexchains {

// Thread count for OpenMP kernels: CONVEXCHAINS_THREADS if set and positive,
// otherwise the OpenMP runtime default.
int default_thread_count();

// Applies default_thread_count() to the OpenMP runtime.
void configure_threads();

}  // namespace convexchains
