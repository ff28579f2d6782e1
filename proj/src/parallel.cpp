#include "convexchains/parallel.hpp"

#include <cstdlib>
#include <string>

#include <omp.h>

namespace convexchains {

int default_thread_count() {
  if (const char* env = std::getenv("CONVEXCHAINS_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) return n;
    } catch (const std::exception&) {
    }
  }
  return omp_get_max_threads();
}

void configure_threads() { omp_set_num_threads(default_thread_count()); }

}  // namespace convexchains
