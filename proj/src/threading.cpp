#include "asymptopt/core.hpp"

#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace asymptopt {

namespace {
int thread_cap_from_env() {
  const char* s = std::getenv("ASYMPTOPT_THREADS");
  if (!s) return 0;
  int v = std::atoi(s);
  return v > 0 ? v : 1;
}
}  // namespace

int max_threads() {
#ifdef _OPENMP
  int cap = thread_cap_from_env();
  int hw = omp_get_max_threads();
  return cap > 0 ? std::min(cap, hw) : hw;
#else
  return 1;
#endif
}

void apply_thread_cap() {
#ifdef _OPENMP
  int cap = thread_cap_from_env();
  if (cap > 0) omp_set_num_threads(cap);
#endif
}

}  // namespace asymptopt
