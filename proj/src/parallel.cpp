#include "charcauchy/parallel.hpp"

#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace charcauchy {

int worker_count() {
  static const int cached = [] {
#ifdef _OPENMP
    int n = omp_get_max_threads();
#else
    int n = 1;
#endif
    if (const char* env = std::getenv("CHARCAUCHY_THREADS")) {
      try {
        const int cap = std::stoi(env);
        if (cap >= 1 && cap < n) n = cap;
      } catch (...) {
        // ignore unparsable values
      }
    }
    return n;
  }();
  return cached;
}

double ordered_sum(const std::vector<double>& partials) {
  double s = 0.0;
  for (double x : partials) s += x;
  return s;
}

}  // namespace charcauchy
