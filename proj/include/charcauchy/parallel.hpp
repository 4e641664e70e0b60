#pragma once

#include <cstddef>
#include <vector>

namespace charcauchy {

// Worker count used by the OpenMP kernels.  Honours the CHARCAUCHY_THREADS
// environment variable (values < 1 fall back to the OpenMP default).
int worker_count();

// Sums the entries of `partials` in index order.  All parallel reductions in
// the library go through per-index partials followed by this ordered sum, so
// results do not depend on the number of workers.
double ordered_sum(const std::vector<double>& partials);

}  // namespace charcauchy
