#pragma once

#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace rbc {

// Execution policy for the data-parallel kernels. Every kernel keeps a
// serial path whose output the OpenMP path must reproduce exactly.
enum class Exec { Serial, Parallel };

// Thread budget: min(OMP default, RBC_THREADS if set). 1 without OpenMP.
inline int max_threads() {
#ifdef _OPENMP
    int n = omp_get_max_threads();
    if (const char* env = std::getenv("RBC_THREADS")) {
        char* end = nullptr;
        long cap = std::strtol(env, &end, 10);
        if (end != env && cap >= 1 && cap < n) n = static_cast<int>(cap);
    }
    return n;
#else
    return 1;
#endif
}

}  // namespace rbc
