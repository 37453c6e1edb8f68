#include "sonc/threads.hpp"

#include <omp.h>

#include <cstdlib>
#include <string>

namespace sonc {

int effective_threads() {
    int n = omp_get_max_threads();
    if (const char* env = std::getenv("SONC_SEP_THREADS")) {
        try {
            int cap = std::stoi(env);
            if (cap >= 1 && cap < n) n = cap;
        } catch (const std::exception&) {
            // unparseable value: keep the OpenMP default
        }
    }
    return n < 1 ? 1 : n;
}

}  // namespace sonc
