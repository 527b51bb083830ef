#include "smset/parallel.hpp"

#include <omp.h>

#include <cstdlib>
#include <exception>
#include <string>

namespace smset {

int worker_count() {
    if (const char* env = std::getenv("SMSET_WORKERS")) {
        try {
            int n = std::stoi(env);
            if (n >= 1) return n;
        } catch (...) {
            // fall through to the OpenMP default
        }
    }
    return omp_get_max_threads();
}

namespace detail {

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
    std::exception_ptr err = nullptr;
    const long count = static_cast<long>(n);
#pragma omp parallel for schedule(dynamic) num_threads(worker_count())
    for (long i = 0; i < count; ++i) {
        try {
            body(static_cast<std::size_t>(i));
        } catch (...) {
#pragma omp critical(smset_parallel_err)
            {
                if (!err) err = std::current_exception();
            }
        }
    }
    if (err) std::rethrow_exception(err);
}

} // namespace detail
} // namespace smset
