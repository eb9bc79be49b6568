#include "point_work.hpp"

#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace tinet {

bool openmp_available() {
#ifdef _OPENMP
    return true;
#else
    return false;
#endif
}

int thread_cap() {
    static const int cap = [] {
        int n = 1;
#ifdef _OPENMP
        n = omp_get_max_threads();
#endif
        if (const char* env = std::getenv("TINET_THREADS")) {
            const int v = std::atoi(env);
            if (v > 0) n = v;
        }
        return n;
    }();
    return cap;
}

Backend default_backend() { return openmp_available() ? Backend::openmp : Backend::serial; }

namespace kernels::detail {

// Each iteration writes only its own slot; no reduction happens inside the
// parallel region, so results match the serial loop exactly.

std::vector<double> max_real_eigs_openmp(const ClosedLoopBlocks& blocks,
                                         const std::vector<cplx>& zs) {
    const auto n = static_cast<long>(zs.size());
    std::vector<double> out(zs.size());
    FailureSlots failures(zs.size());
#pragma omp parallel for schedule(static) num_threads(thread_cap())
    for (long i = 0; i < n; ++i) {
        try {
            out[static_cast<size_t>(i)] = point_margin(blocks, zs[static_cast<size_t>(i)]);
        } catch (...) {
            failures.set(static_cast<size_t>(i), std::current_exception());
        }
    }
    failures.rethrow_first();
    return out;
}

std::vector<PointTerms> point_terms_openmp(const CostModel& model, const std::vector<cplx>& zs) {
    const auto n = static_cast<long>(zs.size());
    std::vector<PointTerms> out(zs.size());
    FailureSlots failures(zs.size());
#pragma omp parallel for schedule(dynamic, 8) num_threads(thread_cap())
    for (long i = 0; i < n; ++i) {
        try {
            out[static_cast<size_t>(i)] = point_terms(model, zs[static_cast<size_t>(i)]);
        } catch (...) {
            failures.set(static_cast<size_t>(i), std::current_exception());
        }
    }
    failures.rethrow_first();
    return out;
}

}  // namespace kernels::detail

namespace kernels {

std::vector<double> max_real_eigs(const ClosedLoopBlocks& blocks, const std::vector<cplx>& zs,
                                  Backend backend) {
    return backend == Backend::openmp ? detail::max_real_eigs_openmp(blocks, zs)
                                      : detail::max_real_eigs_serial(blocks, zs);
}

std::vector<PointTerms> point_terms(const CostModel& model, const std::vector<cplx>& zs,
                                    Backend backend) {
    return backend == Backend::openmp ? detail::point_terms_openmp(model, zs)
                                      : detail::point_terms_serial(model, zs);
}

}  // namespace kernels
}  // namespace tinet
