#pragma once

// Work done at a single frequency, shared by the serial and OpenMP loops.

#include <exception>
#include <vector>

#include "tinet/kernels.hpp"

namespace tinet::kernels::detail {

double point_margin(const ClosedLoopBlocks& blocks, cplx z);

PointTerms point_terms(const CostModel& model, cplx z);

/// Per-index exception slots; rethrows the lowest-index failure so both
/// backends report the same error.
class FailureSlots {
public:
    explicit FailureSlots(size_t n) : slots_(n) {}
    void set(size_t i, std::exception_ptr e) { slots_[i] = std::move(e); }
    void rethrow_first() const {
        for (const auto& e : slots_)
            if (e) std::rethrow_exception(e);
    }

private:
    std::vector<std::exception_ptr> slots_;
};

std::vector<double> max_real_eigs_serial(const ClosedLoopBlocks& blocks,
                                         const std::vector<cplx>& zs);
std::vector<double> max_real_eigs_openmp(const ClosedLoopBlocks& blocks,
                                         const std::vector<cplx>& zs);
std::vector<PointTerms> point_terms_serial(const CostModel& model, const std::vector<cplx>& zs);
std::vector<PointTerms> point_terms_openmp(const CostModel& model, const std::vector<cplx>& zs);

}  // namespace tinet::kernels::detail
