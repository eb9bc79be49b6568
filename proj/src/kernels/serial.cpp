#include "point_work.hpp"

namespace tinet::kernels::detail {

std::vector<double> max_real_eigs_serial(const ClosedLoopBlocks& blocks,
                                         const std::vector<cplx>& zs) {
    std::vector<double> out(zs.size());
    for (size_t i = 0; i < zs.size(); ++i) out[i] = point_margin(blocks, zs[i]);
    return out;
}

std::vector<PointTerms> point_terms_serial(const CostModel& model, const std::vector<cplx>& zs) {
    std::vector<PointTerms> out(zs.size());
    for (size_t i = 0; i < zs.size(); ++i) out[i] = point_terms(model, zs[i]);
    return out;
}

}  // namespace tinet::kernels::detail
