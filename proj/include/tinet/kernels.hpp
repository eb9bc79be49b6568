#pragma once

#include <vector>

#include "tinet/spectral.hpp"

namespace tinet {

/// Execution backend for per-frequency grid work. The serial backend is the
/// reference; the OpenMP backend must reproduce it bit for bit.
enum class Backend { serial, openmp };

/// openmp when the library was built with OpenMP, serial otherwise.
Backend default_backend();

/// Thread cap for the OpenMP backend: TINET_THREADS if set and positive,
/// otherwise the OpenMP default.
int thread_cap();

bool openmp_available();

namespace kernels {

/// max Re eig(A_z) for each point.
std::vector<double> max_real_eigs(const ClosedLoopBlocks& blocks, const std::vector<cplx>& zs,
                                  Backend backend);

/// Inputs of the per-frequency cost integrand.
struct CostModel {
    const ClosedLoopBlocks* blocks = nullptr;
    Mat E;                   // cost output matrix blkdiag(I, R~_0)
    WeightSequence weights;
    int cesaroN = 0;         // > 0: weights are the Cesaro sum for network size N
    Mat theta1;
    Mat theta2;
    bool gradients = false;  // also solve the observability ALE
};

struct PointTerms {
    cplx integrand;     // <W_z, E S_z E^T>
    CMat K;             // H22^* Theta2 - Theta2 H22
    CMat L;             // H21^* Theta2 - Theta1 H12 + (W_z E S_z)_22 / 2
    double aleResidual = 0.0;  // worst relative ALE residual at this point
};

/// Cost (and optionally gradient) integrand terms at each point. Throws the
/// NotHurwitz of the lowest failing index.
std::vector<PointTerms> point_terms(const CostModel& model, const std::vector<cplx>& zs,
                                    Backend backend);

}  // namespace kernels
}  // namespace tinet
