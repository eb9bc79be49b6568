#pragma once

#include "tinet/lyapunov.hpp"
#include "tinet/spectral.hpp"

namespace tinet {

inline constexpr int kMaxOracleDim = 256;

/// Explicit size-N ring. State is ordered node by node, each node holding
/// [X_{1,j}; X_{2,j}].
struct FiniteNetwork {
    int N = 0;
    Eigen::Index nodeOrder = 0;  // 2 n1 + 2 n2
    Mat Afull;
    Mat Bfull;
    CMat OmegaFull;
    Mat weightToeplitz;  // blocks sigma_{j-k}
    Mat Efull;           // I_N (x) E
};

FiniteNetwork build_finite(const NetworkSpec& spec, int N);

/// Steady second moments: Afull S + S Afull^T + Bfull OmegaFull Bfull^T = 0.
AleSolution finite_covariance(const FiniteNetwork& net);

/// (1/N) Re <(I (x) E)^T W (I (x) E), S_inf>.
double finite_cost_direct(const FiniteNetwork& net);
double finite_cost_direct(const FiniteNetwork& net, const CMat& covariance);

/// F_z M F_v^*, with F_z the block row [z^{-j} I]_{j=0..N-1}.
CMat dft_block(const FiniteNetwork& net, const CMat& M, cplx z, cplx v);

/// ||Afull Pi - Pi Afull||_max for the one-node cyclic shift Pi.
double shift_commutator(const FiniteNetwork& net);

}  // namespace tinet
