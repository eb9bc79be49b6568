#pragma once

#include <iosfwd>
#include <vector>

#include "tinet/network_model.hpp"

namespace tinet {

inline constexpr double kTolUnitCircle = 1e-14;

/// Points on the unit circle. Both kinds are closed under conjugation.
struct FrequencyGrid {
    enum class Kind { rootsOfUnity, uniform };

    Kind kind = Kind::uniform;
    int size = 0;
    std::vector<cplx> points;

    /// e^{2 pi i j / N}, j = 0..N-1.
    static FrequencyGrid roots_of_unity(int N);
    /// The same nodes, used as a trapezoid rule on [0, 2pi).
    static FrequencyGrid uniform(int P);
};

/// Coefficient matrices at offsets -range..range (index l + range).
struct BlockFamily {
    int range = 0;
    std::vector<Mat> blocks;

    const Mat& at(int l) const { return blocks[static_cast<size_t>(l + range)]; }
};

/// Every z-independent ingredient of the closed-loop symbol.
struct ClosedLoopBlocks {
    BlockFamily plant;               // A_{1,l}
    BlockFamily controller;          // A_{2,l}
    BlockFamily couplingPlant;       // A~_{1,l}, upper-right block
    BlockFamily couplingController;  // A~_{2,l}, lower-left block
    Mat Bcal;                        // blkdiag(B1, B2)
    CMat Omega;                      // blkdiag(Omega1, Omega2)
    CMat noise;                      // Bcal Omega Bcal^T

    Eigen::Index plantOrder() const { return plant.blocks.front().rows(); }
    Eigen::Index controllerOrder() const { return controller.blocks.front().rows(); }
    Eigen::Index order() const { return plantOrder() + controllerOrder(); }
};

/// Builds the drift families of plant, controller and coupling from a spec.
ClosedLoopBlocks assemble(const NetworkSpec& spec);

/// Closed-loop symbol A_z at |z| = 1. Lower-left block uses z^{+l}.
CMat symbol_A(const ClosedLoopBlocks& blocks, cplx z);
CMat symbol_A(const NetworkSpec& spec, cplx z);

/// V = Bcal Omega Bcal^T (Hermitian, PSD).
CMat symbol_noise(const NetworkSpec& spec);

/// Sigma_z = sigma_0 + sum_k (z^{-k} sigma_k + z^k sigma_k^T).
CMat sigma_of_z(const WeightSequence& weights, cplx z);

/// Cesaro partial sum sum_{|k| < N} (1 - |k|/N) z^{-k} sigma_k.
CMat cesaro_sigma(const WeightSequence& weights, int N, cplx z);

/// z^l by repeated squaring; negative l uses 1/z.
cplx ipow(cplx z, int l);

/// Throws OffCircle if | |z| - 1 | exceeds the tolerance.
void require_on_circle(cplx z);

/// CSV dump: re_z, im_z, then the row-major entries of each matrix as
/// (re, im) pairs. `label` names the matrix columns.
void write_grid_csv(std::ostream& os, const std::vector<cplx>& zs, const std::vector<CMat>& mats,
                    const char* label = "m");

}  // namespace tinet
