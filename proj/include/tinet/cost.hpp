#pragma once

#include <vector>

#include "tinet/kernels.hpp"
#include "tinet/lyapunov.hpp"

namespace tinet {

inline constexpr int kDefaultQuadPoints = 256;
inline constexpr int kMaxQuadPoints = 4096;
inline constexpr double kTolQuad = 1e-9;

/// Everything known about the closed loop at one frequency.
struct SpectralSample {
    cplx z;
    CMat Az;
    CMat Sz;      // A S + S A^* + Bcal Omega Bcal^T = 0
    CMat Qz;      // A^* Q + Q A + E^T Sigma_z E = 0
    CMat Hz;      // Q S
    CMat SigmaZ;
    double residualS = 0.0;
    double residualQ = 0.0;
};

SpectralSample spectral_sample(const NetworkSpec& spec, cplx z);

struct OptimalityResiduals {
    std::vector<double> energy;  // one per l = 0..d2
    double coupling = 0.0;
};

struct CostReport {
    enum class Kind { finiteN, thermodynamic };

    Kind kind = Kind::thermodynamic;
    int networkSize = 0;  // N for finiteN
    double value = 0.0;
    double imagResidue = 0.0;  // |Im| of the summed integrand
    int gridSize = 0;
    double maxAleResidual = 0.0;

    bool hasGradients = false;
    std::vector<Mat> gradR2;  // dE/dR_{2,l}, l = 0..d2; gradR2[0] symmetric
    Mat gradRt0;
    double gradImagResidue = 0.0;     // max |Im| over all gradient entries
    double gradR20SymDefect = 0.0;    // ||G0 - G0^T||_max before symmetrization
    OptimalityResiduals optimality;

    double gradientNorm() const;  // norm in the direct-sum inner product
};

/// E_N via the Cesaro-weighted sum over the N-th roots of unity.
CostReport finite_cost(const NetworkSpec& spec, int N, Backend backend = default_backend());

/// Trapezoid rule on a fixed P-point grid; gradients when requested
/// (requires dTilde = 0). No refinement.
CostReport cost_on_grid(const NetworkSpec& spec, int P, bool gradients,
                        Backend backend = default_backend());

/// Thermodynamic-limit cost with nested grid doubling from quadPoints until the
/// change is below kTolQuad * value; reports the finest grid.
CostReport thermo_cost(const NetworkSpec& spec, int quadPoints = kDefaultQuadPoints,
                       bool gradients = false, Backend backend = default_backend());

std::vector<Mat> grad_energy(const NetworkSpec& spec, int quadPoints = kDefaultQuadPoints,
                             Backend backend = default_backend());
Mat grad_coupling(const NetworkSpec& spec, int quadPoints = kDefaultQuadPoints,
                  Backend backend = default_backend());
OptimalityResiduals optimality_residual(const NetworkSpec& spec,
                                        int quadPoints = kDefaultQuadPoints,
                                        Backend backend = default_backend());

/// Per-point <Sigma_z, E S_z E^T> on a P-point grid, for plotting.
std::vector<std::pair<cplx, double>> cost_spectrum(const NetworkSpec& spec, int P,
                                                   Backend backend = default_backend());

}  // namespace tinet
