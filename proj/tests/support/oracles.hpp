#pragma once

// Independent reference computations and instance generators for the tests.

#include <random>
#include <vector>

#include "tinet/network_model.hpp"
#include "tinet/spectral.hpp"

namespace tinet::testing {

using Rng = std::mt19937_64;

Mat gaussian(Rng& rng, Eigen::Index rows, Eigen::Index cols, double scale = 1.0);
CMat complex_gaussian(Rng& rng, Eigen::Index n, double scale = 1.0);

/// Dense solve of A X + X A^* + V = 0 through the n^2 x n^2 Kronecker sum.
CMat kron_ale(const CMat& A, const CMat& V);

/// Random complex matrix with every eigenvalue real part <= -minDecay.
CMat random_hurwitz(Rng& rng, Eigen::Index n, double minDecay = 0.1);

/// Random Hermitian PSD matrix of rank <= rank.
CMat random_psd(Rng& rng, Eigen::Index n, Eigen::Index rank);

/// Direct sum of z^{-l} blocks without Horner or power caching.
CMat naive_symbol(const ClosedLoopBlocks& b, cplx z);

/// max Re eig over a uniform grid of `points` nodes, brute force.
double fine_margin(const ClosedLoopBlocks& b, int points);

/// Laurent coefficients c_k, |k| <= K, of a matrix function sampled on the
/// uniform P-point grid, by FFT: c_k = (1/P) sum_j f(z_j) z_j^{-k}.
std::vector<CMat> laurent_fft(const std::vector<CMat>& samples, int K);

struct InstanceOptions {
    double offScale = 0.25;     // R_1 entries
    double sigma1Scale = 0.02;  // weight lag-1 entries
    double couplingScale = 0.4; // R~_0 entries
    int weightLag = 1;
};

/// Single-mode ring with nearest-neighbour plant and controller couplings
/// (n = m = 1, d1 = d2 = 1, dTilde = 0); may or may not be stabilizing.
NetworkSpec random_single_mode(Rng& rng, const InstanceOptions& opt = {});

/// Draws until `count` instances have stability margin <= maxMargin.
std::vector<NetworkSpec> stabilizing_instances(std::uint64_t seed, int count, double maxMargin = -0.1,
                                               const InstanceOptions& opt = {});

/// Multi-mode instance with general ranges; used for structural checks.
NetworkSpec random_instance(Rng& rng, const NodeDims& dims);

}  // namespace tinet::testing
