#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tinet/cost.hpp"
#include "tinet/stability.hpp"

namespace tinet {

struct DescentConfig {
    int maxIters = 500;
    double initStep = 1e-2;
    double backtrackFactor = 0.5;
    double armijoC = 1e-4;
    /// Unset: 1e-7 * (1 + initial gradient norm).
    std::optional<double> stationarityTol;
    std::uint64_t seed = 0;
    int quadPoints = kDefaultQuadPoints;
    int stabilityGrid = 64;
    int maxRestarts = 2;

    void validate() const;
};

struct DescentRecord {
    int iteration = 0;
    double cost = 0.0;
    double gradNorm = 0.0;
    double step = 0.0;    // accepted step length (0 for the starting point)
    double margin = 0.0;  // stability margin of the iterate
};

enum class Termination { converged, maxIters, stalled };

const char* to_string(Termination t);

struct DescentTrace {
    std::vector<DescentRecord> records;
    Termination termination = Termination::maxIters;
    double stationarityTol = 0.0;
    int restarts = 0;
};

struct DescentResult {
    ControllerPoint controller;
    DescentTrace trace;
    CostReport finalReport;
    std::vector<Vec> iterates;  // controller parameters, one per trace record
};

/// Parameter vector of the controller: vec(R_{2,0}), vec(R_{2,1}), ...,
/// vec(R~_0), column-major. Its Euclidean inner product is the direct-sum
/// Frobenius inner product. Requires dTilde = 0.
Vec controller_params(const ControllerPoint& c);
ControllerPoint controller_from_params(const ControllerPoint& shape, const Vec& x);
Vec gradient_params(const CostReport& r);

NetworkSpec with_controller(const NetworkSpec& spec, const ControllerPoint& c);

/// Backtracking gradient descent over the stabilizing set.
DescentResult descend(const NetworkSpec& spec, const DescentConfig& cfg,
                      Backend backend = default_backend());

struct BlockError {
    std::string block;
    double maxAbsError = 0.0;
    double relError = 0.0;  // maxAbsError / global gradient scale
};

struct GradCheckReport {
    double h = 0.0;
    int quadPoints = 0;
    std::vector<BlockError> blocks;
    double maxRelError = 0.0;
    double scale = 0.0;  // max |directional derivative| over all directions
};

/// Central differences of the fixed-grid cost along the canonical basis of the
/// controller parameter space versus the analytic gradient.
GradCheckReport grad_check(const NetworkSpec& spec, double h, int quadPoints = kDefaultQuadPoints,
                           Backend backend = default_backend());

}  // namespace tinet
