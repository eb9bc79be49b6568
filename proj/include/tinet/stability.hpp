#pragma once

#include <vector>

#include "tinet/kernels.hpp"
#include "tinet/lyapunov.hpp"

namespace tinet {

inline constexpr int kMaxStabilityGrid = 8192;
inline constexpr double kTolMargin = 1e-8;

enum class Verdict { stabilizing, notStabilizing, inconclusive };

const char* to_string(Verdict v);

struct StabilityReport {
    double margin = 0.0;   // max over the grid of max Re eig(A_z)
    cplx worstZ{1.0, 0.0};
    int gridSize = 0;      // full-circle grid size of the final refinement
    Verdict verdict = Verdict::inconclusive;
    bool isStabilizing = false;  // margin < -kTolHurwitz

    /// Spectral radius of exp(A_z) at the worst point, exp(margin).
    double spectralRadiusExp() const;
};

/// Sweeps the upper semicircle on nested grids initialGrid, 2*initialGrid, ...
/// until the margin moves by less than kTolMargin (away from the boundary) or
/// kMaxStabilityGrid is reached.
StabilityReport stability_sweep(const ClosedLoopBlocks& blocks, int initialGrid,
                                Backend backend = default_backend());
StabilityReport stability_sweep(const NetworkSpec& spec, int initialGrid,
                                Backend backend = default_backend());

/// Throws NotStabilizing / Inconclusive unless the verdict is stabilizing.
void require_stabilizing(const StabilityReport& r);

struct MarginSample {
    double phi;
    cplx z;
    double maxRealEig;
};

/// max Re eig(A_z) on the full uniform grid of the given size.
std::vector<MarginSample> margin_curve(const ClosedLoopBlocks& blocks, int grid,
                                       Backend backend = default_backend());

}  // namespace tinet
