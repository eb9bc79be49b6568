#include "tinet/stability.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace tinet {

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::stabilizing: return "stabilizing";
        case Verdict::notStabilizing: return "not_stabilizing";
        case Verdict::inconclusive: return "inconclusive";
    }
    return "?";
}

double StabilityReport::spectralRadiusExp() const { return std::exp(margin); }

namespace {

// Upper-semicircle indices 0..P/2 of the P-point grid.
std::vector<cplx> semicircle(const FrequencyGrid& g) {
    return {g.points.begin(), g.points.begin() + g.size / 2 + 1};
}

constexpr int kRefineCandidates = 4;
constexpr int kGoldenIters = 60;

// Golden-section search for the largest max-real-eigenvalue on [lo, hi] of the
// angle; returns the best evaluated point.
std::pair<double, double> golden_max(const ClosedLoopBlocks& blocks, double lo, double hi) {
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    const auto f = [&](double phi) {
        return kernels::max_real_eigs(blocks, {std::polar(1.0, phi)}, Backend::serial)[0];
    };
    double a = lo, b = hi;
    double x1 = b - g * (b - a), x2 = a + g * (b - a);
    double f1 = f(x1), f2 = f(x2);
    std::pair<double, double> best = f1 >= f2 ? std::pair{f1, x1} : std::pair{f2, x2};
    for (int it = 0; it < kGoldenIters; ++it) {
        if (f1 >= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(x1);
            if (f1 > best.first) best = {f1, x1};
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(x2);
            if (f2 > best.first) best = {f2, x2};
        }
    }
    return best;
}

}  // namespace

StabilityReport stability_sweep(const ClosedLoopBlocks& blocks, int initialGrid, Backend backend) {
    if (initialGrid < 16) throw InvalidArgument("stability_sweep: initialGrid must be >= 16");

    int P = initialGrid;
    FrequencyGrid grid = FrequencyGrid::uniform(P);
    std::vector<cplx> zs = semicircle(grid);
    std::vector<double> eig = kernels::max_real_eigs(blocks, zs, backend);

    const auto reduce = [&](double& m, cplx& w) {
        size_t arg = 0;
        for (size_t i = 1; i < eig.size(); ++i)
            if (eig[i] > eig[arg]) arg = i;
        m = eig[arg];
        w = zs[arg];
    };

    StabilityReport r;
    reduce(r.margin, r.worstZ);
    while (P < kMaxStabilityGrid) {
        // The refined grid interleaves the previous semicircle with new odd nodes.
        const int P2 = 2 * P;
        const FrequencyGrid g2 = FrequencyGrid::uniform(P2);
        std::vector<cplx> fresh;
        for (int k = 1; k <= P2 / 2; k += 2) fresh.push_back(g2.points[static_cast<size_t>(k)]);
        const std::vector<double> freshEig = kernels::max_real_eigs(blocks, fresh, backend);

        std::vector<cplx> zs2 = semicircle(g2);
        std::vector<double> eig2(zs2.size());
        for (size_t k = 0; k < zs2.size(); ++k)
            eig2[k] = (k % 2 == 0) ? eig[k / 2] : freshEig[k / 2];
        zs = std::move(zs2);
        eig = std::move(eig2);
        P = P2;

        const double previous = r.margin;
        reduce(r.margin, r.worstZ);
        if (r.margin - previous < kTolMargin && std::abs(r.margin) > kTolHurwitz) break;
    }
    r.gridSize = P;

    // Grid maxima can sit between nodes; polish the leading local maxima.
    const double h = 2.0 * std::numbers::pi / P;
    std::vector<size_t> peaks;
    for (size_t k = 0; k < eig.size(); ++k) {
        const bool left = k == 0 || eig[k] >= eig[k - 1];
        const bool right = k + 1 == eig.size() || eig[k] >= eig[k + 1];
        if (left && right) peaks.push_back(k);
    }
    std::stable_sort(peaks.begin(), peaks.end(), [&](size_t a, size_t b) { return eig[a] > eig[b]; });
    if (peaks.size() > kRefineCandidates) peaks.resize(kRefineCandidates);
    for (const size_t k : peaks) {
        const double phi = h * static_cast<double>(k);
        const auto [val, at] = golden_max(blocks, std::max(0.0, phi - h), std::min(std::numbers::pi, phi + h));
        if (val > r.margin) {
            r.margin = val;
            r.worstZ = std::polar(1.0, at);
        }
    }

    if (r.margin < -kTolHurwitz) {
        r.verdict = Verdict::stabilizing;
    } else if (r.margin > kTolHurwitz) {
        r.verdict = Verdict::notStabilizing;
    } else {
        r.verdict = Verdict::inconclusive;
    }
    r.isStabilizing = r.verdict == Verdict::stabilizing;
    return r;
}

StabilityReport stability_sweep(const NetworkSpec& spec, int initialGrid, Backend backend) {
    return stability_sweep(assemble(spec), initialGrid, backend);
}

void require_stabilizing(const StabilityReport& r) {
    std::ostringstream os;
    os << "stability margin " << r.margin << " at grid " << r.gridSize;
    if (r.verdict == Verdict::inconclusive) throw Inconclusive(os.str(), r.margin);
    if (r.verdict == Verdict::notStabilizing) throw NotStabilizing(os.str(), r.margin);
}

std::vector<MarginSample> margin_curve(const ClosedLoopBlocks& blocks, int grid, Backend backend) {
    const FrequencyGrid g = FrequencyGrid::uniform(grid);
    const std::vector<double> eig = kernels::max_real_eigs(blocks, g.points, backend);
    std::vector<MarginSample> out;
    out.reserve(g.points.size());
    for (size_t k = 0; k < g.points.size(); ++k)
        out.push_back({2.0 * std::numbers::pi * static_cast<double>(k) / grid, g.points[k], eig[k]});
    return out;
}

}  // namespace tinet
