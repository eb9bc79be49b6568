#include "tinet/synthesis.hpp"

#include <cmath>
#include <random>

namespace tinet {

const char* to_string(Termination t) {
    switch (t) {
        case Termination::converged: return "converged";
        case Termination::maxIters: return "maxIters";
        case Termination::stalled: return "stalled";
    }
    return "?";
}

void DescentConfig::validate() const {
    if (maxIters < 0) throw InvalidArgument("maxIters must be >= 0");
    if (!(initStep > 0.0)) throw InvalidArgument("initStep must be > 0");
    if (!(backtrackFactor > 0.0 && backtrackFactor < 1.0))
        throw InvalidArgument("backtrackFactor must lie in (0, 1)");
    if (!(armijoC > 0.0 && armijoC < 1.0)) throw InvalidArgument("armijoC must lie in (0, 1)");
    if (stationarityTol && !(*stationarityTol > 0.0))
        throw InvalidArgument("stationarityTol must be > 0");
    if (quadPoints < 2) throw InvalidArgument("quadPoints must be >= 2");
    if (stabilityGrid < 16) throw InvalidArgument("stabilityGrid must be >= 16");
    if (maxRestarts < 0) throw InvalidArgument("maxRestarts must be >= 0");
}

namespace {

void require_zero_coupling_range(const ControllerPoint& c) {
    if (c.coupling.size() != 1)
        throw UnsupportedCoupling("controller parameters are defined for coupling range 0 only");
}

void append(Vec& x, Eigen::Index& at, const Mat& m) {
    x.segment(at, m.size()) = Eigen::Map<const Vec>(m.data(), m.size());
    at += m.size();
}

Mat take(const Vec& x, Eigen::Index& at, Eigen::Index rows, Eigen::Index cols) {
    Mat m = Eigen::Map<const Mat>(x.data() + at, rows, cols);
    at += rows * cols;
    return m;
}

}  // namespace

Vec controller_params(const ControllerPoint& c) {
    require_zero_coupling_range(c);
    Eigen::Index n = c.energy.R0().size() + c.rt0().size();
    for (const Mat& r : c.energy.positive()) n += r.size();
    Vec x(n);
    Eigen::Index at = 0;
    append(x, at, c.energy.R0());
    for (const Mat& r : c.energy.positive()) append(x, at, r);
    append(x, at, c.rt0());
    return x;
}

ControllerPoint controller_from_params(const ControllerPoint& shape, const Vec& x) {
    require_zero_coupling_range(shape);
    Eigen::Index at = 0;
    const Eigen::Index k = shape.energy.order();
    const Mat r0 = take(x, at, k, k);
    std::vector<Mat> pos;
    for (int l = 0; l < shape.energy.range(); ++l) pos.push_back(take(x, at, k, k));
    ControllerPoint c;
    c.energy = EnergyBlocks(r0, std::move(pos));
    c.coupling = {take(x, at, shape.rt0().rows(), shape.rt0().cols())};
    if (at != x.size()) throw DimensionMismatch("controller_from_params: parameter length mismatch");
    return c;
}

Vec gradient_params(const CostReport& r) {
    if (!r.hasGradients) throw InvalidArgument("gradient_params: report has no gradients");
    Eigen::Index n = r.gradRt0.size();
    for (const Mat& g : r.gradR2) n += g.size();
    Vec x(n);
    Eigen::Index at = 0;
    for (const Mat& g : r.gradR2) append(x, at, g);
    append(x, at, r.gradRt0);
    return x;
}

NetworkSpec with_controller(const NetworkSpec& spec, const ControllerPoint& c) {
    NetworkSpec s = spec;
    s.controller = c;
    return s;
}

namespace {

struct Evaluated {
    CostReport report;
    StabilityReport stability;
};

// Stability sweep then fixed-grid cost and gradient; nullopt when the point
// is outside the stabilizing set or the cost cannot be evaluated there.
std::optional<Evaluated> try_evaluate(const NetworkSpec& spec, const DescentConfig& cfg, int P,
                                      Backend backend) {
    Evaluated e;
    e.stability = stability_sweep(spec, cfg.stabilityGrid, backend);
    if (!e.stability.isStabilizing) return std::nullopt;
    try {
        e.report = cost_on_grid(spec, P, true, backend);
    } catch (const NotStabilizing&) {
        return std::nullopt;
    } catch (const IllConditioned&) {
        return std::nullopt;
    }
    return e;
}

constexpr double kMinStep = 1e-14;

}  // namespace

DescentResult descend(const NetworkSpec& spec, const DescentConfig& cfg, Backend backend) {
    cfg.validate();
    if (spec.dims.dTilde != 0)
        throw UnsupportedCoupling("descend: plant-controller coupling range must be 0");

    const StabilityReport start = stability_sweep(spec, cfg.stabilityGrid, backend);
    if (!start.isStabilizing)
        throw NotStabilizing("descend: initial controller is not stabilizing (margin " +
                                 std::to_string(start.margin) + ")",
                             start.margin);

    // Freeze the quadrature grid at the size the adaptive rule settles on, so
    // every comparison in the line search uses the same discretization.
    const int P = thermo_cost(spec, cfg.quadPoints, false, backend).gridSize;

    const ControllerPoint shape = spec.controller;
    Vec x = controller_params(spec.controller);
    std::optional<Evaluated> cur = try_evaluate(spec, cfg, P, backend);
    if (!cur) throw NotStabilizing("descend: cost not defined at the initial controller", start.margin);

    Vec g = gradient_params(cur->report);
    DescentResult out;
    DescentTrace& trace = out.trace;
    trace.stationarityTol = cfg.stationarityTol.value_or(1e-7 * (1.0 + g.norm()));
    trace.records.push_back({0, cur->report.value, g.norm(), 0.0, cur->stability.margin});
    out.iterates.push_back(x);

    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    double alpha = cfg.initStep;
    Vec prevX, prevG;
    trace.termination = Termination::maxIters;

    for (int it = 1;; ++it) {
        if (g.norm() <= trace.stationarityTol) {
            trace.termination = Termination::converged;
            break;
        }
        if (it > cfg.maxIters) break;

        // Barzilai-Borwein trial length from the last accepted pair.
        if (prevX.size()) {
            const Vec s = x - prevX, y = g - prevG;
            const double sy = s.dot(y);
            if (sy > 0.0 && std::isfinite(sy)) alpha = s.squaredNorm() / sy;
        }

        const double c0 = cur->report.value;
        const double g2 = g.squaredNorm();
        std::optional<Evaluated> next;
        Vec xNext;
        double step = alpha;
        for (; step >= kMinStep; step *= cfg.backtrackFactor) {
            xNext = x - step * g;
            next = try_evaluate(with_controller(spec, controller_from_params(shape, xNext)), cfg, P,
                                backend);
            if (next && next->report.value < c0 && next->report.value <= c0 - cfg.armijoC * step * g2)
                break;
            next.reset();
        }

        if (!next) {
            // Randomized restart: small random moves that strictly lower the cost.
            while (!next && trace.restarts < cfg.maxRestarts) {
                ++trace.restarts;
                Vec dir(x.size());
                for (Eigen::Index i = 0; i < dir.size(); ++i) dir(i) = normal(rng);
                dir *= 1e-3 * (1.0 + x.norm()) / dir.norm();
                for (int halving = 0; halving < 30 && !next; ++halving, dir *= 0.5) {
                    for (const double sign : {1.0, -1.0}) {
                        xNext = x + sign * dir;
                        next = try_evaluate(
                            with_controller(spec, controller_from_params(shape, xNext)), cfg, P,
                            backend);
                        if (next && next->report.value < c0) break;
                        next.reset();
                    }
                }
                step = next ? (xNext - x).norm() : 0.0;
            }
            if (!next) {
                trace.termination = Termination::stalled;
                break;
            }
            prevX.resize(0);
            alpha = cfg.initStep;
        } else {
            prevX = x;
            prevG = g;
            alpha = step;
        }

        x = std::move(xNext);
        cur = std::move(next);
        g = gradient_params(cur->report);
        trace.records.push_back({it, cur->report.value, g.norm(), step, cur->stability.margin});
        out.iterates.push_back(x);
    }

    out.controller = controller_from_params(shape, x);
    out.finalReport = cur->report;
    return out;
}

GradCheckReport grad_check(const NetworkSpec& spec, double h, int quadPoints, Backend backend) {
    if (!(h > 0.0)) throw InvalidArgument("grad_check: h must be > 0");
    if (spec.dims.dTilde != 0)
        throw UnsupportedCoupling("grad_check: plant-controller coupling range must be 0");
    require_stabilizing(stability_sweep(spec, 64, backend));

    const CostReport base = cost_on_grid(spec, quadPoints, true, backend);
    const Vec x = controller_params(spec.controller);
    const Vec grad = gradient_params(base);

    struct Direction {
        size_t block;
        Vec d;
    };
    std::vector<std::string> names;
    std::vector<Direction> dirs;
    const Eigen::Index k = spec.controller.energy.order();
    Eigen::Index offset = 0;

    names.push_back("R2_0");
    for (Eigen::Index j = 0; j < k; ++j)
        for (Eigen::Index i = 0; i <= j; ++i) {
            Vec d = Vec::Zero(x.size());
            d(offset + i + j * k) = 1.0;
            d(offset + j + i * k) = 1.0;
            dirs.push_back({0, d});
        }
    offset += k * k;
    for (int l = 1; l <= spec.controller.energy.range(); ++l) {
        names.push_back("R2_" + std::to_string(l));
        for (Eigen::Index e = 0; e < k * k; ++e) {
            Vec d = Vec::Zero(x.size());
            d(offset + e) = 1.0;
            dirs.push_back({names.size() - 1, d});
        }
        offset += k * k;
    }
    names.push_back("Rt0");
    for (Eigen::Index e = offset; e < x.size(); ++e) {
        Vec d = Vec::Zero(x.size());
        d(e) = 1.0;
        dirs.push_back({names.size() - 1, d});
    }

    const auto cost_at = [&](const Vec& xp) {
        try {
            return cost_on_grid(with_controller(spec, controller_from_params(spec.controller, xp)),
                                quadPoints, false, backend)
                .value;
        } catch (const NotStabilizing&) {
            throw StepLeavesStabilizingSet("grad_check: perturbation by h leaves the stabilizing set");
        }
    };

    std::vector<double> absErr(names.size(), 0.0);
    double scale = 0.0;
    for (const Direction& dir : dirs) {
        const double fd = (cost_at(x + h * dir.d) - cost_at(x - h * dir.d)) / (2.0 * h);
        const double an = grad.dot(dir.d);
        scale = std::max({scale, std::abs(fd), std::abs(an)});
        absErr[dir.block] = std::max(absErr[dir.block], std::abs(fd - an));
    }

    GradCheckReport r;
    r.h = h;
    r.quadPoints = quadPoints;
    r.scale = scale;
    for (size_t b = 0; b < names.size(); ++b) {
        const double rel = scale > 0.0 ? absErr[b] / scale : 0.0;
        r.blocks.push_back({names[b], absErr[b], rel});
        r.maxRelError = std::max(r.maxRelError, rel);
    }
    return r;
}

}  // namespace tinet
