#include "tinet/cost.hpp"

#include <cmath>
#include <sstream>

namespace tinet {

double CostReport::gradientNorm() const {
    double s = gradRt0.squaredNorm();
    for (const Mat& g : gradR2) s += g.squaredNorm();
    return std::sqrt(s);
}

SpectralSample spectral_sample(const NetworkSpec& spec, cplx z) {
    const ClosedLoopBlocks b = assemble(spec);
    SpectralSample s;
    s.z = z;
    s.Az = symbol_A(b, z);
    const AleSolution S = solve_ale({s.Az, b.noise, AleSide::controllability});
    s.SigmaZ = sigma_of_z(spec.weights, z);
    const CMat E = cost_output_matrix(spec.dims.n1, spec.controller.rt0()).cast<cplx>();
    const AleSolution Q = solve_ale({s.Az, E.transpose() * s.SigmaZ * E, AleSide::observability});
    s.Sz = S.X;
    s.Qz = Q.X;
    s.Hz = s.Qz * s.Sz;
    s.residualS = S.residual;
    s.residualQ = Q.residual;
    return s;
}

namespace {

kernels::CostModel make_model(const NetworkSpec& spec, const ClosedLoopBlocks& blocks,
                              bool gradients) {
    kernels::CostModel m;
    m.blocks = &blocks;
    m.E = cost_output_matrix(spec.dims.n1, spec.controller.rt0());
    m.weights = spec.weights;
    m.theta1 = spec.theta1.theta;
    m.theta2 = spec.theta2.theta;
    m.gradients = gradients;
    return m;
}

std::vector<kernels::PointTerms> run_points(const kernels::CostModel& m, const std::vector<cplx>& zs,
                                            Backend backend) {
    try {
        return kernels::point_terms(m, zs, backend);
    } catch (const NotHurwitz& e) {
        throw NotStabilizing(std::string("closed loop not Hurwitz on the frequency grid: ") + e.what(),
                             e.maxRealEigenvalue);
    }
}

// Fixed-order reduction of per-point terms into a report.
CostReport reduce(const std::vector<kernels::PointTerms>& terms, const std::vector<cplx>& zs,
                  const kernels::CostModel& m, int d2) {
    const auto P = static_cast<double>(zs.size());
    CostReport r;
    r.gridSize = static_cast<int>(zs.size());
    cplx sum = 0.0;
    for (const auto& t : terms) {
        sum += t.integrand;
        r.maxAleResidual = std::max(r.maxAleResidual, t.aleResidual);
    }
    r.value = sum.real() / P;
    r.imagResidue = std::abs(sum.imag()) / P;
    if (!m.gradients) return r;

    r.hasGradients = true;
    for (int l = 0; l <= d2; ++l) {
        CMat acc = CMat::Zero(terms[0].K.rows(), terms[0].K.cols());
        for (size_t k = 0; k < terms.size(); ++k) acc += ipow(zs[k], l) * terms[k].K;
        acc /= P;
        const double factor = l == 0 ? 2.0 : 4.0;
        r.gradImagResidue = std::max(r.gradImagResidue, factor * acc.imag().cwiseAbs().maxCoeff());
        r.optimality.energy.push_back((-acc.real()).norm());
        Mat g = factor * acc.real();
        if (l == 0) {
            r.gradR20SymDefect = (g - g.transpose()).cwiseAbs().maxCoeff();
            g = (0.5 * (g + g.transpose())).eval();
        }
        r.gradR2.push_back(std::move(g));
    }
    CMat accL = CMat::Zero(terms[0].L.rows(), terms[0].L.cols());
    for (const auto& t : terms) accL += t.L;
    accL /= P;
    r.gradImagResidue = std::max(r.gradImagResidue, 4.0 * accL.imag().cwiseAbs().maxCoeff());
    r.optimality.coupling = accL.real().norm();
    r.gradRt0 = 4.0 * accL.real();
    return r;
}

void require_gradient_scope(const NetworkSpec& spec) {
    if (spec.dims.dTilde != 0)
        throw UnsupportedCoupling("gradients are available for plant-controller coupling range 0 only");
}

}  // namespace

CostReport finite_cost(const NetworkSpec& spec, int N, Backend backend) {
    const NodeDims& d = spec.dims;
    if (N < 1 || N <= 2 * std::max({d.d1, d.d2, d.dTilde}))
        throw InvalidArgument("finite_cost: N must exceed 2 * max(d1, d2, dTilde)");
    const ClosedLoopBlocks blocks = assemble(spec);
    kernels::CostModel m = make_model(spec, blocks, false);
    m.cesaroN = N;
    const FrequencyGrid g = FrequencyGrid::roots_of_unity(N);
    CostReport r = reduce(run_points(m, g.points, backend), g.points, m, d.d2);
    r.kind = CostReport::Kind::finiteN;
    r.networkSize = N;
    return r;
}

CostReport cost_on_grid(const NetworkSpec& spec, int P, bool gradients, Backend backend) {
    if (gradients) require_gradient_scope(spec);
    const ClosedLoopBlocks blocks = assemble(spec);
    const kernels::CostModel m = make_model(spec, blocks, gradients);
    const FrequencyGrid g = FrequencyGrid::uniform(P);
    return reduce(run_points(m, g.points, backend), g.points, m, spec.dims.d2);
}

CostReport thermo_cost(const NetworkSpec& spec, int quadPoints, bool gradients, Backend backend) {
    if (quadPoints < 2) throw InvalidArgument("thermo_cost: quadPoints must be >= 2");
    if (gradients) require_gradient_scope(spec);
    const ClosedLoopBlocks blocks = assemble(spec);
    const kernels::CostModel m = make_model(spec, blocks, gradients);
    const int maxQuad = std::max(kMaxQuadPoints, quadPoints);

    int P = quadPoints;
    std::vector<cplx> zs = FrequencyGrid::uniform(P).points;
    std::vector<kernels::PointTerms> terms = run_points(m, zs, backend);
    double coarse = std::numeric_limits<double>::quiet_NaN();
    if (P % 2 == 0) {
        // The even nodes form the P/2 grid.
        cplx s = 0.0;
        for (size_t k = 0; k < terms.size(); k += 2) s += terms[k].integrand;
        coarse = s.real() / (P / 2);
    }
    while (true) {
        cplx s = 0.0;
        for (const auto& t : terms) s += t.integrand;
        const double fine = s.real() / P;
        if (!std::isnan(coarse) && std::abs(fine - coarse) <= kTolQuad * std::abs(fine)) break;
        if (2 * P > maxQuad) {
            std::ostringstream os;
            os << "thermo_cost: quadrature change " << std::abs(fine - coarse) << " at " << P
               << " points exceeds tolerance";
            throw NoConvergence(os.str());
        }
        const std::vector<cplx> zs2 = FrequencyGrid::uniform(2 * P).points;
        std::vector<cplx> fresh;
        for (int k = 1; k < 2 * P; k += 2) fresh.push_back(zs2[static_cast<size_t>(k)]);
        std::vector<kernels::PointTerms> freshTerms = run_points(m, fresh, backend);
        std::vector<kernels::PointTerms> merged(zs2.size());
        for (size_t k = 0; k < zs2.size(); ++k)
            merged[k] = (k % 2 == 0) ? std::move(terms[k / 2]) : std::move(freshTerms[k / 2]);
        terms = std::move(merged);
        zs = zs2;
        coarse = fine;
        P *= 2;
    }
    CostReport r = reduce(terms, zs, m, spec.dims.d2);
    r.kind = CostReport::Kind::thermodynamic;
    return r;
}

std::vector<Mat> grad_energy(const NetworkSpec& spec, int quadPoints, Backend backend) {
    return cost_on_grid(spec, quadPoints, true, backend).gradR2;
}

Mat grad_coupling(const NetworkSpec& spec, int quadPoints, Backend backend) {
    return cost_on_grid(spec, quadPoints, true, backend).gradRt0;
}

OptimalityResiduals optimality_residual(const NetworkSpec& spec, int quadPoints, Backend backend) {
    return cost_on_grid(spec, quadPoints, true, backend).optimality;
}

std::vector<std::pair<cplx, double>> cost_spectrum(const NetworkSpec& spec, int P, Backend backend) {
    const ClosedLoopBlocks blocks = assemble(spec);
    const kernels::CostModel m = make_model(spec, blocks, false);
    const FrequencyGrid g = FrequencyGrid::uniform(P);
    const auto terms = run_points(m, g.points, backend);
    std::vector<std::pair<cplx, double>> out;
    out.reserve(terms.size());
    for (size_t k = 0; k < terms.size(); ++k) out.emplace_back(g.points[k], terms[k].integrand.real());
    return out;
}

}  // namespace tinet
