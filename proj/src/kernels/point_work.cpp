#include "point_work.hpp"

#include <Eigen/Eigenvalues>

#include "tinet/lyapunov.hpp"

namespace tinet::kernels::detail {

double point_margin(const ClosedLoopBlocks& blocks, cplx z) {
    const CMat a = symbol_A(blocks, z);
    if (a.rows() == 0) return -std::numeric_limits<double>::infinity();
    Eigen::ComplexEigenSolver<CMat> es(a, false);
    return es.eigenvalues().real().maxCoeff();
}

PointTerms point_terms(const CostModel& m, cplx z) {
    const ClosedLoopBlocks& b = *m.blocks;
    const CMat A = symbol_A(b, z);
    const AleSolution s = solve_ale({A, b.noise, AleSide::controllability});
    const CMat W = m.cesaroN > 0 ? cesaro_sigma(m.weights, m.cesaroN, z) : sigma_of_z(m.weights, z);
    const CMat E = m.E.cast<cplx>();
    const CMat WES = W * E * s.X;

    PointTerms t;
    t.integrand = (WES * E.transpose()).trace();
    const double scaleS = A.norm() * s.X.norm() + b.noise.norm();
    t.aleResidual = scaleS > 0.0 ? s.residual / scaleS : 0.0;
    if (!m.gradients) return t;

    const CMat EtWE = E.transpose() * W * E;
    const AleSolution q = solve_ale({A, EtWE, AleSide::observability});
    const double scaleQ = A.norm() * q.X.norm() + EtWE.norm();
    if (scaleQ > 0.0) t.aleResidual = std::max(t.aleResidual, q.residual / scaleQ);

    // The imaginary part of the noise intensity shifts each integrand by a term
    // whose circle mean vanishes; dropping it keeps the gradient sums real.
    const CMat noiseRe = b.noise.real().cast<cplx>();
    const AleSolution sr = solve_ale({A, noiseRe, AleSide::controllability});
    const double scaleSr = A.norm() * sr.X.norm() + noiseRe.norm();
    if (scaleSr > 0.0) t.aleResidual = std::max(t.aleResidual, sr.residual / scaleSr);
    const CMat WESr = W * E * sr.X;

    const CMat H = q.X * sr.X;
    const Eigen::Index p = b.plantOrder(), c = b.controllerOrder();
    const CMat th1 = m.theta1.cast<cplx>(), th2 = m.theta2.cast<cplx>();
    const CMat H22 = H.bottomRightCorner(c, c);
    t.K = H22.adjoint() * th2 - th2 * H22;
    t.L = H.bottomLeftCorner(c, p).adjoint() * th2 - th1 * H.topRightCorner(p, c) +
          0.5 * WESr.bottomRightCorner(p, c);
    return t;
}

}  // namespace tinet::kernels::detail
