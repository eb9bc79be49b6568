#include "tinet/finite_oracle.hpp"

#include <algorithm>

namespace tinet {

namespace {

int wrap(int j, int N) { return ((j % N) + N) % N; }

}  // namespace

FiniteNetwork build_finite(const NetworkSpec& spec, int N) {
    const NodeDims& d = spec.dims;
    if (N < 1 || N <= 2 * std::max({d.d1, d.d2, d.dTilde}))
        throw InvalidArgument("build_finite: N must exceed 2 * max(d1, d2, dTilde)");
    const ClosedLoopBlocks b = assemble(spec);
    const Eigen::Index p = b.plantOrder(), c = b.controllerOrder(), w = p + c;
    if (w * N > kMaxOracleDim)
        throw InvalidArgument("build_finite: oracle state dimension exceeds " +
                              std::to_string(kMaxOracleDim));

    FiniteNetwork net;
    net.N = N;
    net.nodeOrder = w;
    net.Afull = Mat::Zero(w * N, w * N);
    const auto plantRow = [&](int j) { return w * j; };
    const auto ctrlRow = [&](int j) { return w * j + p; };

    for (int j = 0; j < N; ++j) {
        for (int l = -b.plant.range; l <= b.plant.range; ++l)
            net.Afull.block(plantRow(j), plantRow(wrap(j - l, N)), p, p) += b.plant.at(l);
        for (int l = -b.couplingPlant.range; l <= b.couplingPlant.range; ++l)
            net.Afull.block(plantRow(j), ctrlRow(wrap(j - l, N)), p, c) += b.couplingPlant.at(l);
        // The controller sees the plant at j + l.
        for (int l = -b.couplingController.range; l <= b.couplingController.range; ++l)
            net.Afull.block(ctrlRow(j), plantRow(wrap(j + l, N)), c, p) += b.couplingController.at(l);
        for (int l = -b.controller.range; l <= b.controller.range; ++l)
            net.Afull.block(ctrlRow(j), ctrlRow(wrap(j - l, N)), c, c) += b.controller.at(l);
    }

    const Eigen::Index nw = b.Bcal.cols();
    net.Bfull = Mat::Zero(w * N, nw * N);
    net.OmegaFull = CMat::Zero(nw * N, nw * N);
    const Mat E = cost_output_matrix(d.n1, spec.controller.rt0());
    net.Efull = Mat::Zero(E.rows() * N, w * N);
    for (int j = 0; j < N; ++j) {
        net.Bfull.block(w * j, nw * j, w, nw) = b.Bcal;
        net.OmegaFull.block(nw * j, nw * j, nw, nw) = b.Omega;
        net.Efull.block(E.rows() * j, w * j, E.rows(), w) = E;
    }

    const Eigen::Index q = spec.weights.sigma[0].rows();
    net.weightToeplitz = Mat::Zero(q * N, q * N);
    for (int j = 0; j < N; ++j)
        for (int k = 0; k < N; ++k)
            if (std::abs(j - k) <= spec.weights.lag())
                net.weightToeplitz.block(q * j, q * k, q, q) = spec.weights.at(j - k);
    return net;
}

AleSolution finite_covariance(const FiniteNetwork& net) {
    const CMat B = net.Bfull.cast<cplx>();
    return solve_ale({net.Afull.cast<cplx>(), B * net.OmegaFull * B.transpose(),
                      AleSide::controllability});
}

double finite_cost_direct(const FiniteNetwork& net, const CMat& covariance) {
    const Mat weighted = net.Efull.transpose() * net.weightToeplitz * net.Efull;
    // <W, S> = tr(W^T S); W is real symmetric.
    return (weighted.cast<cplx>().cwiseProduct(covariance)).sum().real() / net.N;
}

double finite_cost_direct(const FiniteNetwork& net) {
    return finite_cost_direct(net, finite_covariance(net).X);
}

CMat dft_block(const FiniteNetwork& net, const CMat& M, cplx z, cplx v) {
    const Eigen::Index w = net.nodeOrder;
    CMat Fz = CMat::Zero(w, w * net.N), Fv = CMat::Zero(w, w * net.N);
    for (int j = 0; j < net.N; ++j) {
        Fz.block(0, w * j, w, w).diagonal().setConstant(ipow(z, -j));
        Fv.block(0, w * j, w, w).diagonal().setConstant(ipow(v, -j));
    }
    return Fz * M * Fv.adjoint();
}

double shift_commutator(const FiniteNetwork& net) {
    const Eigen::Index w = net.nodeOrder, n = w * net.N;
    Mat shift = Mat::Zero(n, n);
    for (int j = 0; j < net.N; ++j) shift.block(w * wrap(j + 1, net.N), w * j, w, w).setIdentity();
    return (net.Afull * shift - shift * net.Afull).cwiseAbs().maxCoeff();
}

}  // namespace tinet
