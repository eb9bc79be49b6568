#include "tinet/spectral.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>

#include "tinet/format.hpp"

namespace tinet {

namespace {

std::vector<cplx> circle_points(int n) {
    std::vector<cplx> pts(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) {
        const double phi = 2.0 * std::numbers::pi * j / n;
        pts[static_cast<size_t>(j)] = std::polar(1.0, phi);
    }
    for (int j = (n + 1) / 2; j < n; ++j)
        pts[static_cast<size_t>(j)] = std::conj(pts[static_cast<size_t>(n - j)]);
    // Exact values at the axis points; the lower half mirrors the upper half.
    if (n % 2 == 0) pts[static_cast<size_t>(n / 2)] = cplx(-1.0, 0.0);
    if (n % 4 == 0) {
        pts[static_cast<size_t>(n / 4)] = cplx(0.0, 1.0);
        pts[static_cast<size_t>(3 * n / 4)] = cplx(0.0, -1.0);
    }
    return pts;
}

BlockFamily family(std::vector<Mat> blocks) {
    BlockFamily f;
    f.range = static_cast<int>(blocks.size() - 1) / 2;
    f.blocks = std::move(blocks);
    return f;
}

}  // namespace

cplx ipow(cplx z, int l) {
    if (l < 0) return ipow(1.0 / z, -l);
    cplx r(1.0, 0.0);
    while (l) {
        if (l & 1) r *= z;
        z *= z;
        l >>= 1;
    }
    return r;
}

namespace {

template <class Fn>
CMat laurent(const BlockFamily& f, Fn&& power) {
    CMat acc = f.at(0).cast<cplx>();
    for (int l = 1; l <= f.range; ++l)
        acc += power(l) * f.at(l).cast<cplx>() + power(-l) * f.at(-l).cast<cplx>();
    return acc;
}

}  // namespace

FrequencyGrid FrequencyGrid::roots_of_unity(int N) {
    if (N < 1) throw InvalidArgument("roots_of_unity: N must be >= 1");
    return {Kind::rootsOfUnity, N, circle_points(N)};
}

FrequencyGrid FrequencyGrid::uniform(int P) {
    if (P < 1) throw InvalidArgument("uniform grid: P must be >= 1");
    return {Kind::uniform, P, circle_points(P)};
}

void require_on_circle(cplx z) {
    if (std::abs(std::abs(z) - 1.0) > kTolUnitCircle) {
        std::ostringstream os;
        os << "frequency off the unit circle: |z| - 1 = " << std::abs(z) - 1.0;
        throw OffCircle(os.str());
    }
}

ClosedLoopBlocks assemble(const NetworkSpec& spec) {
    require_consistent_dims(spec);
    ClosedLoopBlocks b;
    const Mat B1 = b_from_coupling(spec.theta1, spec.M1);
    const Mat B2 = b_from_coupling(spec.theta2, spec.M2);
    b.plant = family(drift_blocks(spec.theta1, spec.plantEnergy, B1, spec.noise1));
    b.controller = family(drift_blocks(spec.theta2, spec.controller.energy, B2, spec.noise2));
    CouplingDrift cd = coupling_drift(spec.theta1, spec.theta2, spec.controller.coupling);
    b.couplingPlant = family(std::move(cd.plantSide));
    b.couplingController = family(std::move(cd.controllerSide));

    const Eigen::Index p = B1.rows(), c = B2.rows();
    const Eigen::Index w1 = B1.cols(), w2 = B2.cols();
    b.Bcal = Mat::Zero(p + c, w1 + w2);
    b.Bcal.topLeftCorner(p, w1) = B1;
    b.Bcal.bottomRightCorner(c, w2) = B2;
    b.Omega = CMat::Zero(w1 + w2, w1 + w2);
    b.Omega.topLeftCorner(w1, w1) = spec.noise1.Omega;
    b.Omega.bottomRightCorner(w2, w2) = spec.noise2.Omega;
    const CMat Bc = b.Bcal.cast<cplx>();
    b.noise = Bc * b.Omega * Bc.transpose();
    return b;
}

CMat symbol_A(const ClosedLoopBlocks& b, cplx z) {
    require_on_circle(z);
    const auto zinv = [z](int l) { return ipow(z, -l); };
    const auto zpos = [z](int l) { return ipow(z, l); };
    const Eigen::Index p = b.plantOrder(), c = b.controllerOrder();
    CMat a(p + c, p + c);
    a.topLeftCorner(p, p) = laurent(b.plant, zinv);
    a.topRightCorner(p, c) = laurent(b.couplingPlant, zinv);
    a.bottomLeftCorner(c, p) = laurent(b.couplingController, zpos);
    a.bottomRightCorner(c, c) = laurent(b.controller, zinv);
    return a;
}

CMat symbol_A(const NetworkSpec& spec, cplx z) { return symbol_A(assemble(spec), z); }

CMat symbol_noise(const NetworkSpec& spec) { return assemble(spec).noise; }

CMat sigma_of_z(const WeightSequence& weights, cplx z) {
    CMat acc = weights.sigma.at(0).cast<cplx>();
    for (int k = 1; k <= weights.lag(); ++k) {
        const Mat& s = weights.sigma[static_cast<size_t>(k)];
        acc += ipow(z, -k) * s.cast<cplx>() + ipow(z, k) * s.transpose().cast<cplx>();
    }
    return acc;
}

CMat cesaro_sigma(const WeightSequence& weights, int N, cplx z) {
    if (N < 1) throw InvalidArgument("cesaro_sigma: N must be >= 1");
    CMat acc = weights.sigma.at(0).cast<cplx>();
    for (int k = 1; k <= std::min(weights.lag(), N - 1); ++k) {
        const double f = 1.0 - static_cast<double>(k) / N;
        const Mat& s = weights.sigma[static_cast<size_t>(k)];
        acc += f * (ipow(z, -k) * s.cast<cplx>() + ipow(z, k) * s.transpose().cast<cplx>());
    }
    return acc;
}

void write_grid_csv(std::ostream& os, const std::vector<cplx>& zs, const std::vector<CMat>& mats,
                    const char* label) {
    if (zs.size() != mats.size()) throw DimensionMismatch("write_grid_csv: size mismatch");
    os << "re_z,im_z";
    if (!mats.empty()) {
        for (Eigen::Index i = 0; i < mats[0].rows(); ++i)
            for (Eigen::Index j = 0; j < mats[0].cols(); ++j)
                os << ',' << label << i << '_' << j << "_re," << label << i << '_' << j << "_im";
    }
    os << '\n';
    for (size_t k = 0; k < zs.size(); ++k) {
        os << fmt17(zs[k].real()) << ',' << fmt17(zs[k].imag());
        for (Eigen::Index i = 0; i < mats[k].rows(); ++i)
            for (Eigen::Index j = 0; j < mats[k].cols(); ++j)
                os << ',' << fmt17(mats[k](i, j).real()) << ',' << fmt17(mats[k](i, j).imag());
        os << '\n';
    }
}

}  // namespace tinet
