#include "tinet/network_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "tinet/spectral.hpp"

namespace tinet {

Mat symplectic_unit() {
    Mat j(2, 2);
    j << 0.0, 1.0, -1.0, 0.0;
    return j;
}

Mat canonical_theta(int n) {
    Mat t = Mat::Zero(2 * n, 2 * n);
    for (int k = 0; k < n; ++k) t.block(2 * k, 2 * k, 2, 2) = symplectic_unit();
    return t;
}

NoiseModel NoiseModel::make(int m) {
    NoiseModel nm;
    nm.m = m;
    nm.J = canonical_theta(m);
    nm.Omega = CMat::Identity(2 * m, 2 * m) + cplx(0.0, 1.0) * nm.J.cast<cplx>();
    return nm;
}

EnergyBlocks::EnergyBlocks(const Mat& R0, std::vector<Mat> positive)
    : r0_(0.5 * (R0 + R0.transpose())), pos_(std::move(positive)) {
    inputAsym_ = R0.size() == 0 ? 0.0 : (R0 - R0.transpose()).cwiseAbs().maxCoeff();
}

Mat EnergyBlocks::at(int l) const {
    if (l == 0) return r0_;
    if (std::abs(l) > range()) return Mat::Zero(order(), order());
    return l > 0 ? pos_[static_cast<size_t>(l - 1)] : Mat(pos_[static_cast<size_t>(-l - 1)].transpose());
}

Mat WeightSequence::at(int k) const {
    if (std::abs(k) > lag()) return Mat::Zero(sigma[0].rows(), sigma[0].cols());
    return k >= 0 ? sigma[static_cast<size_t>(k)] : Mat(sigma[static_cast<size_t>(-k)].transpose());
}

bool ValidationReport::mentions(const std::string& field) const {
    return std::any_of(violations.begin(), violations.end(),
                       [&](const Violation& v) { return v.field == field; });
}

namespace {

std::string shape_str(Eigen::Index r, Eigen::Index c) {
    std::ostringstream os;
    os << r << "x" << c;
    return os.str();
}

class Checker {
public:
    explicit Checker(ValidationReport& r) : report_(r) {}

    void add(std::string field, std::string what, double mag, bool structural = false) {
        report_.violations.push_back({std::move(field), std::move(what), mag, structural});
    }

    // Returns true when the shape is right; records a violation otherwise.
    bool shape(const std::string& field, const Mat& m, Eigen::Index rows, Eigen::Index cols) {
        if (m.rows() == rows && m.cols() == cols) {
            if (!m.allFinite()) {
                add(field, "non-finite entries", std::numeric_limits<double>::infinity(), true);
                return false;
            }
            return true;
        }
        add(field, "shape " + shape_str(m.rows(), m.cols()) + ", expected " + shape_str(rows, cols),
            static_cast<double>(std::abs(m.rows() - rows) + std::abs(m.cols() - cols)), true);
        return false;
    }

    void ccr(const std::string& field, const CcrMatrix& c, int order) {
        if (!shape(field, c.theta, order, order)) return;
        const double asym = (c.theta + c.theta.transpose()).cwiseAbs().maxCoeff();
        if (asym > 0.0) add(field + " antisymmetry", "theta + theta^T != 0", asym);
        Eigen::JacobiSVD<Mat> svd(c.theta);
        const auto& s = svd.singularValues();
        const double smin = s.size() ? s(s.size() - 1) : 0.0;
        const double smax = s.size() ? s(0) : 0.0;
        if (smin <= kTolSingularRel * smax || smax == 0.0)
            add(field + " nonsingularity", "smallest singular value below guard", smin);
    }

    void energy(const std::string& field, const EnergyBlocks& e, int order, int range) {
        if (e.range() != range)
            add(field, "range " + std::to_string(e.range()) + ", expected " + std::to_string(range),
                std::abs(e.range() - range), true);
        shape(field + ".R0", e.R0(), order, order);
        const double scale = std::max(1.0, e.R0().size() ? e.R0().cwiseAbs().maxCoeff() : 0.0);
        if (e.inputAsymmetry() > 1e-12 * scale)
            add(field + ".R0 symmetry", "R0 != R0^T (stored symmetrized)", e.inputAsymmetry());
        for (int l = 1; l <= e.range(); ++l)
            shape(field + ".R" + std::to_string(l), e.positive()[static_cast<size_t>(l - 1)], order,
                  order);
    }

private:
    ValidationReport& report_;
};

}  // namespace

namespace {

ValidationReport validate_impl(const NetworkSpec& spec, bool numeric) {
    ValidationReport report;
    Checker ck(report);
    const NodeDims& d = spec.dims;

    for (auto [name, v] : {std::pair{"dims.n1", d.n1}, {"dims.n2", d.n2}, {"dims.m1", d.m1},
                           {"dims.m2", d.m2}})
        if (v < 1) ck.add(name, "must be >= 1", 1.0 - v, true);
    for (auto [name, v] : {std::pair{"dims.d1", d.d1}, {"dims.d2", d.d2}, {"dims.dTilde", d.dTilde}})
        if (v < 0) ck.add(name, "must be >= 0", -v, true);
    if (!report.ok()) return report;

    const int p = 2 * d.n1, c = 2 * d.n2;
    ck.ccr("theta1", spec.theta1, p);
    ck.ccr("theta2", spec.theta2, c);
    ck.energy("plantEnergy", spec.plantEnergy, p, d.d1);
    ck.energy("controller.energy", spec.controller.energy, c, d.d2);
    ck.shape("M1", spec.M1, 2 * d.m1, p);
    ck.shape("M2", spec.M2, 2 * d.m2, c);
    if (spec.noise1.m != d.m1) ck.add("noise1", "channel count differs from dims.m1", 1.0, true);
    if (spec.noise2.m != d.m2) ck.add("noise2", "channel count differs from dims.m2", 1.0, true);

    const auto& cp = spec.controller.coupling;
    if (static_cast<int>(cp.size()) != 2 * d.dTilde + 1) {
        ck.add("controller.coupling", "expected " + std::to_string(2 * d.dTilde + 1) + " blocks",
               std::abs(static_cast<double>(cp.size()) - (2 * d.dTilde + 1)), true);
    } else {
        for (int l = -d.dTilde; l <= d.dTilde; ++l)
            ck.shape("controller.coupling.Rt" + std::to_string(l), cp[static_cast<size_t>(l + d.dTilde)], p, c);
    }

    const auto& sig = spec.weights.sigma;
    if (sig.empty()) {
        ck.add("weights", "sigma0 missing", 1.0, true);
        return report;
    }
    bool shapesOk = true;
    for (size_t k = 0; k < sig.size(); ++k)
        shapesOk &= ck.shape("weights.sigma" + std::to_string(k), sig[k], 2 * p, 2 * p);
    if (!shapesOk) return report;

    if (!numeric) return report;
    const double asym = (sig[0] - sig[0].transpose()).cwiseAbs().maxCoeff();
    if (asym > 0.0) ck.add("weights.sigma0 symmetry", "sigma0 != sigma0^T", asym);

    const double tolPsd = kTolPsdRel * sig[0].operatorNorm();
    double worst = 0.0;
    for (int j = 0; j < kPsdGrid; ++j) {
        const cplx z = std::polar(1.0, 2.0 * std::numbers::pi * j / kPsdGrid);
        Eigen::SelfAdjointEigenSolver<CMat> es(sigma_of_z(spec.weights, z), Eigen::EigenvaluesOnly);
        worst = std::min(worst, es.eigenvalues().minCoeff());
    }
    if (worst < -tolPsd) ck.add("weights psd", "Sigma_z has a negative eigenvalue", -worst);
    return report;
}

}  // namespace

ValidationReport validate_spec(const NetworkSpec& spec) { return validate_impl(spec, true); }

void require_consistent_dims(const NetworkSpec& spec) {
    const ValidationReport r = validate_impl(spec, false);
    for (const Violation& v : r.violations)
        if (v.structural) throw DimensionMismatch(v.field + ": " + v.what);
}

Mat b_from_coupling(const CcrMatrix& theta, const Mat& M) {
    if (theta.theta.rows() != theta.theta.cols() || M.cols() != theta.theta.rows())
        throw DimensionMismatch("b_from_coupling: theta is " +
                                shape_str(theta.theta.rows(), theta.theta.cols()) + ", M is " +
                                shape_str(M.rows(), M.cols()));
    return 2.0 * theta.theta * M.transpose();
}

std::vector<Mat> drift_blocks(const CcrMatrix& theta, const EnergyBlocks& energy, const Mat& B,
                              const NoiseModel& noise) {
    const Mat& th = theta.theta;
    const Eigen::Index n = th.rows();
    if (th.cols() != n || energy.order() != n || B.rows() != n || B.cols() != noise.J.rows())
        throw DimensionMismatch("drift_blocks: inconsistent theta/energy/B/noise sizes");

    Eigen::JacobiSVD<Mat> svd(th, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& s = svd.singularValues();
    if (n == 0 || s(n - 1) <= kTolSingularRel * s(0))
        throw SingularTheta("drift_blocks: theta is numerically singular");

    const int d = energy.range();
    std::vector<Mat> out(static_cast<size_t>(2 * d + 1));
    for (int l = -d; l <= d; ++l) out[static_cast<size_t>(l + d)] = 2.0 * th * energy.at(l);
    const Mat thInv = svd.solve(Mat::Identity(n, n));
    out[static_cast<size_t>(d)] -= 0.5 * B * noise.J * B.transpose() * thInv;
    return out;
}

CouplingDrift coupling_drift(const CcrMatrix& theta1, const CcrMatrix& theta2,
                             const std::vector<Mat>& rt) {
    CouplingDrift cd;
    for (const Mat& r : rt) {
        if (r.rows() != theta1.theta.rows() || r.cols() != theta2.theta.rows())
            throw DimensionMismatch("coupling_drift: R~ is " + shape_str(r.rows(), r.cols()));
        cd.plantSide.push_back(2.0 * theta1.theta * r);
        cd.controllerSide.push_back(2.0 * theta2.theta * r.transpose());
    }
    return cd;
}

namespace {

// Finds an increasing index selection s with J(s, s) == target.
bool find_selection(const Mat& J, const Mat& target, std::vector<int>& sel, int next) {
    const int want = static_cast<int>(target.rows());
    const int k = static_cast<int>(sel.size());
    if (k == want) return true;
    for (int i = next; i < J.rows(); ++i) {
        bool fits = std::abs(J(i, i) - target(k, k)) <= 1e-12;
        for (int a = 0; a < k && fits; ++a)
            fits = std::abs(J(sel[static_cast<size_t>(a)], i) - target(a, k)) <= 1e-12 &&
                   std::abs(J(i, sel[static_cast<size_t>(a)]) - target(k, a)) <= 1e-12;
        if (!fits) continue;
        sel.push_back(i);
        if (find_selection(J, target, sel, i + 1)) return true;
        sel.pop_back();
    }
    return false;
}

}  // namespace

OutputConsistency output_consistency(const CcrMatrix& theta, const Mat& B, const Mat& C,
                                     const Mat& D, const NoiseModel& noise) {
    OutputConsistency oc;
    const Mat djd = D * noise.J * D.transpose();
    std::vector<int> sel;
    if (djd.rows() <= noise.J.rows() && find_selection(noise.J, djd, sel, 0)) oc.selection = sel;
    oc.residual = (theta.theta * C.transpose() + B * noise.J * D.transpose()).norm();
    return oc;
}

Mat cost_output_matrix(int n1, const Mat& rt0) {
    const Eigen::Index p = 2 * n1;
    Mat e = Mat::Zero(2 * p, p + rt0.cols());
    e.topLeftCorner(p, p).setIdentity();
    if (rt0.rows() != p) throw DimensionMismatch("cost_output_matrix: R~_0 must have 2*n1 rows");
    e.bottomRightCorner(p, rt0.cols()) = rt0;
    return e;
}

}  // namespace tinet
