#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tinet/types.hpp"

namespace tinet {

/// Per-node sizes and interaction ranges of the plant (1) and controller (2).
struct NodeDims {
    int n1 = 1;  // plant modes; plant variables have length 2*n1
    int n2 = 1;  // controller modes
    int m1 = 1;  // plant field channels; noise length 2*m1
    int m2 = 1;
    int d1 = 0;  // plant inter-node range
    int d2 = 0;  // controller inter-node range
    int dTilde = 0;  // plant-controller coupling range
};

/// The 2x2 symplectic unit [[0, 1], [-1, 0]].
Mat symplectic_unit();

/// I_n (x) J, the canonical CCR matrix of order 2n.
Mat canonical_theta(int n);

struct CcrMatrix {
    Mat theta;

    static CcrMatrix canonical(int n) { return {canonical_theta(n)}; }
    int order() const { return static_cast<int>(theta.rows()); }
};

/// Quantum Ito structure of m field channels: J = I_m (x) J, Omega = I + iJ.
struct NoiseModel {
    int m = 0;
    Mat J;
    CMat Omega;

    static NoiseModel make(int m);
};

/// Energy matrices R_0 (symmetric) and R_1..R_d. Offsets -l are R_l^T and are
/// never stored.
class EnergyBlocks {
public:
    EnergyBlocks() = default;
    /// Symmetrizes R0; the asymmetry of the input is kept for reporting.
    EnergyBlocks(const Mat& R0, std::vector<Mat> positive);

    const Mat& R0() const { return r0_; }
    const std::vector<Mat>& positive() const { return pos_; }
    int range() const { return static_cast<int>(pos_.size()); }
    int order() const { return static_cast<int>(r0_.rows()); }

    /// R_l for -range <= l <= range.
    Mat at(int l) const;

    /// max |R0_in - R0_in^T| of the matrix passed to the constructor.
    double inputAsymmetry() const { return inputAsym_; }

private:
    Mat r0_;
    std::vector<Mat> pos_;
    double inputAsym_ = 0.0;
};

/// Controller decision variable: controller energies plus coupling matrices
/// R~_l for |l| <= dTilde (stored at index l + dTilde).
struct ControllerPoint {
    EnergyBlocks energy;
    std::vector<Mat> coupling;

    int couplingRange() const { return static_cast<int>(coupling.size() - 1) / 2; }
    const Mat& rt0() const { return coupling[coupling.size() / 2]; }
    Mat& rt0() { return coupling[coupling.size() / 2]; }
    const Mat& rt(int l) const { return coupling.at(static_cast<size_t>(l + couplingRange())); }
};

/// Finitely supported weights sigma_0..sigma_K; sigma_{-k} = sigma_k^T implied.
struct WeightSequence {
    std::vector<Mat> sigma;

    int lag() const { return static_cast<int>(sigma.size()) - 1; }
    Mat at(int k) const;
};

struct NetworkSpec {
    NodeDims dims;
    CcrMatrix theta1;
    CcrMatrix theta2;
    EnergyBlocks plantEnergy;
    Mat M1;  // 2m1 x 2n1
    Mat M2;  // 2m2 x 2n2
    NoiseModel noise1;
    NoiseModel noise2;
    WeightSequence weights;
    ControllerPoint controller;
};

struct Violation {
    std::string field;
    std::string what;
    double magnitude = 0.0;
    bool structural = false;  // shape/size problem: numeric operations cannot proceed
};

struct ValidationReport {
    std::vector<Violation> violations;

    bool ok() const { return violations.empty(); }
    bool mentions(const std::string& field) const;
};

inline constexpr double kTolSingularRel = 1e-10;
inline constexpr double kTolPsdRel = 1e-9;
inline constexpr int kPsdGrid = 512;

ValidationReport validate_spec(const NetworkSpec& spec);

/// Throws DimensionMismatch on the first inconsistent member.
void require_consistent_dims(const NetworkSpec& spec);

/// B = 2 Theta M^T.
Mat b_from_coupling(const CcrMatrix& theta, const Mat& M);

/// A_l for l = -d..d, returned at index l + d.
std::vector<Mat> drift_blocks(const CcrMatrix& theta, const EnergyBlocks& energy, const Mat& B,
                              const NoiseModel& noise);

struct CouplingDrift {
    std::vector<Mat> plantSide;       // A~_{1,l} = 2 Theta_1 R~_l
    std::vector<Mat> controllerSide;  // A~_{2,l} = 2 Theta_2 R~_l^T
};

/// Both families for |l| <= dTilde at index l + dTilde; `rt` holds R~_l the same way.
CouplingDrift coupling_drift(const CcrMatrix& theta1, const CcrMatrix& theta2,
                             const std::vector<Mat>& rt);

struct OutputConsistency {
    double residual = 0.0;
    /// Row/column selection of J that reproduces D J D^T, if one exists.
    std::optional<std::vector<int>> selection;
};

/// ||Theta C^T + B J D^T||_F together with the D J D^T submatrix check.
OutputConsistency output_consistency(const CcrMatrix& theta, const Mat& B, const Mat& C,
                                     const Mat& D, const NoiseModel& noise);

/// E = blkdiag(I_{2 n1}, R~_0).
Mat cost_output_matrix(int n1, const Mat& rt0);

}  // namespace tinet
