#include "tinet/lyapunov.hpp"

#include <sstream>

#include <Eigen/Eigenvalues>

namespace tinet {

namespace {

// Solves T Y + Y T^* + F = 0 with T upper triangular, column by column from
// the right: (T + conj(t_kk) I) y_k = -f_k - sum_{j>k} conj(t_kj) y_j.
CMat triangular_sylvester(const CMat& T, const CMat& F) {
    const Eigen::Index n = T.rows();
    CMat Y = CMat::Zero(n, n);
    CMat shifted = T;
    for (Eigen::Index k = n - 1; k >= 0; --k) {
        Eigen::VectorXcd rhs = -F.col(k);
        for (Eigen::Index j = k + 1; j < n; ++j) rhs -= std::conj(T(k, j)) * Y.col(j);
        const cplx shift = std::conj(T(k, k));
        shifted.diagonal() = T.diagonal().array() + shift;
        Y.col(k) = shifted.triangularView<Eigen::Upper>().solve(rhs);
    }
    return Y;
}

double residual_of(const CMat& A, const CMat& X, const CMat& V) {
    return (A * X + X * A.adjoint() + V).norm();
}

}  // namespace

AleSolution solve_ale(const AleProblem& p) {
    const Eigen::Index n = p.A.rows();
    if (p.A.cols() != n || p.V.rows() != n || p.V.cols() != n)
        throw DimensionMismatch("solve_ale: A and V must be square of equal order");

    // The observability equation is the controllability one for A^*.
    const CMat A = p.side == AleSide::controllability ? p.A : CMat(p.A.adjoint());

    AleSolution sol;
    if (n == 0) {
        sol.X = CMat(0, 0);
        sol.maxRealEigenvalue = -std::numeric_limits<double>::infinity();
        return sol;
    }

    Eigen::ComplexSchur<CMat> schur(A, true);
    if (schur.info() != Eigen::Success) throw IllConditioned("solve_ale: Schur reduction failed", -1.0);
    const CMat& T = schur.matrixT();
    const CMat& U = schur.matrixU();

    sol.maxRealEigenvalue = T.diagonal().real().maxCoeff();
    if (sol.maxRealEigenvalue >= -kTolHurwitz) {
        std::ostringstream os;
        os << "solve_ale: A is not Hurwitz (max real eigenvalue " << sol.maxRealEigenvalue << ")";
        throw NotHurwitz(os.str(), sol.maxRealEigenvalue);
    }

    const CMat Y = triangular_sylvester(T, U.adjoint() * p.V * U);
    CMat X = U * Y * U.adjoint();
    sol.hermitianDefect = (X - X.adjoint()).norm();
    X = (0.5 * (X + X.adjoint())).eval();

    double res = residual_of(A, X, p.V);
    const double scale = A.norm() * X.norm() + p.V.norm();
    if (res > kTolAle * scale) {
        // One step of iterative refinement on the residual equation.
        const CMat R = A * X + X * A.adjoint() + p.V;
        CMat dX = U * triangular_sylvester(T, U.adjoint() * R * U) * U.adjoint();
        dX = (0.5 * (dX + dX.adjoint())).eval();
        X += dX;
        res = residual_of(A, X, p.V);
    }
    if (res > kTolAle * scale) {
        std::ostringstream os;
        os << "solve_ale: residual " << res << " exceeds target " << kTolAle * scale;
        throw IllConditioned(os.str(), res);
    }
    sol.X = std::move(X);
    sol.residual = res;
    return sol;
}

}  // namespace tinet
