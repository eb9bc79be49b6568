#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "oracles.hpp"
#include "tinet/lyapunov.hpp"

using namespace tinet;

TEST_CASE("Schur solve agrees with the Kronecker-sum solve") {
    testing::Rng rng(100);
    for (int n = 1; n <= 12; ++n) {
        const CMat A = testing::random_hurwitz(rng, n);
        const CMat V = testing::random_psd(rng, n, n);
        const AleSolution s = solve_ale({A, V, AleSide::controllability});
        const CMat ref = testing::kron_ale(A, V);
        CHECK((s.X - ref).norm() <= 1e-9 * ref.norm());
        CHECK(s.residual <= 1e-10 * (A.norm() * s.X.norm() + V.norm()));
        CHECK(s.maxRealEigenvalue < 0.0);
        CHECK((s.X - s.X.adjoint()).norm() == 0.0);
    }
}

TEST_CASE("observability side solves A^* X + X A + V = 0") {
    testing::Rng rng(7);
    const CMat A = testing::random_hurwitz(rng, 6);
    const CMat V = testing::random_psd(rng, 6, 2);
    const AleSolution s = solve_ale({A, V, AleSide::observability});
    CHECK((A.adjoint() * s.X + s.X * A + V).norm() < 1e-12 * (1.0 + s.X.norm()));
    const CMat ref = testing::kron_ale(CMat(A.adjoint()), V);
    CHECK((s.X - ref).norm() <= 1e-9 * ref.norm());
}

TEST_CASE("PSD forcing gives a PSD solution, including low rank") {
    testing::Rng rng(55);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 2 + trial % 9;
        const CMat A = testing::random_hurwitz(rng, n, 0.05);
        const CMat V = testing::random_psd(rng, n, 1);
        const AleSolution s = solve_ale({A, V, AleSide::controllability});
        Eigen::SelfAdjointEigenSolver<CMat> es(s.X, Eigen::EigenvaluesOnly);
        CHECK(es.eigenvalues().minCoeff() >= -1e-10);
    }
}

TEST_CASE("non-Hurwitz matrices are rejected with the offending eigenvalue") {
    CMat A = CMat::Identity(3, 3) * -1.0;
    A(2, 2) = 0.5;
    try {
        solve_ale({A, CMat::Identity(3, 3), AleSide::controllability});
        FAIL("expected NotHurwitz");
    } catch (const NotHurwitz& e) {
        CHECK(e.maxRealEigenvalue == doctest::Approx(0.5));
        CHECK(e.code() == "NotHurwitz");
    }
    CMat marginal = CMat::Zero(2, 2);
    marginal(0, 1) = 1.0;
    marginal(1, 0) = -1.0;
    CHECK_THROWS_AS(solve_ale({marginal, CMat::Identity(2, 2), AleSide::controllability}), NotHurwitz);
}

TEST_CASE("dimension checks") {
    CHECK_THROWS_AS(solve_ale({-CMat::Identity(2, 2), CMat::Identity(3, 3), AleSide::controllability}),
                    DimensionMismatch);
    CHECK_THROWS_AS(solve_ale({CMat::Zero(2, 3), CMat::Identity(2, 2), AleSide::controllability}),
                    DimensionMismatch);
}

TEST_CASE("scalar case in closed form") {
    const cplx a(-0.3, 2.0);
    const AleSolution s = solve_ale({CMat::Constant(1, 1, a), CMat::Constant(1, 1, 1.2), AleSide::controllability});
    CHECK(std::abs(s.X(0, 0) - cplx(1.2 / 0.6, 0.0)) < 1e-15);
}
