#pragma once

#include "tinet/types.hpp"

namespace tinet {

inline constexpr double kTolHurwitz = 1e-9;
inline constexpr double kTolAle = 1e-10;

enum class AleSide {
    controllability,  // A X + X A^* + V = 0
    observability,    // A^* X + X A + V = 0
};

struct AleProblem {
    CMat A;
    CMat V;
    AleSide side = AleSide::controllability;
};

struct AleSolution {
    CMat X;                      // Hermitian (symmetrized)
    double residual = 0.0;       // ||A X + X A^* + V||_F after symmetrization
    double hermitianDefect = 0.0;  // ||X - X^*||_F before symmetrization
    double maxRealEigenvalue = 0.0;
};

/// Complex Schur (Bartels-Stewart) solve of a continuous-time ALE.
/// Throws NotHurwitz when A has an eigenvalue with real part >= -kTolHurwitz,
/// IllConditioned when the residual misses kTolAle * (||A|| ||X|| + ||V||).
AleSolution solve_ale(const AleProblem& p);

}  // namespace tinet
