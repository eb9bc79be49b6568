#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace tinet {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXd;
using CMat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXd;

// Error hierarchy. code() is the machine-readable tag surfaced by the CLI.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& what)
        : std::runtime_error(what), code_(std::move(code)) {}
    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

struct DimensionMismatch : Error {
    explicit DimensionMismatch(const std::string& w) : Error("DimensionMismatch", w) {}
};

struct InvalidArgument : Error {
    explicit InvalidArgument(const std::string& w) : Error("InvalidArgument", w) {}
};

struct SingularTheta : Error {
    explicit SingularTheta(const std::string& w) : Error("SingularTheta", w) {}
};

struct OffCircle : Error {
    explicit OffCircle(const std::string& w) : Error("OffCircle", w) {}
};

struct NotHurwitz : Error {
    NotHurwitz(const std::string& w, double maxRealEig)
        : Error("NotHurwitz", w), maxRealEigenvalue(maxRealEig) {}
    double maxRealEigenvalue;
};

struct IllConditioned : Error {
    IllConditioned(const std::string& w, double residual)
        : Error("IllConditioned", w), achievedResidual(residual) {}
    double achievedResidual;
};

struct NotStabilizing : Error {
    NotStabilizing(const std::string& w, double m) : Error("NotStabilizing", w), margin(m) {}
    double margin;
};

struct Inconclusive : Error {
    Inconclusive(const std::string& w, double m) : Error("Inconclusive", w), margin(m) {}
    double margin;
};

struct NoConvergence : Error {
    explicit NoConvergence(const std::string& w) : Error("NoConvergence", w) {}
};

struct UnsupportedCoupling : Error {
    explicit UnsupportedCoupling(const std::string& w) : Error("UnsupportedCoupling", w) {}
};

struct StepLeavesStabilizingSet : Error {
    explicit StepLeavesStabilizingSet(const std::string& w)
        : Error("StepLeavesStabilizingSet", w) {}
};

struct ParseError : Error {
    explicit ParseError(const std::string& w) : Error("ParseError", w) {}
};

}  // namespace tinet
