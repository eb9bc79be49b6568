#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "tinet/io.hpp"
#include "tinet/stability.hpp"

using namespace tinet;

namespace {

NetworkSpec bundled() { return io::load_spec(TINET_DATA_DIR "/single_mode.json"); }

}  // namespace

TEST_CASE("bundled example is stabilizing; margin matches a brute-force scan") {
    const NetworkSpec s = bundled();
    const StabilityReport r = stability_sweep(s, 64);
    CHECK(r.verdict == Verdict::stabilizing);
    CHECK(r.isStabilizing);
    CHECK(r.gridSize >= 64);
    const double fine = testing::fine_margin(assemble(s), 4096);
    CHECK(std::abs(r.margin - fine) < 1e-8);
    CHECK(r.spectralRadiusExp() == doctest::Approx(std::exp(r.margin)));
    CHECK(std::abs(std::abs(r.worstZ) - 1.0) < 1e-15);
    CHECK_NOTHROW(require_stabilizing(r));
}

TEST_CASE("random instances: sweep margin equals brute force") {
    testing::Rng rng(77);
    for (int t = 0; t < 10; ++t) {
        const NetworkSpec s = testing::random_single_mode(rng);
        const StabilityReport r = stability_sweep(s, 32);
        const double fine = testing::fine_margin(assemble(s), 2048);
        CHECK(r.margin >= fine - 1e-8);  // the sweep never misses the brute-force maximum
        CHECK(r.margin - fine < 1e-6);
    }
}

TEST_CASE("anti-damped plant is not stabilizing") {
    NetworkSpec s = bundled();
    s.M1.row(0) *= -1.0;  // det(M1) < 0 flips the sign of the damping
    const StabilityReport r = stability_sweep(s, 64);
    CHECK(r.verdict == Verdict::notStabilizing);
    CHECK_FALSE(r.isStabilizing);
    CHECK(r.margin > 0.0);
    CHECK_THROWS_AS(require_stabilizing(r), NotStabilizing);
}

TEST_CASE("undamped uncoupled plant is inconclusive") {
    NetworkSpec s = bundled();
    s.plantEnergy = EnergyBlocks(Mat::Identity(2, 2), {Mat::Zero(2, 2)});  // oscillator ring
    s.M1.setZero();
    s.controller.rt0().setZero();
    const StabilityReport r = stability_sweep(s, 64);
    CHECK(r.verdict == Verdict::inconclusive);
    CHECK(std::abs(r.margin) <= kTolHurwitz);
    CHECK_THROWS_AS(require_stabilizing(r), Inconclusive);
}

TEST_CASE("initial grid bounds") {
    CHECK_THROWS_AS(stability_sweep(bundled(), 8), InvalidArgument);
}

TEST_CASE("margin curve") {
    const ClosedLoopBlocks b = assemble(bundled());
    const auto curve = margin_curve(b, 64);
    REQUIRE(curve.size() == 64);
    double worst = -1e300;
    for (size_t k = 0; k < curve.size(); ++k) {
        CHECK(curve[k].phi == doctest::Approx(2.0 * M_PI * static_cast<double>(k) / 64.0));
        worst = std::max(worst, curve[k].maxRealEig);
    }
    CHECK(worst <= stability_sweep(bundled(), 64).margin + 1e-15);
    // Conjugate points carry the same eigenvalue real parts.
    for (size_t k = 1; k < 32; ++k) CHECK(curve[k].maxRealEig == doctest::Approx(curve[64 - k].maxRealEig).epsilon(1e-12));
}

TEST_CASE("serial and parallel sweeps agree bitwise") {
    testing::Rng rng(5);
    for (int t = 0; t < 5; ++t) {
        const NetworkSpec s = testing::random_single_mode(rng);
        const StabilityReport a = stability_sweep(s, 64, Backend::serial);
        const StabilityReport b = stability_sweep(s, 64, Backend::openmp);
        CHECK(a.margin == b.margin);
        CHECK(a.worstZ == b.worstZ);
        CHECK(a.gridSize == b.gridSize);
    }
}
