// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <Eigen/Eigenvalues>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "tinet/cost.hpp"
#include "tinet/finite_oracle.hpp"
#include "tinet/io.hpp"
#include "tinet/lyapunov.hpp"
#include "tinet/synthesis.hpp"

using namespace tinet;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            if (pass) detail << "first failure: " << what << "; ";
            pass = false;
        }
    }
};

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

std::string sci(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2e", x);
    return buf;
}

constexpr int kInstances = 20;
constexpr std::uint64_t kInstanceSeed = 2024;

const std::vector<NetworkSpec>& instance_set() {
    static const std::vector<NetworkSpec> set = testing::stabilizing_instances(kInstanceSeed, kInstances);
    return set;
}

NetworkSpec bundled() { return io::load_spec(TINET_DATA_DIR "/single_mode.json"); }

// DFT blocks of the explicit ring covariance against N S_z.
void ring_dft_blocks(Outcome& o) {
    double worstDiag = 0.0, worstOff = 0.0;
    int checked = 0;
    for (const NetworkSpec& s : instance_set()) {
        const ClosedLoopBlocks b = assemble(s);
        for (int N : {4, 8, 16}) {
            const FiniteNetwork net = build_finite(s, N);
            const AleSolution cov = finite_covariance(net);
            const auto zs = FrequencyGrid::roots_of_unity(N).points;
            for (const cplx z : zs) {
                const CMat Sz = solve_ale({symbol_A(b, z), b.noise, AleSide::controllability}).X;
                const double scale = N * Sz.norm();
                for (const cplx v : zs) {
                    const CMat blk = dft_block(net, cov.X, z, v);
                    if (z == v)
                        worstDiag = std::max(worstDiag, (blk - static_cast<double>(N) * Sz).norm() / scale);
                    else
                        worstOff = std::max(worstOff, blk.norm() / scale);
                }
            }
            ++checked;
        }
    }
    o.require(worstDiag <= 1e-8, "diagonal block error " + sci(worstDiag));
    o.require(worstOff <= 1e-8, "off-diagonal block size " + sci(worstOff));
    o.detail << checked << " (instance, N) pairs; diag rel err " << sci(worstDiag) << ", off-diag rel "
             << sci(worstOff);
}

void cost_equivalence(Outcome& o) {
    double worstDirect = 0.0;
    for (const NetworkSpec& s : instance_set())
        for (int N : {4, 8, 16}) worstDirect = std::max(worstDirect, rel(finite_cost(s, N).value, finite_cost_direct(build_finite(s, N))));
    o.require(worstDirect <= 1e-8, "spectral vs explicit ring " + sci(worstDirect));

    // Lag 1 set plus a lag-2 set.
    std::vector<NetworkSpec> specs = instance_set();
    testing::InstanceOptions lag2;
    lag2.weightLag = 2;
    for (NetworkSpec& s : testing::stabilizing_instances(kInstanceSeed + 1, 5, -0.1, lag2)) specs.push_back(std::move(s));

    int nonMonotone = 0, nonMonotoneFrom16 = 0;
    std::string where;
    double worstFinal = 0.0;
    for (size_t i = 0; i < specs.size(); ++i) {
        const double E = thermo_cost(specs[i]).value;
        double prev = std::numeric_limits<double>::infinity();
        for (int N = 8; N <= 2048; N *= 2) {
            const double err = std::abs(finite_cost(specs[i], N).value - E);
            if (!(err < prev)) {
                ++nonMonotone;
                if (N > 16) ++nonMonotoneFrom16;
                where += " (instance " + std::to_string(i) + ", N=" + std::to_string(N) + ")";
            }
            prev = err;
        }
        worstFinal = std::max(worstFinal, prev / E);
    }
    o.require(nonMonotone == 0, std::to_string(nonMonotone) + " non-decreasing steps in |E_N - E| at" + where);
    o.require(worstFinal <= 1e-5, "|E_2048 - E| / E = " + sci(worstFinal));
    o.detail << "finite vs explicit " << sci(worstDirect) << "; " << specs.size()
             << " instances (lag 1 and 2), monotone violations " << nonMonotone << " (" << nonMonotoneFrom16
             << " from N=16 on), max |E_2048-E|/E " << sci(worstFinal);
}

void gradient_differences(Outcome& o) {
    double worst5 = 0.0, worstSlope = 1e300;
    int floorLimited = 0;
    for (const NetworkSpec& s : instance_set()) {
        std::vector<double> errs;
        for (double h : {1e-3, 1e-4, 1e-5}) errs.push_back(grad_check(s, h).maxRelError);
        worst5 = std::max(worst5, errs[2]);
        // Second order: a tenfold smaller step gives a hundredfold smaller error
        // until rounding takes over near the 1e-5 step.
        const double slope = std::log10(errs[0] / errs[1]);
        worstSlope = std::min(worstSlope, slope);
        if (errs[2] > errs[1] / 50.0) ++floorLimited;
        o.require(errs[2] <= errs[1], "error grows from h=1e-4 to h=1e-5");
    }
    o.require(worst5 <= 1e-6, "relative error at h=1e-5 " + sci(worst5));
    o.require(worstSlope >= 1.8, "observed order between h=1e-3 and 1e-4 is " + sci(worstSlope));
    o.detail << instance_set().size() << " instances; max rel err at h=1e-5 " << sci(worst5)
             << "; min observed order (1e-3 -> 1e-4) " << sci(worstSlope) << "; rounding-limited at 1e-5: "
             << floorLimited;
}

void stationarity(Outcome& o) {
    const NetworkSpec spec = bundled();
    const DescentConfig cfg = io::config_from_json(io::read_file(TINET_DATA_DIR "/descent.json"));
    const DescentResult res = descend(spec, cfg);
    const auto& recs = res.trace.records;
    const double g0 = recs.front().gradNorm;
    const double tol = 1e-6 * (1.0 + g0);
    double worstResidual = res.finalReport.optimality.coupling;
    for (const double e : res.finalReport.optimality.energy) worstResidual = std::max(worstResidual, e);
    o.require(res.trace.termination == Termination::converged,
              std::string("termination ") + to_string(res.trace.termination));
    o.require(worstResidual <= tol, "optimality residual " + sci(worstResidual));

    int increases = 0;
    for (size_t k = 1; k < recs.size(); ++k)
        if (!(recs[k].cost < recs[k - 1].cost)) ++increases;
    o.require(increases == 0, std::to_string(increases) + " non-decreasing accepted steps");

    // Independent re-check of every iterate: sweep plus brute-force scan.
    int unstable = 0;
    double worstMargin = -1e300;
    o.require(res.iterates.size() == recs.size(), "iterate count differs from trace");
    for (const Vec& x : res.iterates) {
        const NetworkSpec it = with_controller(spec, controller_from_params(spec.controller, x));
        const StabilityReport r = stability_sweep(it, 128);
        const double brute = testing::fine_margin(assemble(it), 1024);
        if (!r.isStabilizing || brute >= -kTolHurwitz) ++unstable;
        worstMargin = std::max(worstMargin, std::max(r.margin, brute));
    }
    o.require(unstable == 0, std::to_string(unstable) + " iterates fail the stability sweep");
    o.detail << recs.size() - 1 << " iterations, cost " << recs.front().cost << " -> " << recs.back().cost
             << "; max optimality residual " << sci(worstResidual) << " (tol " << sci(tol)
             << "); worst iterate margin " << sci(worstMargin);
}

void ale_solver(Outcome& o) {
    testing::Rng rng(515);
    double worstRef = 0.0, worstRes = 0.0, minEig = 1e300;
    int solves = 0;
    for (int trial = 0; trial < 10; ++trial) {
        for (int n = 1; n <= 12; ++n) {
            const CMat A = testing::random_hurwitz(rng, n, trial % 2 ? 0.01 : 0.1);
            const CMat V = testing::random_psd(rng, n, 1 + (trial * n) % n);
            const AleSolution s = solve_ale({A, V, AleSide::controllability});
            const CMat ref = testing::kron_ale(A, V);
            worstRef = std::max(worstRef, (s.X - ref).norm() / ref.norm());
            worstRes = std::max(worstRes, s.residual / (2.0 * A.norm() * s.X.norm() + V.norm()));
            Eigen::SelfAdjointEigenSolver<CMat> es(s.X, Eigen::EigenvaluesOnly);
            minEig = std::min(minEig, es.eigenvalues().minCoeff());
            ++solves;
        }
    }
    o.require(worstRef <= 1e-9, "Schur vs Kronecker " + sci(worstRef));
    o.require(worstRes <= 1e-10, "scaled residual " + sci(worstRes));
    o.require(minEig >= -1e-10, "min eigenvalue " + sci(minEig));
    o.detail << solves << " solves, order 1..12; rel diff " << sci(worstRef) << ", scaled residual "
             << sci(worstRes) << ", min eig " << sci(minEig);
}

void quadrature_and_residue(Outcome& o) {
    double worstQuad = 0.0, worstResidue = 0.0;
    for (const NetworkSpec& s : instance_set()) {
        const double coarse = thermo_cost(s, 256).value;
        const double fine = thermo_cost(s, 4096).value;
        worstQuad = std::max(worstQuad, rel(coarse, fine));

        // Residue form: sum_k tr(sigma_k c_k) with c_k the Laurent coefficients
        // of E S_z E^T, extracted by FFT on a fine grid.
        constexpr int P = 4096;
        const Mat E = cost_output_matrix(s.dims.n1, s.controller.rt0());
        const ClosedLoopBlocks b = assemble(s);
        std::vector<CMat> samples;
        for (const cplx z : FrequencyGrid::uniform(P).points) {
            const CMat Sz = solve_ale({symbol_A(b, z), b.noise, AleSide::controllability}).X;
            samples.push_back(E.cast<cplx>() * Sz * E.transpose().cast<cplx>());
        }
        const int K = s.weights.lag();
        const std::vector<CMat> c = testing::laurent_fft(samples, K);
        cplx residue = 0.0;
        for (int k = -K; k <= K; ++k)
            residue += (s.weights.at(k).cast<cplx>() * c[static_cast<size_t>(k + K)]).trace();
        worstResidue = std::max(worstResidue, std::abs(residue.real() - coarse) / coarse);
        worstResidue = std::max(worstResidue, std::abs(residue.imag()) / coarse);
    }
    o.require(worstQuad <= 1e-9, "256 vs 4096 points " + sci(worstQuad));
    o.require(worstResidue <= 1e-10, "contour mean vs Laurent extraction " + sci(worstResidue));
    o.detail << instance_set().size() << " instances (margin <= -0.1); 256 vs 4096 rel " << sci(worstQuad)
             << "; contour vs Laurent rel " << sci(worstResidue);
}

void structural_invariants(Outcome& o) {
    double symbolConj = 0.0, qConj = 0.0, sConj = 0.0, herm = 0.0, minEig = 1e300, grad0Asym = 0.0;
    double costImag = 0.0, gradImag = 0.0;
    std::vector<NetworkSpec> specs = instance_set();
    specs.push_back(bundled());
    for (const NetworkSpec& s : specs) {
        const ClosedLoopBlocks b = assemble(s);
        const CMat Vr = b.noise.real().cast<cplx>();
        for (const cplx z : FrequencyGrid::uniform(16).points) {
            const SpectralSample p = spectral_sample(s, z), q = spectral_sample(s, std::conj(z));
            symbolConj = std::max(symbolConj, (q.Az - p.Az.conjugate()).norm() + (q.SigmaZ - p.SigmaZ.conjugate()).norm());
            qConj = std::max(qConj, (q.Qz - p.Qz.conjugate()).norm() / p.Qz.norm());
            const CMat Xr = solve_ale({p.Az, Vr, AleSide::controllability}).X;
            const CMat Xrc = solve_ale({q.Az, Vr, AleSide::controllability}).X;
            sConj = std::max(sConj, (Xrc - Xr.conjugate()).norm() / Xr.norm());
            herm = std::max(herm, (p.Sz - p.Sz.adjoint()).norm() + (p.Qz - p.Qz.adjoint()).norm());
            Eigen::SelfAdjointEigenSolver<CMat> es(p.Sz, Eigen::EigenvaluesOnly), eq(p.Qz, Eigen::EigenvaluesOnly);
            minEig = std::min({minEig, es.eigenvalues().minCoeff() / p.Sz.norm(), eq.eigenvalues().minCoeff() / p.Qz.norm()});
        }
        const CostReport r = thermo_cost(s, kDefaultQuadPoints, true);
        grad0Asym = std::max(grad0Asym, (r.gradR2[0] - r.gradR2[0].transpose()).norm());
        costImag = std::max(costImag, r.imagResidue / r.value);
        gradImag = std::max(gradImag, r.gradImagResidue / r.gradientNorm());
        for (int N : {5, 16}) {
            const CostReport f = finite_cost(s, N);
            costImag = std::max(costImag, f.imagResidue / f.value);
        }
    }
    o.require(symbolConj == 0.0, "symbol conjugate symmetry " + sci(symbolConj));
    o.require(qConj <= 1e-12 && sConj <= 1e-12, "density conjugate symmetry");
    o.require(herm == 0.0, "Hermiticity of S_z, Q_z");
    o.require(minEig >= -1e-10, "PSD of S_z, Q_z: " + sci(minEig));
    o.require(grad0Asym == 0.0, "gradR2[0] symmetry");
    o.require(costImag <= 1e-10, "cost imaginary residue " + sci(costImag));
    o.require(gradImag <= 1e-10, "gradient imaginary residue " + sci(gradImag));

    // Output consistency for realizable (B, C, D) triples; a perturbed C is caught.
    testing::Rng rng(88);
    double worstRealizable = 0.0, perturbed = 1e300;
    for (int t = 0; t < 20; ++t) {
        const int n = 1 + t % 3, m = 1 + t % 2;
        const CcrMatrix th = CcrMatrix::canonical(n);
        const NoiseModel nm = NoiseModel::make(m);
        const Mat M = testing::gaussian(rng, 2 * m, 2 * n);
        const Mat B = b_from_coupling(th, M);
        const Mat D = Mat::Identity(2 * m, 2 * m).topRows(2);
        const Mat C = 2.0 * D * nm.J * M;
        const OutputConsistency oc = output_consistency(th, B, C, D, nm);
        worstRealizable = std::max(worstRealizable, oc.residual / (1.0 + B.norm() * C.norm()));
        o.require(oc.selection.has_value(), "D J D^T selection missing");
        Mat Cp = C;
        Cp(0, 0) += 0.1;
        perturbed = std::min(perturbed, output_consistency(th, B, Cp, D, nm).residual);
    }
    o.require(worstRealizable <= 1e-14, "realizable output residual " + sci(worstRealizable));
    o.require(perturbed > 1e-3, "perturbed output not detected");
    o.detail << specs.size() << " specs; symbol conj " << sci(symbolConj) << ", Q conj " << sci(qConj)
             << ", S conj " << sci(sConj) << ", min eig " << sci(minEig) << ", cost imag " << sci(costImag)
             << ", grad imag " << sci(gradImag) << ", output residual " << sci(worstRealizable);
}

struct Criterion {
    int id;
    const char* name;
    std::function<void(Outcome&)> run;
    double budgetSeconds;  // 0: no limit
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "ring covariance DFT blocks equal N S_z", ring_dft_blocks, 30.0},
        {2, "finite-N cost equivalence and convergence", cost_equivalence, 0.0},
        {3, "analytic gradients vs central differences", gradient_differences, 60.0},
        {4, "synthesis stationarity on the bundled example", stationarity, 0.0},
        {5, "Lyapunov solver vs Kronecker reference", ale_solver, 0.0},
        {6, "quadrature convergence and Laurent residue", quadrature_and_residue, 0.0},
        {7, "structural invariants", structural_invariants, 0.0},
    };

    // Build the shared instance set outside the timed sections.
    (void)instance_set();

    int failed = 0;
    for (const Criterion& c : criteria) {
        Outcome o;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            c.run(o);
        } catch (const std::exception& e) {
            o.require(false, std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (c.budgetSeconds > 0.0) o.require(secs < c.budgetSeconds, "runtime over budget");
        if (!o.pass) ++failed;
        std::printf("CRITERION %d %s: %s | %s | %.2fs\n", c.id, o.pass ? "PASS" : "FAIL", c.name,
                    o.detail.str().c_str(), secs);
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
