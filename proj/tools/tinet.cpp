// tinet: command-line front end.
//
// Exit codes: 0 success, 1 spec violations, 2 unreadable or malformed input,
// 3 numerical failure (not stabilizing, inconclusive, no convergence, ...).

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include "tinet/finite_oracle.hpp"
#include "tinet/io.hpp"
#include "tinet/spectral.hpp"

namespace fs = std::filesystem;
using tinet::io::Json;

namespace {

constexpr int kExitViolations = 1;
constexpr int kExitParse = 2;
constexpr int kExitNumeric = 3;

struct Options {
    std::string specPath;
    std::string configPath;
    std::optional<std::string> outDir;
    int grid = 64;
    std::optional<int> N;
    bool thermo = false;
    int quad = tinet::kDefaultQuadPoints;
    double h = 1e-5;
    std::optional<std::uint64_t> seed;
};

class ViolationsError : public tinet::Error {
public:
    explicit ViolationsError(Json report)
        : Error("InvalidSpec", "spec has violations"), report(std::move(report)) {}
    Json report;
};

void emit(const Json& j) { std::cout << tinet::io::dump17(j) << '\n'; }

tinet::NetworkSpec load_valid_spec(const std::string& path) {
    tinet::NetworkSpec spec = tinet::io::load_spec(path);
    const tinet::ValidationReport r = tinet::validate_spec(spec);
    if (!r.ok()) throw ViolationsError(tinet::io::to_json(r));
    return spec;
}

// Collects CSV outputs and writes the manifest last.
class OutputSet {
public:
    OutputSet(const Options& o, std::string command, Json parameters)
        : dir_(o.outDir), command_(std::move(command)), params_(std::move(parameters)),
          input_(o.specPath), start_(std::chrono::steady_clock::now()) {
        if (dir_) fs::create_directories(*dir_);
    }

    bool enabled() const { return dir_.has_value(); }

    void write(const std::string& name, const std::string& contents) {
        if (!dir_) return;
        const std::string path = (fs::path(*dir_) / name).string();
        tinet::io::write_file_atomic(path, contents);
        paths_.push_back(path);
    }

    void finish() {
        if (!dir_) return;
        const double wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        Json m = Json::object();
        m["inputPath"] = input_;
        m["command"] = command_;
        m["parameters"] = params_;
        m["outputPaths"] = paths_;
        m["toolVersion"] = TINET_VERSION;
        m["wallTime"] = wall;
        tinet::io::write_file_atomic((fs::path(*dir_) / "manifest.json").string(),
                                     tinet::io::dump17(m) + "\n");
    }

private:
    std::optional<std::string> dir_;
    std::string command_;
    Json params_;
    std::string input_;
    std::vector<std::string> paths_;
    std::chrono::steady_clock::time_point start_;
};

int cmd_validate(const Options& o) {
    const tinet::NetworkSpec spec = tinet::io::load_spec(o.specPath);
    const tinet::ValidationReport r = tinet::validate_spec(spec);
    emit(tinet::io::to_json(r));
    return r.ok() ? 0 : kExitViolations;
}

int cmd_stability(const Options& o) {
    const tinet::NetworkSpec spec = load_valid_spec(o.specPath);
    OutputSet out(o, "stability", Json{{"grid", o.grid}});
    const tinet::StabilityReport r = tinet::stability_sweep(spec, o.grid);
    if (out.enabled()) {
        std::ostringstream csv;
        tinet::io::write_margin_csv(csv, tinet::margin_curve(tinet::assemble(spec), r.gridSize));
        out.write("margin.csv", csv.str());
    }
    out.finish();
    emit(tinet::io::to_json(r));
    return 0;
}

int cmd_cost(const Options& o) {
    if (o.N.has_value() == o.thermo) throw tinet::InvalidArgument("cost: give exactly one of --N or --thermo");
    const tinet::NetworkSpec spec = load_valid_spec(o.specPath);
    Json params = o.thermo ? Json{{"thermo", true}, {"quad", o.quad}} : Json{{"N", *o.N}};
    OutputSet out(o, "cost", params);

    tinet::CostReport r;
    if (o.thermo) {
        tinet::require_stabilizing(tinet::stability_sweep(spec, 64));
        r = tinet::thermo_cost(spec, o.quad, spec.dims.dTilde == 0);
    } else {
        r = tinet::finite_cost(spec, *o.N);
    }
    if (out.enabled()) {
        const int P = r.gridSize;
        std::ostringstream spectrum;
        tinet::io::write_spectrum_csv(spectrum, tinet::cost_spectrum(spec, P));
        out.write("spectrum.csv", spectrum.str());

        const tinet::ClosedLoopBlocks blocks = tinet::assemble(spec);
        const tinet::FrequencyGrid g = o.thermo ? tinet::FrequencyGrid::uniform(P)
                                                : tinet::FrequencyGrid::roots_of_unity(P);
        std::vector<tinet::CMat> mats;
        for (const tinet::cplx z : g.points) mats.push_back(tinet::symbol_A(blocks, z));
        std::ostringstream symbols;
        tinet::write_grid_csv(symbols, g.points, mats, "A");
        out.write("symbols.csv", symbols.str());
    }
    out.finish();
    emit(tinet::io::to_json(r));
    return 0;
}

int cmd_gradcheck(const Options& o) {
    const tinet::NetworkSpec spec = load_valid_spec(o.specPath);
    OutputSet out(o, "gradcheck", Json{{"h", o.h}, {"quad", o.quad}});
    const tinet::GradCheckReport r = tinet::grad_check(spec, o.h, o.quad);
    out.finish();
    emit(tinet::io::to_json(r));
    return 0;
}

int cmd_synthesize(const Options& o) {
    const tinet::NetworkSpec spec = load_valid_spec(o.specPath);
    tinet::DescentConfig cfg = tinet::io::config_from_json(tinet::io::read_file(o.configPath));
    if (o.seed) cfg.seed = *o.seed;
    OutputSet out(o, "synthesize", Json{{"config", o.configPath}, {"seed", cfg.seed}});

    const tinet::DescentResult res = tinet::descend(spec, cfg);
    const Json controller = tinet::io::controller_to_json(res.controller);
    if (out.enabled()) {
        std::ostringstream trace;
        tinet::io::write_trace_csv(trace, res.trace);
        out.write("trace.csv", trace.str());
        out.write("controller.json", tinet::io::dump17(controller) + "\n");
    }
    out.finish();
    if (res.trace.termination != tinet::Termination::converged) {
        Json e = tinet::io::error_json("NoConvergence", std::string("descent ended: ") +
                                                            tinet::to_string(res.trace.termination));
        e["trace"] = tinet::io::to_json(res.trace);
        emit(e);
        return kExitNumeric;
    }
    Json j = Json::object();
    j["trace"] = tinet::io::to_json(res.trace);
    j["report"] = tinet::io::to_json(res.finalReport);
    j["controller"] = controller;
    emit(j);
    return 0;
}

int cmd_oracle(const Options& o) {
    if (!o.N) throw tinet::InvalidArgument("oracle: --N is required");
    const tinet::NetworkSpec spec = load_valid_spec(o.specPath);
    OutputSet out(o, "oracle", Json{{"N", *o.N}});
    const tinet::FiniteNetwork net = tinet::build_finite(spec, *o.N);
    const tinet::AleSolution cov = tinet::finite_covariance(net);
    Json j = Json::object();
    j["N"] = *o.N;
    j["value"] = tinet::finite_cost_direct(net, cov.X);
    j["stateDimension"] = net.Afull.rows();
    j["aleResidual"] = cov.residual;
    j["maxRealEigenvalue"] = cov.maxRealEigenvalue;
    j["shiftCommutator"] = tinet::shift_commutator(net);
    out.finish();
    emit(j);
    return 0;
}

int run_guarded(int (*fn)(const Options&), const Options& o) {
    try {
        return fn(o);
    } catch (const ViolationsError& e) {
        Json j = tinet::io::error_json(e.code(), e.what());
        j["report"] = e.report;
        emit(j);
        return kExitViolations;
    } catch (const tinet::ParseError& e) {
        emit(tinet::io::error_json(e.code(), e.what()));
        return kExitParse;
    } catch (const tinet::Error& e) {
        Json j = tinet::io::error_json(e.code(), e.what());
        if (const auto* ns = dynamic_cast<const tinet::NotStabilizing*>(&e)) j["error"]["margin"] = ns->margin;
        if (const auto* in = dynamic_cast<const tinet::Inconclusive*>(&e)) j["error"]["margin"] = in->margin;
        emit(j);
        return kExitNumeric;
    } catch (const fs::filesystem_error& e) {
        emit(tinet::io::error_json("IoError", e.what()));
        return kExitNumeric;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Translation-invariant quantum network controller toolkit"};
    app.require_subcommand(1);
    app.set_help_flag("--help", "print help");  // -h is taken by the difference step
    app.set_version_flag("--version", TINET_VERSION);
    Options o;

    const auto spec_arg = [&](CLI::App* c) {
        c->add_option("spec", o.specPath, "NetworkSpec JSON file")->required();
    };
    const auto out_arg = [&](CLI::App* c) {
        c->add_option("--out", o.outDir, "directory for CSV outputs and manifest.json");
    };

    CLI::App* validate = app.add_subcommand("validate", "check a spec; exit 1 on violations");
    spec_arg(validate);

    CLI::App* stability = app.add_subcommand("stability", "stability sweep over the unit circle");
    spec_arg(stability);
    stability->add_option("--grid", o.grid, "initial grid size")->check(CLI::Range(16, 8192));
    out_arg(stability);

    CLI::App* cost = app.add_subcommand("cost", "finite-N or thermodynamic cost");
    spec_arg(cost);
    cost->add_option("--N", o.N, "network size")->check(CLI::Range(1, 1 << 20));
    cost->add_flag("--thermo", o.thermo, "infinite-network limit by quadrature");
    cost->add_option("--quad", o.quad, "initial quadrature points")->check(CLI::Range(2, 4096));
    out_arg(cost);

    CLI::App* gradcheck = app.add_subcommand("gradcheck", "analytic gradient versus central differences");
    spec_arg(gradcheck);
    gradcheck->add_option("--h", o.h, "difference step")->check(CLI::PositiveNumber);
    gradcheck->add_option("--quad", o.quad, "quadrature points")->check(CLI::Range(2, 4096));
    out_arg(gradcheck);

    CLI::App* synthesize = app.add_subcommand("synthesize", "gradient descent controller synthesis");
    spec_arg(synthesize);
    synthesize->add_option("config", o.configPath, "DescentConfig JSON file")->required();
    synthesize->add_option("--seed", o.seed, "restart seed (overrides the config)");
    out_arg(synthesize);

    CLI::App* oracle = app.add_subcommand("oracle", "explicit finite-ring covariance and cost");
    spec_arg(oracle);
    oracle->add_option("--N", o.N, "network size")->check(CLI::Range(1, 256));
    out_arg(oracle);

    CLI11_PARSE(app, argc, argv);

    if (validate->parsed()) return run_guarded(cmd_validate, o);
    if (stability->parsed()) return run_guarded(cmd_stability, o);
    if (cost->parsed()) return run_guarded(cmd_cost, o);
    if (gradcheck->parsed()) return run_guarded(cmd_gradcheck, o);
    if (synthesize->parsed()) return run_guarded(cmd_synthesize, o);
    return run_guarded(cmd_oracle, o);
}
