#include "tinet/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "tinet/format.hpp"

namespace tinet::io {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw ParseError(where + ": " + what);
}

double finite_number(const Json& v, const std::string& where) {
    if (!v.is_number()) fail(where, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail(where, "non-finite value");
    return x;
}

int integer(const Json& j, const char* key, const std::string& where) {
    if (!j.contains(key)) fail(where, std::string("missing \"") + key + "\"");
    const Json& v = j.at(key);
    if (!v.is_number_integer()) fail(where + "." + key, "expected an integer");
    return v.get<int>();
}

const Json& member(const Json& j, const char* key, const std::string& where) {
    if (!j.is_object()) fail(where, "expected an object");
    if (!j.contains(key)) fail(where, std::string("missing \"") + key + "\"");
    return j.at(key);
}

void reject_unknown(const Json& j, const std::vector<std::string>& known, const std::string& where) {
    for (const auto& [k, v] : j.items()) {
        (void)v;
        if (std::find(known.begin(), known.end(), k) == known.end())
            fail(where, "unknown key \"" + k + "\"");
    }
}

// Reads prefix0, prefix1, ... in order; keys must be contiguous from 0.
std::vector<Mat> indexed_blocks(const Json& j, const std::string& prefix, const std::string& where) {
    if (!j.is_object()) fail(where, "expected an object");
    std::vector<Mat> out;
    for (size_t k = 0;; ++k) {
        const std::string key = prefix + std::to_string(k);
        if (!j.contains(key)) break;
        out.push_back(matrix_from_json(j.at(key), where + "." + key));
    }
    if (out.size() != j.size()) fail(where, "keys must be " + prefix + "0, " + prefix + "1, ... without gaps");
    if (out.empty()) fail(where, "missing \"" + prefix + "0\"");
    return out;
}

EnergyBlocks energy_from_json(const Json& j, const std::string& where) {
    std::vector<Mat> blocks = indexed_blocks(j, "R", where);
    Mat r0 = std::move(blocks.front());
    blocks.erase(blocks.begin());
    return EnergyBlocks(r0, std::move(blocks));
}

Json energy_to_json(const EnergyBlocks& e) {
    Json j = Json::object();
    j["R0"] = matrix_to_json(e.R0());
    for (int l = 1; l <= e.range(); ++l) j["R" + std::to_string(l)] = matrix_to_json(e.at(l));
    return j;
}

std::string coupling_key(int l) { return "Rt" + std::to_string(l); }

void dump_into(std::string& out, const Json& j) {
    switch (j.type()) {
        case Json::value_t::object: {
            out += '{';
            bool first = true;
            for (const auto& [k, v] : j.items()) {
                if (!first) out += ',';
                first = false;
                out += Json(k).dump();
                out += ':';
                dump_into(out, v);
            }
            out += '}';
            return;
        }
        case Json::value_t::array: {
            out += '[';
            for (size_t i = 0; i < j.size(); ++i) {
                if (i) out += ',';
                dump_into(out, j[i]);
            }
            out += ']';
            return;
        }
        case Json::value_t::number_float: {
            const double x = j.get<double>();
            out += std::isfinite(x) ? fmt17(x) : "null";
            return;
        }
        default:
            out += j.dump();
    }
}

Json complex_json(cplx z) { return Json::array({z.real(), z.imag()}); }

}  // namespace

Mat matrix_from_json(const Json& j, const std::string& where) {
    if (!j.is_array()) fail(where, "expected a nested array");
    if (j.empty()) return Mat(0, 0);
    const size_t rows = j.size();
    if (!j[0].is_array()) fail(where, "expected rows as arrays");
    const size_t cols = j[0].size();
    Mat m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (size_t r = 0; r < rows; ++r) {
        const std::string rw = where + "[" + std::to_string(r) + "]";
        if (!j[r].is_array()) fail(rw, "expected an array");
        if (j[r].size() != cols) fail(rw, "ragged row");
        for (size_t c = 0; c < cols; ++c)
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                finite_number(j[r][c], rw + "[" + std::to_string(c) + "]");
    }
    return m;
}

Json matrix_to_json(const Mat& m) {
    Json rows = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

ControllerPoint controller_from_json(const Json& j) {
    const std::string where = "controller";
    if (!j.is_object()) fail(where, "expected an object");
    reject_unknown(j, {"energy", "coupling"}, where);
    ControllerPoint c;
    c.energy = energy_from_json(member(j, "energy", where), where + ".energy");
    const Json& cj = member(j, "coupling", where);
    if (!cj.is_object()) fail(where + ".coupling", "expected an object");
    int range = 0;
    while (cj.contains(coupling_key(range + 1)) || cj.contains(coupling_key(-(range + 1)))) ++range;
    if (cj.size() != static_cast<size_t>(2 * range + 1))
        fail(where + ".coupling", "keys must be Rt0, Rt1, Rt-1, ... without gaps");
    for (int l = -range; l <= range; ++l) {
        const std::string key = coupling_key(l);
        if (!cj.contains(key)) fail(where + ".coupling", "missing \"" + key + "\"");
        c.coupling.push_back(matrix_from_json(cj.at(key), where + ".coupling." + key));
    }
    return c;
}

Json controller_to_json(const ControllerPoint& c) {
    Json coupling = Json::object();
    coupling["Rt0"] = matrix_to_json(c.rt0());
    for (int l = 1; l <= c.couplingRange(); ++l) {
        coupling[coupling_key(l)] = matrix_to_json(c.rt(l));
        coupling[coupling_key(-l)] = matrix_to_json(c.rt(-l));
    }
    Json j = Json::object();
    j["energy"] = energy_to_json(c.energy);
    j["coupling"] = std::move(coupling);
    return j;
}

NetworkSpec spec_from_json(const Json& j) {
    if (!j.is_object()) fail("spec", "expected an object");
    reject_unknown(j, {"dims", "theta1", "theta2", "plantEnergy", "M1", "M2", "weights", "controller"},
                   "spec");
    NetworkSpec s;
    const Json& dj = member(j, "dims", "spec");
    reject_unknown(dj, {"n1", "n2", "m1", "m2", "d1", "d2", "dTilde"}, "dims");
    s.dims.n1 = integer(dj, "n1", "dims");
    s.dims.n2 = integer(dj, "n2", "dims");
    s.dims.m1 = integer(dj, "m1", "dims");
    s.dims.m2 = integer(dj, "m2", "dims");
    s.dims.d1 = integer(dj, "d1", "dims");
    s.dims.d2 = integer(dj, "d2", "dims");
    s.dims.dTilde = dj.contains("dTilde") ? integer(dj, "dTilde", "dims") : 0;
    for (const int v : {s.dims.n1, s.dims.n2, s.dims.m1, s.dims.m2})
        if (v < 1 || v > 64) fail("dims", "mode and channel counts must lie in [1, 64]");
    for (const int v : {s.dims.d1, s.dims.d2, s.dims.dTilde})
        if (v < 0 || v > 64) fail("dims", "ranges must lie in [0, 64]");

    s.theta1 = j.contains("theta1") ? CcrMatrix{matrix_from_json(j.at("theta1"), "theta1")}
                                    : CcrMatrix::canonical(s.dims.n1);
    s.theta2 = j.contains("theta2") ? CcrMatrix{matrix_from_json(j.at("theta2"), "theta2")}
                                    : CcrMatrix::canonical(s.dims.n2);
    s.plantEnergy = energy_from_json(member(j, "plantEnergy", "spec"), "plantEnergy");
    s.M1 = matrix_from_json(member(j, "M1", "spec"), "M1");
    s.M2 = matrix_from_json(member(j, "M2", "spec"), "M2");
    s.noise1 = NoiseModel::make(s.dims.m1);
    s.noise2 = NoiseModel::make(s.dims.m2);
    s.weights.sigma = indexed_blocks(member(j, "weights", "spec"), "sigma", "weights");
    s.controller = controller_from_json(member(j, "controller", "spec"));
    return s;
}

Json spec_to_json(const NetworkSpec& s) {
    Json j = Json::object();
    j["dims"] = Json{{"n1", s.dims.n1}, {"n2", s.dims.n2}, {"m1", s.dims.m1}, {"m2", s.dims.m2},
                     {"d1", s.dims.d1}, {"d2", s.dims.d2}, {"dTilde", s.dims.dTilde}};
    j["theta1"] = matrix_to_json(s.theta1.theta);
    j["theta2"] = matrix_to_json(s.theta2.theta);
    j["plantEnergy"] = energy_to_json(s.plantEnergy);
    j["M1"] = matrix_to_json(s.M1);
    j["M2"] = matrix_to_json(s.M2);
    Json w = Json::object();
    for (size_t k = 0; k < s.weights.sigma.size(); ++k)
        w["sigma" + std::to_string(k)] = matrix_to_json(s.weights.sigma[k]);
    j["weights"] = std::move(w);
    j["controller"] = controller_to_json(s.controller);
    return j;
}

DescentConfig config_from_json(const Json& j) {
    const std::string where = "config";
    if (!j.is_object()) fail(where, "expected an object");
    reject_unknown(j,
                   {"maxIters", "initStep", "backtrackFactor", "armijoC", "stationarityTol", "seed",
                    "quadPoints", "stabilityGrid", "maxRestarts"},
                   where);
    DescentConfig c;
    const auto real = [&](const char* key, double& dst) {
        if (j.contains(key)) dst = finite_number(j.at(key), where + "." + key);
    };
    if (j.contains("maxIters")) c.maxIters = integer(j, "maxIters", where);
    real("initStep", c.initStep);
    real("backtrackFactor", c.backtrackFactor);
    real("armijoC", c.armijoC);
    if (j.contains("stationarityTol") && !j.at("stationarityTol").is_null())
        c.stationarityTol = finite_number(j.at("stationarityTol"), where + ".stationarityTol");
    if (j.contains("seed")) {
        if (!j.at("seed").is_number_unsigned()) fail(where + ".seed", "expected a nonnegative integer");
        c.seed = j.at("seed").get<std::uint64_t>();
    }
    if (j.contains("quadPoints")) c.quadPoints = integer(j, "quadPoints", where);
    if (j.contains("stabilityGrid")) c.stabilityGrid = integer(j, "stabilityGrid", where);
    if (j.contains("maxRestarts")) c.maxRestarts = integer(j, "maxRestarts", where);
    try {
        c.validate();
    } catch (const InvalidArgument& e) {
        fail(where, e.what());
    }
    return c;
}

Json parse_text(const std::string& text, const std::string& source) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        fail(source, e.what());
    }
}

Json read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(path, "cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_text(ss.str(), path);
}

NetworkSpec load_spec(const std::string& path) {
    const Json j = read_file(path);
    try {
        return spec_from_json(j);
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what());
    }
}

Json to_json(const ValidationReport& r) {
    Json v = Json::array();
    for (const Violation& x : r.violations)
        v.push_back(Json{{"field", x.field},
                         {"what", x.what},
                         {"magnitude", x.magnitude},
                         {"structural", x.structural}});
    return Json{{"ok", r.ok()}, {"violations", std::move(v)}};
}

Json to_json(const StabilityReport& r) {
    return Json{{"verdict", to_string(r.verdict)},
                {"isStabilizing", r.isStabilizing},
                {"margin", r.margin},
                {"worstZ", complex_json(r.worstZ)},
                {"gridSize", r.gridSize},
                {"spectralRadiusExp", r.spectralRadiusExp()}};
}

Json to_json(const CostReport& r) {
    Json j = Json::object();
    j["kind"] = r.kind == CostReport::Kind::finiteN ? "finiteN" : "thermodynamic";
    if (r.kind == CostReport::Kind::finiteN) j["networkSize"] = r.networkSize;
    j["value"] = r.value;
    j["imagResidue"] = r.imagResidue;
    j["gridSize"] = r.gridSize;
    j["maxAleResidual"] = r.maxAleResidual;
    if (r.hasGradients) {
        Json g = Json::object();
        for (size_t l = 0; l < r.gradR2.size(); ++l) g["R" + std::to_string(l)] = matrix_to_json(r.gradR2[l]);
        j["gradR2"] = std::move(g);
        j["gradRt0"] = matrix_to_json(r.gradRt0);
        j["gradientNorm"] = r.gradientNorm();
        j["gradImagResidue"] = r.gradImagResidue;
        j["gradR20SymDefect"] = r.gradR20SymDefect;
        j["optimality"] = Json{{"energy", r.optimality.energy}, {"coupling", r.optimality.coupling}};
    }
    return j;
}

Json to_json(const GradCheckReport& r) {
    Json blocks = Json::array();
    for (const BlockError& b : r.blocks)
        blocks.push_back(Json{{"block", b.block}, {"maxAbsError", b.maxAbsError}, {"relError", b.relError}});
    return Json{{"h", r.h},
                {"quadPoints", r.quadPoints},
                {"scale", r.scale},
                {"maxRelError", r.maxRelError},
                {"blocks", std::move(blocks)}};
}

Json to_json(const DescentTrace& t) {
    const DescentRecord& last = t.records.back();
    return Json{{"termination", to_string(t.termination)},
                {"iterations", last.iteration},
                {"records", t.records.size()},
                {"restarts", t.restarts},
                {"stationarityTol", t.stationarityTol},
                {"initialCost", t.records.front().cost},
                {"finalCost", last.cost},
                {"initialGradNorm", t.records.front().gradNorm},
                {"finalGradNorm", last.gradNorm},
                {"finalMargin", last.margin}};
}

Json error_json(const std::string& code, const std::string& message) {
    return Json{{"error", Json{{"code", code}, {"message", message}}}};
}

std::string dump17(const Json& j) {
    std::string out;
    dump_into(out, j);
    return out;
}

void write_margin_csv(std::ostream& os, const std::vector<MarginSample>& curve) {
    os << "phi,re_z,im_z,max_re_eig\n";
    for (const MarginSample& s : curve)
        os << fmt17(s.phi) << ',' << fmt17(s.z.real()) << ',' << fmt17(s.z.imag()) << ','
           << fmt17(s.maxRealEig) << '\n';
}

void write_spectrum_csv(std::ostream& os, const std::vector<std::pair<cplx, double>>& spectrum) {
    os << "phi,re_z,im_z,integrand\n";
    for (const auto& [z, v] : spectrum)
        os << fmt17(std::arg(z)) << ',' << fmt17(z.real()) << ',' << fmt17(z.imag()) << ','
           << fmt17(v) << '\n';
}

void write_trace_csv(std::ostream& os, const DescentTrace& t) {
    os << "iteration,cost,grad_norm,step,margin\n";
    for (const DescentRecord& r : t.records)
        os << r.iteration << ',' << fmt17(r.cost) << ',' << fmt17(r.gradNorm) << ',' << fmt17(r.step)
           << ',' << fmt17(r.margin) << '\n';
}

void write_file_atomic(const std::string& path, const std::string& contents) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw InvalidArgument("cannot write " + tmp.string());
        out << contents;
        out.flush();
        if (!out) throw InvalidArgument("write failed for " + tmp.string());
    }
    fs::rename(tmp, target);
}

}  // namespace tinet::io
