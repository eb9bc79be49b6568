#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "tinet/cost.hpp"
#include "tinet/network_model.hpp"
#include "tinet/stability.hpp"
#include "tinet/synthesis.hpp"

namespace tinet::io {

using Json = nlohmann::ordered_json;

/// Matrices are row-major nested arrays of finite numbers; [] is the empty matrix.
Mat matrix_from_json(const Json& j, const std::string& where);
Json matrix_to_json(const Mat& m);

// All readers throw ParseError on malformed input (syntax, types, non-finite values).
NetworkSpec spec_from_json(const Json& j);
Json spec_to_json(const NetworkSpec& spec);
ControllerPoint controller_from_json(const Json& j);
Json controller_to_json(const ControllerPoint& c);
DescentConfig config_from_json(const Json& j);

Json parse_text(const std::string& text, const std::string& source);
Json read_file(const std::string& path);
NetworkSpec load_spec(const std::string& path);

Json to_json(const ValidationReport& r);
Json to_json(const StabilityReport& r);
Json to_json(const CostReport& r);
Json to_json(const GradCheckReport& r);
Json to_json(const DescentTrace& t);
Json error_json(const std::string& code, const std::string& message);

/// Compact deterministic text: insertion-ordered keys, doubles with 17 significant digits.
std::string dump17(const Json& j);

void write_margin_csv(std::ostream& os, const std::vector<MarginSample>& curve);
void write_spectrum_csv(std::ostream& os, const std::vector<std::pair<cplx, double>>& spectrum);
/// One row per record: iteration,cost,grad_norm,step,margin.
void write_trace_csv(std::ostream& os, const DescentTrace& t);

/// Writes via a temporary sibling and rename.
void write_file_atomic(const std::string& path, const std::string& contents);

}  // namespace tinet::io
