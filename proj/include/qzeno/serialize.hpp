#pragma once

#include <nlohmann/json.hpp>
#include <filesystem>
#include <string>
#include <vector>

#include "qzeno/code_search.hpp"
#include "qzeno/linalg.hpp"
#include "qzeno/nh_control.hpp"
#include "qzeno/types.hpp"
#include "qzeno/zeno_engine.hpp"

// Structured-text (JSON) formats for every artifact the tools exchange.
// Doubles are emitted in shortest round-trip form, so write/read is exact
// for any value representable in an IEEE double.
namespace qzeno::io {

using nlohmann::json;

// {"rows": R, "cols": C, "entries": [[re, im], ...]} row-major.
json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const json& j, const std::string& path);

// {"dim": N, "amplitudes": [[re, im], ...]}
json vector_to_json(const Vector& v);
Vector vector_from_json(const json& j, const std::string& path);

// {"label": L, "matrix": {...}}
json operator_to_json(const HermitianOperator& op);
HermitianOperator operator_from_json(const json& j, const std::string& path);

// {"dim": N, "errors": [operator, ...]}
json error_set_to_json(const std::vector<HermitianOperator>& errors);
std::vector<HermitianOperator> error_set_from_json(const json& j,
                                                   const std::string& path);

// {"dim": N, "count": I, "codewords": [vector, ...], "residuals": {...}}
json code_basis_to_json(const CodeBasis& basis);
CodeBasis code_basis_from_json(const json& j, const std::string& path);

// {"dim": N, "a": {matrix}, "b": {matrix}}
json control_pair_to_json(const ControlPair& pair);
ControlPair control_pair_from_json(const json& j, const std::string& path);

// {"count": n, "pulses": [{"pulse": j, "generator": "a"|"b",
//  "negated": bool, "duration_ns": t}, ...]} in application order.
json schedule_to_json(const std::vector<PulseStep>& schedule);
std::vector<PulseStep> schedule_from_json(const json& j,
                                          const std::string& path);

// Strict-parse helpers: unknown keys are rejected with their JSON path.
void require_keys(const json& obj, const std::vector<std::string>& required,
                  const std::vector<std::string>& optional,
                  const std::string& path);
const json& require(const json& obj, const std::string& key,
                    const std::string& path);

json read_json_file(const std::filesystem::path& file);
void write_json_file(const std::filesystem::path& file, const json& j);

// CSV with a header row; numeric cells carry 17 significant digits.
void write_csv(const std::filesystem::path& file,
               const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

std::string format_double(double v);

// FNV-1a 64-bit content fingerprint (hex), used to pin manifest inputs.
std::string fnv1a64_hex(const std::string& bytes);
std::string hash_file(const std::filesystem::path& file);

// Everything needed to reproduce a tool invocation bit for bit.
struct RunManifest {
  std::string command;
  json parameters = json::object();
  json seeds = json::object();
  std::string tolerance_profile = "default";
  json inputs = json::object();   // path -> content hash
  std::vector<std::string> outputs;
};

json manifest_to_json(const RunManifest& m);
void write_manifest(const std::filesystem::path& file, const RunManifest& m);

}  // namespace qzeno::io
