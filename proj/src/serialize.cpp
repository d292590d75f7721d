#include "qzeno/serialize.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace qzeno::io {

namespace {

double as_double(const json& j, const std::string& path) {
  if (!j.is_number())
    throw ValidationError(path + ": expected a number");
  return j.get<double>();
}

int as_int(const json& j, const std::string& path) {
  if (!j.is_number_integer())
    throw ValidationError(path + ": expected an integer");
  return j.get<int>();
}

Complex as_complex(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2)
    throw ValidationError(path + ": expected a [re, im] pair");
  return {as_double(j[0], path + "[0]"), as_double(j[1], path + "[1]")};
}

json complex_to_json(const Complex& c) {
  return json::array({c.real(), c.imag()});
}

}  // namespace

void require_keys(const json& obj, const std::vector<std::string>& required,
                  const std::vector<std::string>& optional,
                  const std::string& path) {
  if (!obj.is_object())
    throw ValidationError(path + ": expected an object");
  for (const std::string& k : required)
    if (!obj.contains(k))
      throw ValidationError(path + ": missing required field '" + k + "'");
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    const bool known =
        std::find(required.begin(), required.end(), key) != required.end() ||
        std::find(optional.begin(), optional.end(), key) != optional.end();
    if (!known)
      throw ValidationError(path + ": unknown field '" + key + "'");
  }
}

const json& require(const json& obj, const std::string& key,
                    const std::string& path) {
  if (!obj.is_object() || !obj.contains(key))
    throw ValidationError(path + ": missing required field '" + key + "'");
  return obj.at(key);
}

json matrix_to_json(const Matrix& m) {
  json entries = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      entries.push_back(complex_to_json(m(i, j)));
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", entries}};
}

Matrix matrix_from_json(const json& j, const std::string& path) {
  require_keys(j, {"rows", "cols", "entries"}, {}, path);
  const int rows = as_int(j.at("rows"), path + ".rows");
  const int cols = as_int(j.at("cols"), path + ".cols");
  if (rows < 1 || cols < 1)
    throw ValidationError(path + ": matrix shape must be positive");
  const json& entries = j.at("entries");
  if (!entries.is_array() ||
      static_cast<int>(entries.size()) != rows * cols)
    throw ValidationError(path + ".entries: expected " +
                          std::to_string(rows * cols) + " [re, im] pairs");
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int k = 0; k < cols; ++k)
      m(i, k) = as_complex(entries[i * cols + k],
                           path + ".entries[" + std::to_string(i * cols + k) +
                               "]");
  return m;
}

json vector_to_json(const Vector& v) {
  json amplitudes = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i)
    amplitudes.push_back(complex_to_json(v(i)));
  return json{{"dim", v.size()}, {"amplitudes", amplitudes}};
}

Vector vector_from_json(const json& j, const std::string& path) {
  require_keys(j, {"dim", "amplitudes"}, {}, path);
  const int dim = as_int(j.at("dim"), path + ".dim");
  const json& amps = j.at("amplitudes");
  if (!amps.is_array() || static_cast<int>(amps.size()) != dim)
    throw ValidationError(path + ".amplitudes: expected " +
                          std::to_string(dim) + " [re, im] pairs");
  Vector v(dim);
  for (int i = 0; i < dim; ++i)
    v(i) = as_complex(amps[i], path + ".amplitudes[" + std::to_string(i) + "]");
  return v;
}

json operator_to_json(const HermitianOperator& op) {
  return json{{"label", op.label}, {"matrix", matrix_to_json(op.mat)}};
}

HermitianOperator operator_from_json(const json& j, const std::string& path) {
  require_keys(j, {"label", "matrix"}, {}, path);
  if (!j.at("label").is_string())
    throw ValidationError(path + ".label: expected a string");
  return HermitianOperator(j.at("label").get<std::string>(),
                           matrix_from_json(j.at("matrix"), path + ".matrix"));
}

json error_set_to_json(const std::vector<HermitianOperator>& errors) {
  if (errors.empty()) throw ValidationError("error set must not be empty");
  json list = json::array();
  for (const HermitianOperator& e : errors) list.push_back(operator_to_json(e));
  return json{{"dim", errors.front().mat.rows()}, {"errors", list}};
}

std::vector<HermitianOperator> error_set_from_json(const json& j,
                                                   const std::string& path) {
  require_keys(j, {"dim", "errors"}, {}, path);
  const int dim = as_int(j.at("dim"), path + ".dim");
  const json& list = j.at("errors");
  if (!list.is_array() || list.empty())
    throw ValidationError(path + ".errors: expected a non-empty list");
  std::vector<HermitianOperator> out;
  for (size_t i = 0; i < list.size(); ++i) {
    out.push_back(operator_from_json(
        list[i], path + ".errors[" + std::to_string(i) + "]"));
    if (out.back().mat.rows() != dim)
      throw ValidationError(path + ".errors[" + std::to_string(i) +
                            "]: dimension does not match the set");
  }
  return out;
}

json code_basis_to_json(const CodeBasis& basis) {
  json words = json::array();
  for (const Vector& v : basis.codewords) words.push_back(vector_to_json(v));
  return json{{"dim", basis.dim},
              {"count", basis.codewords.size()},
              {"codewords", words},
              {"residuals",
               {{"orthonormality", basis.orthonormality_residual},
                {"error_orthogonality", basis.error_orthogonality_residual}}}};
}

CodeBasis code_basis_from_json(const json& j, const std::string& path) {
  require_keys(j, {"dim", "count", "codewords", "residuals"}, {}, path);
  CodeBasis basis;
  basis.dim = as_int(j.at("dim"), path + ".dim");
  const int count = as_int(j.at("count"), path + ".count");
  const json& words = j.at("codewords");
  if (!words.is_array() || static_cast<int>(words.size()) != count)
    throw ValidationError(path + ".codewords: expected " +
                          std::to_string(count) + " vectors");
  for (int i = 0; i < count; ++i) {
    basis.codewords.push_back(vector_from_json(
        words[i], path + ".codewords[" + std::to_string(i) + "]"));
    if (basis.codewords.back().size() != basis.dim)
      throw ValidationError(path + ".codewords[" + std::to_string(i) +
                            "]: dimension does not match the basis");
  }
  const json& res = j.at("residuals");
  require_keys(res, {"orthonormality", "error_orthogonality"}, {},
               path + ".residuals");
  basis.orthonormality_residual =
      as_double(res.at("orthonormality"), path + ".residuals.orthonormality");
  basis.error_orthogonality_residual = as_double(
      res.at("error_orthogonality"), path + ".residuals.error_orthogonality");
  return basis;
}

json control_pair_to_json(const ControlPair& pair) {
  return json{{"dim", pair.dim()},
              {"a", matrix_to_json(pair.a)},
              {"b", matrix_to_json(pair.b)}};
}

ControlPair control_pair_from_json(const json& j, const std::string& path) {
  require_keys(j, {"dim", "a", "b"}, {}, path);
  const int dim = as_int(j.at("dim"), path + ".dim");
  ControlPair pair(matrix_from_json(j.at("a"), path + ".a"),
                   matrix_from_json(j.at("b"), path + ".b"));
  if (pair.dim() != dim)
    throw ValidationError(path + ": generator dimension does not match 'dim'");
  return pair;
}

json schedule_to_json(const std::vector<PulseStep>& schedule) {
  json pulses = json::array();
  for (const PulseStep& s : schedule)
    pulses.push_back(json{{"pulse", s.pulse},
                          {"generator", s.use_b ? "b" : "a"},
                          {"negated", s.negated},
                          {"duration_ns", s.duration}});
  return json{{"count", schedule.size()}, {"pulses", pulses}};
}

std::vector<PulseStep> schedule_from_json(const json& j,
                                          const std::string& path) {
  require_keys(j, {"count", "pulses"}, {}, path);
  const int count = as_int(j.at("count"), path + ".count");
  const json& pulses = j.at("pulses");
  if (!pulses.is_array() || static_cast<int>(pulses.size()) != count)
    throw ValidationError(path + ".pulses: expected " + std::to_string(count) +
                          " entries");
  std::vector<PulseStep> out;
  for (int i = 0; i < count; ++i) {
    const std::string p = path + ".pulses[" + std::to_string(i) + "]";
    const json& e = pulses[i];
    require_keys(e, {"pulse", "generator", "duration_ns"}, {"negated"}, p);
    PulseStep step;
    step.pulse = as_int(e.at("pulse"), p + ".pulse");
    const std::string gen = e.at("generator").is_string()
                                ? e.at("generator").get<std::string>()
                                : "";
    if (gen != "a" && gen != "b")
      throw ValidationError(p + ".generator: expected \"a\" or \"b\"");
    step.use_b = gen == "b";
    step.negated = e.contains("negated") && e.at("negated").is_boolean()
                       ? e.at("negated").get<bool>()
                       : false;
    step.duration = as_double(e.at("duration_ns"), p + ".duration_ns");
    if (step.duration < 0.0)
      throw ValidationError(p + ".duration_ns: must be non-negative");
    out.push_back(step);
  }
  return out;
}

json read_json_file(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw IoError("cannot open " + file.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ValidationError(file.string() + ": " + e.what());
  }
  return j;
}

void write_json_file(const std::filesystem::path& file, const json& j) {
  std::ofstream out(file);
  if (!out) throw IoError("cannot write " + file.string());
  out << j.dump(2) << '\n';
  if (!out) throw IoError("failed writing " + file.string());
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_csv(const std::filesystem::path& file,
               const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  std::ofstream out(file);
  if (!out) throw IoError("cannot write " + file.string());
  for (size_t i = 0; i < header.size(); ++i)
    out << header[i] << (i + 1 < header.size() ? "," : "");
  out << '\n';
  for (const auto& row : rows) {
    if (row.size() != header.size())
      throw ValidationError("csv row width does not match the header");
    for (size_t i = 0; i < row.size(); ++i)
      out << format_double(row[i]) << (i + 1 < row.size() ? "," : "");
    out << '\n';
  }
  if (!out) throw IoError("failed writing " + file.string());
}

std::string fnv1a64_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

std::string hash_file(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw IoError("cannot open " + file.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return fnv1a64_hex(ss.str());
}

json manifest_to_json(const RunManifest& m) {
  return json{{"format_version", 1},
              {"tool", "qzeno"},
              {"command", m.command},
              {"parameters", m.parameters},
              {"seeds", m.seeds},
              {"tolerance_profile", m.tolerance_profile},
              {"inputs", m.inputs},
              {"outputs", m.outputs}};
}

void write_manifest(const std::filesystem::path& file, const RunManifest& m) {
  write_json_file(file, manifest_to_json(m));
}

}  // namespace qzeno::io
