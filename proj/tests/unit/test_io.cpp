#include <doctest.h>

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "qzeno/linalg.hpp"
#include "qzeno/rb78.hpp"
#include "qzeno/serialize.hpp"

using namespace qzeno;
namespace fs = std::filesystem;

namespace {

// Straight-from-the-definition FNV-1a, kept separate from the library's.
std::string fnv_oracle(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

fs::path temp_dir() {
  const fs::path dir =
      fs::temp_directory_path() / "qzeno-io-tests";
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("doubles survive a text round trip bit for bit") {
  std::mt19937_64 rng(2024);
  std::vector<double> values{0.0,     -0.0,    1.0,    -1.0,
                             1e-308,  1e308,   0.1,    1.0 / 3.0,
                             3.9763,  170.3543};
  for (int i = 0; i < 200; ++i)
    values.push_back((uniform_real(rng) - 0.5) * std::pow(10.0, i % 40 - 20));
  for (const double v : values) {
    // from_chars, not stod: stod throws out_of_range on subnormal inputs.
    const std::string text = io::format_double(v);
    double back = 0.0;
    const auto [ptr, ec] =
        std::from_chars(text.data(), text.data() + text.size(), back);
    CHECK(ec == std::errc());
    CHECK(ptr == text.data() + text.size());
    CHECK(back == v);
  }
}

TEST_CASE("matrix and vector round trips are exact") {
  std::mt19937_64 rng(5);
  const Matrix m = random_matrix(3, 4, rng);
  const Matrix m2 = io::matrix_from_json(io::matrix_to_json(m), "m");
  REQUIRE(m2.rows() == 3);
  REQUIRE(m2.cols() == 4);
  CHECK((m - m2).cwiseAbs().maxCoeff() == 0.0);

  const Vector v = random_state(6, rng);
  const Vector v2 = io::vector_from_json(io::vector_to_json(v), "v");
  CHECK((v - v2).norm() == 0.0);
}

TEST_CASE("operator and error-set round trips preserve labels") {
  const auto errors = rb78::error_set();
  const auto back =
      io::error_set_from_json(io::error_set_to_json(errors), "errors");
  REQUIRE(back.size() == errors.size());
  for (size_t i = 0; i < errors.size(); ++i) {
    CHECK(back[i].label == errors[i].label);
    CHECK((back[i].mat - errors[i].mat).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("code basis round trip keeps codewords and residuals") {
  std::vector<Matrix> mats;
  for (const auto& op : rb78::error_set()) mats.push_back(op.mat);
  const CodeBasis basis = make_code_basis(rb78::analytic_codewords(), mats);
  const CodeBasis back =
      io::code_basis_from_json(io::code_basis_to_json(basis), "code");
  REQUIRE(back.codewords.size() == 2);
  CHECK(back.dim == 14);
  for (int i = 0; i < 2; ++i)
    CHECK((back.codewords[i] - basis.codewords[i]).norm() == 0.0);
  CHECK(back.orthonormality_residual == basis.orthonormality_residual);
  CHECK(back.error_orthogonality_residual ==
        basis.error_orthogonality_residual);
}

TEST_CASE("control pair and schedule round trips") {
  const ControlPair pair = rb78::control_pair();
  const ControlPair back =
      io::control_pair_from_json(io::control_pair_to_json(pair), "pair");
  CHECK((back.a - pair.a).cwiseAbs().maxCoeff() == 0.0);
  CHECK((back.b - pair.b).cwiseAbs().maxCoeff() == 0.0);

  const auto schedule = decoding_sequence(rb78::reference_timings());
  const auto sched_back =
      io::schedule_from_json(io::schedule_to_json(schedule), "schedule");
  REQUIRE(sched_back.size() == schedule.size());
  for (size_t i = 0; i < schedule.size(); ++i) {
    CHECK(sched_back[i].pulse == schedule[i].pulse);
    CHECK(sched_back[i].use_b == schedule[i].use_b);
    CHECK(sched_back[i].negated == schedule[i].negated);
    CHECK(sched_back[i].duration == schedule[i].duration);
  }
}

TEST_CASE("strict parsing rejects unknown and missing keys with a path") {
  io::json j = io::matrix_to_json(Matrix::Identity(2, 2));
  j["surprise"] = 1;
  CHECK_THROWS_WITH_AS(io::matrix_from_json(j, "root.matrix"),
                       doctest::Contains("root.matrix"), ValidationError);
  CHECK_THROWS_WITH_AS(io::matrix_from_json(j, "root.matrix"),
                       doctest::Contains("surprise"), ValidationError);

  io::json missing = io::matrix_to_json(Matrix::Identity(2, 2));
  missing.erase("rows");
  CHECK_THROWS_WITH_AS(io::matrix_from_json(missing, "m"),
                       doctest::Contains("rows"), ValidationError);

  io::json wrong_shape = io::matrix_to_json(Matrix::Identity(2, 2));
  wrong_shape["rows"] = 3;
  CHECK_THROWS_AS(io::matrix_from_json(wrong_shape, "m"), ValidationError);
}

TEST_CASE("schedules reject non-positive durations and bad generators") {
  io::json j = io::schedule_to_json(coding_sequence({1.0, 2.0}));
  j["pulses"][0]["duration_ns"] = -1.0;
  CHECK_THROWS_AS(io::schedule_from_json(j, "s"), ValidationError);

  io::json k = io::schedule_to_json(coding_sequence({1.0, 2.0}));
  k["pulses"][1]["generator"] = "c";
  CHECK_THROWS_AS(io::schedule_from_json(k, "s"), ValidationError);
}

TEST_CASE("content fingerprint matches the reference implementation") {
  // Standard FNV-1a test vectors.
  CHECK(io::fnv1a64_hex("") == "cbf29ce484222325");
  CHECK(io::fnv1a64_hex("a") == "af63dc4c8601ec8c");
  CHECK(io::fnv1a64_hex("foobar") == "85944171f73967e8");
  std::mt19937_64 rng(77);
  for (int i = 0; i < 20; ++i) {
    std::string s;
    for (int c = 0; c < i * 7; ++c)
      s.push_back(static_cast<char>(rng() % 256));
    CHECK(io::fnv1a64_hex(s) == fnv_oracle(s));
  }
}

TEST_CASE("json files round trip through disk") {
  const fs::path file = temp_dir() / "roundtrip.json";
  io::json j;
  j["alpha"] = 0.1;
  j["nested"] = {{"k", std::vector<int>{1, 2, 3}}};
  io::write_json_file(file, j);
  CHECK(io::read_json_file(file) == j);
  CHECK(io::hash_file(file).size() == 16);
  CHECK_THROWS_AS(io::read_json_file(temp_dir() / "missing.json"), IoError);

  const fs::path garbled = temp_dir() / "garbled.json";
  std::ofstream(garbled) << "{not json";
  CHECK_THROWS_AS(io::read_json_file(garbled), ValidationError);
}

TEST_CASE("csv writer emits the header and full-precision cells") {
  const fs::path file = temp_dir() / "table.csv";
  io::write_csv(file, {"cycle", "value"},
                {{1.0, 1.0 / 3.0}, {2.0, 0.1}});
  std::ifstream in(file);
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(line == "cycle,value");
  REQUIRE(std::getline(in, line));
  const auto comma = line.find(',');
  CHECK(std::stod(line.substr(comma + 1)) == 1.0 / 3.0);
}

TEST_CASE("run manifests carry schema, tool, and reproducibility data") {
  io::RunManifest m;
  m.command = "find-code";
  m.parameters["max_iterations"] = 1000;
  m.seeds["search"] = 7;
  m.inputs["errors.json"] = io::fnv1a64_hex("payload");
  m.outputs = {"code.json"};
  const io::json j = io::manifest_to_json(m);
  CHECK(j.at("format_version") == 1);
  CHECK(j.at("tool") == "qzeno");
  CHECK(j.at("command") == "find-code");
  CHECK(j.at("seeds").at("search") == 7);
  CHECK(j.at("inputs").at("errors.json") == io::fnv1a64_hex("payload"));

  // Serialization is deterministic: equal manifests produce equal bytes.
  const fs::path f1 = temp_dir() / "m1.json";
  const fs::path f2 = temp_dir() / "m2.json";
  io::write_manifest(f1, m);
  io::write_manifest(f2, m);
  CHECK(io::hash_file(f1) == io::hash_file(f2));
}

}  // TEST_SUITE
