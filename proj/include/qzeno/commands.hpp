#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "qzeno/code_search.hpp"
#include "qzeno/nh_control.hpp"
#include "qzeno/types.hpp"

// Orchestration layer shared by the command-line tool and the test suites:
// each run_* function reads its inputs, writes its output bundle (results,
// logs, manifest) under the output directory and returns a process exit code
// (0 ok, 2 invalid input/config, 3 numerical target not reached, 4 I/O).
namespace qzeno::cmd {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitIo = 4;

struct GlobalOptions {
  std::filesystem::path out = ".";
  std::uint64_t seed = 0;
  bool seed_set = false;
  bool deterministic = false;
  std::string tolerance_profile = "default";

  // --seed wins; --deterministic pins the documented default; otherwise one
  // fresh draw (always recorded in the manifest).
  std::uint64_t effective_seed() const;
};

struct FindCodeOptions {
  GlobalOptions global;
  std::filesystem::path errors_file;
  int blocks = 2;
  SearchParams params;  // seed overridden by global.effective_seed()
};
int run_find_code(const FindCodeOptions& opt);

struct CheckCodeOptions {
  GlobalOptions global;
  std::filesystem::path errors_file;
  std::filesystem::path code_file;
  double tol = 1e-8;
  bool strict = false;  // default accepts the common-scalar (phase) gauge
};
int run_check_code(const CheckCodeOptions& opt);

struct SolveTimingsOptions {
  GlobalOptions global;
  std::filesystem::path errors_file;
  std::filesystem::path pair_file;
  std::filesystem::path basis_file;
  ControlSolveParams params;  // seed overridden by global.effective_seed()
};
int run_solve_timings(const SolveTimingsOptions& opt);

struct SimulateOptions {
  GlobalOptions global;
  std::filesystem::path config_file;
};
int run_simulate(const SimulateOptions& opt);

struct Rb78ErrorsOptions {
  GlobalOptions global;
  bool code_shifted = false;
};
int run_rb78_errors(const Rb78ErrorsOptions& opt);

struct Rb78ControlPairOptions {
  GlobalOptions global;
  double raman_scale = 0.0;  // 0 = calibrated default
};
int run_rb78_control_pair(const Rb78ControlPairOptions& opt);

int run_rb78_codewords(const GlobalOptions& global);
int run_rb78_eta(const GlobalOptions& global);
int run_rb78_timings(const GlobalOptions& global);

struct Rb78PipelineOptions {
  GlobalOptions global;
  bool with_timings = false;  // best-effort stage, recorded either way
  int timing_steps = 400;
  int cycles = 100;
  double cycle_time = 0.05;  // ns
};
int run_rb78_pipeline(const Rb78PipelineOptions& opt);

}  // namespace qzeno::cmd
