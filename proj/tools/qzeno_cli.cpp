#include <CLI11.hpp>

#include <cstdint>
#include <string>

#include "qzeno/commands.hpp"

// Command-line front end.  Exit codes: 0 success, 1 usage, 2 invalid
// input/config, 3 numerical target not reached, 4 I/O failure.
int main(int argc, char** argv) {
  CLI::App app{"Coherence protection toolkit: code-subspace search, "
               "alternating-pulse synthesis and protection-cycle simulation"};
  app.require_subcommand(1);

  qzeno::cmd::GlobalOptions global;
  std::uint64_t seed_value = 0;
  app.add_option("--out", global.out, "Output directory")
      ->capture_default_str();
  auto* seed_opt =
      app.add_option("--seed", seed_value, "Seed for all randomized stages");
  app.add_flag("--deterministic", global.deterministic,
               "Use the fixed default seed when --seed is absent");
  app.add_option("--tolerance-profile", global.tolerance_profile,
                 "Numerical tolerance profile: default, strict or loose")
      ->check(CLI::IsMember({"default", "strict", "loose"}))
      ->capture_default_str();

  int exit_code = 0;
  const auto finish_globals = [&] {
    global.seed = seed_value;
    global.seed_set = seed_opt->count() > 0;
  };

  // find-code
  qzeno::cmd::FindCodeOptions find_opt;
  auto* find = app.add_subcommand(
      "find-code", "Search for a subspace on which every error operator has "
                   "vanishing matrix elements");
  find->fallthrough();
  find->add_option("--errors", find_opt.errors_file, "Error-set JSON file")
      ->required();
  find->add_option("--codewords", find_opt.blocks, "Subspace dimension")
      ->capture_default_str();
  find->add_option("--max-iterations", find_opt.params.max_iterations)
      ->capture_default_str();
  find->add_option("--target-residual", find_opt.params.target_residual)
      ->capture_default_str();
  find->add_option("--step-fraction", find_opt.params.step_fraction)
      ->capture_default_str();
  find->add_option("--restart-limit", find_opt.params.restart_limit)
      ->capture_default_str();
  find->callback([&] {
    finish_globals();
    find_opt.global = global;
    exit_code = qzeno::cmd::run_find_code(find_opt);
  });

  // check-code
  qzeno::cmd::CheckCodeOptions check_opt;
  auto* check = app.add_subcommand(
      "check-code", "Verify a stored codeword basis against an error set");
  check->fallthrough();
  check->add_option("--errors", check_opt.errors_file, "Error-set JSON file")
      ->required();
  check->add_option("--code", check_opt.code_file, "Code-basis JSON file")
      ->required();
  check->add_option("--tol", check_opt.tol, "Acceptance tolerance")
      ->capture_default_str();
  check->add_flag("--strict", check_opt.strict,
                  "Require exactly vanishing sandwiches (no common-scalar "
                  "allowance)");
  check->callback([&] {
    finish_globals();
    check_opt.global = global;
    exit_code = qzeno::cmd::run_check_code(check_opt);
  });

  // solve-timings
  qzeno::cmd::SolveTimingsOptions solve_opt;
  auto* solve = app.add_subcommand(
      "solve-timings", "Solve for alternating-pulse durations that send an "
                       "information basis onto a valid code subspace");
  solve->fallthrough();
  solve->add_option("--errors", solve_opt.errors_file, "Error-set JSON file")
      ->required();
  solve->add_option("--pair", solve_opt.pair_file,
                    "Control-pair JSON file (the two pulse generators)")
      ->required();
  solve->add_option("--basis", solve_opt.basis_file,
                    "Information-basis JSON file (code-basis format)")
      ->required();
  solve->add_option("--pulses", solve_opt.params.n_pulses,
                    "Pulse count (0 = constraint count plus --extra)")
      ->capture_default_str();
  solve->add_option("--extra", solve_opt.params.delta_n,
                    "Extra pulses beyond the constraint count")
      ->capture_default_str();
  solve->add_option("--t-min", solve_opt.params.t_min, "Shortest pulse (ns)")
      ->capture_default_str();
  solve->add_option("--t-max", solve_opt.params.t_max, "Longest pulse (ns)")
      ->capture_default_str();
  solve->add_option("--target", solve_opt.params.target_g,
                    "Test-function convergence target")
      ->capture_default_str();
  solve->add_option("--max-steps", solve_opt.params.max_steps)
      ->capture_default_str();
  solve->callback([&] {
    finish_globals();
    solve_opt.global = global;
    exit_code = qzeno::cmd::run_solve_timings(solve_opt);
  });

  // simulate
  qzeno::cmd::SimulateOptions sim_opt;
  auto* sim = app.add_subcommand(
      "simulate", "Run repeated protection cycles from a JSON configuration");
  sim->fallthrough();
  sim->add_option("--config", sim_opt.config_file, "Simulation JSON file")
      ->required();
  sim->callback([&] {
    finish_globals();
    sim_opt.global = global;
    exit_code = qzeno::cmd::run_simulate(sim_opt);
  });

  // rb78 family
  auto* rb = app.add_subcommand(
      "rb78", "Worked 14-level example: error operators, control pair, "
              "hand-derived codewords, projection efficiency, pipeline");
  rb->require_subcommand(1);
  rb->fallthrough();

  qzeno::cmd::Rb78ErrorsOptions rb_errors_opt;
  auto* rb_errors =
      rb->add_subcommand("errors", "Write the six stray-field couplings");
  rb_errors->fallthrough();
  rb_errors->add_flag(
      "--code-shifted", rb_errors_opt.code_shifted,
      "Remove the common scalar each quadratic coupling takes on the "
      "hand-derived code subspace");
  rb_errors->callback([&] {
    finish_globals();
    rb_errors_opt.global = global;
    exit_code = qzeno::cmd::run_rb78_errors(rb_errors_opt);
  });

  qzeno::cmd::Rb78ControlPairOptions rb_pair_opt;
  auto* rb_pair = rb->add_subcommand(
      "control-pair", "Write the two alternating pulse generators");
  rb_pair->fallthrough();
  rb_pair->add_option("--raman-scale", rb_pair_opt.raman_scale,
                      "Two-photon coupling scale (0 = calibrated)")
      ->capture_default_str();
  rb_pair->callback([&] {
    finish_globals();
    rb_pair_opt.global = global;
    exit_code = qzeno::cmd::run_rb78_control_pair(rb_pair_opt);
  });

  auto* rb_code = rb->add_subcommand(
      "codewords", "Write the hand-derived codewords, the protected "
                   "information basis and the coding matrix");
  rb_code->fallthrough();
  rb_code->callback([&] {
    finish_globals();
    exit_code = qzeno::cmd::run_rb78_codewords(global);
  });

  auto* rb_eta = rb->add_subcommand(
      "eta", "Coherence transfer efficiency of the projection stage");
  rb_eta->fallthrough();
  rb_eta->callback([&] {
    finish_globals();
    exit_code = qzeno::cmd::run_rb78_eta(global);
  });

  auto* rb_timings = rb->add_subcommand(
      "timings", "Write the 34 published pulse durations as a schedule");
  rb_timings->fallthrough();
  rb_timings->callback([&] {
    finish_globals();
    exit_code = qzeno::cmd::run_rb78_timings(global);
  });

  qzeno::cmd::Rb78PipelineOptions rb_pipe_opt;
  auto* rb_pipe = rb->add_subcommand(
      "pipeline", "Chain code search, an optional timing attempt and a "
                  "protection run");
  rb_pipe->fallthrough();
  rb_pipe->add_flag("--with-timings", rb_pipe_opt.with_timings,
                    "Attempt the pulse-timing stage (recorded, not required)");
  rb_pipe->add_option("--timing-steps", rb_pipe_opt.timing_steps,
                      "Step budget for the timing attempt")
      ->capture_default_str();
  rb_pipe->add_option("--cycles", rb_pipe_opt.cycles,
                      "Protection cycles to simulate")
      ->capture_default_str();
  rb_pipe->add_option("--cycle-time", rb_pipe_opt.cycle_time,
                      "Protection cycle length (ns)")
      ->capture_default_str();
  rb_pipe->callback([&] {
    finish_globals();
    rb_pipe_opt.global = global;
    exit_code = qzeno::cmd::run_rb78_pipeline(rb_pipe_opt);
  });

  CLI11_PARSE(app, argc, argv);
  return exit_code;
}
