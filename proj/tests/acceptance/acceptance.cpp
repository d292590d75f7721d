// Acceptance gate: ten go/no-go checks covering the full feature surface.
// Prints one PASS/FAIL line per criterion (plus indented context) and exits
// with the number of failed criteria.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "qzeno/angular.hpp"
#include "qzeno/code_search.hpp"
#include "qzeno/commands.hpp"
#include "qzeno/linalg.hpp"
#include "qzeno/nh_control.hpp"
#include "qzeno/rb78.hpp"
#include "qzeno/serialize.hpp"
#include "qzeno/zeno_engine.hpp"

using namespace qzeno;
namespace fs = std::filesystem;

namespace {

// --- pinned tolerances ----------------------------------------------------
constexpr double kStrictZero = 1e-12;       // criterion 2 residuals
constexpr double kSearchTarget = 1e-10;     // criterion 3 total residual
constexpr int kSearchIterations = 100000;   // criterion 3 budget
constexpr double kCheckTol = 1e-5;          // criterion 3 per-element check
constexpr double kEtaTol = 1e-5;            // criterion 4 vs 12*sqrt(2)/17
constexpr double kEtaPrintTol = 5e-6;       // criterion 4 vs rounded 0.00173
constexpr double kToySlopeTol = 0.05;       // criterion 5a
constexpr double kRbSlopeTol = 0.1;         // criterion 5b
constexpr double kInverseTol = 1e-8;        // criterion 6 Frobenius
constexpr double kDeskTarget = 1e-8;        // criterion 7 test function
constexpr double kJacobianRelTol = 1e-4;    // criterion 9 finite differences
constexpr double kRateRelTol = 1e-8;        // criterion 9 ODE cross-check

int failures = 0;

void report(int criterion, bool ok, const std::string& what) {
  std::printf("CRITERION %2d: %s - %s\n", criterion, ok ? "PASS" : "FAIL",
              what.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

void info(const std::string& line) {
  std::printf("              %s\n", line.c_str());
  std::fflush(stdout);
}

std::string num(double v) { return io::format_double(v); }

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) return "<unreadable:" + p.string() + ">";
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<Matrix> mats_of(const std::vector<HermitianOperator>& ops) {
  std::vector<Matrix> out;
  for (const auto& op : ops) out.push_back(op.mat);
  return out;
}

fs::path scratch_root() {
  const fs::path root = fs::temp_directory_path() / "qzeno-acceptance";
  fs::remove_all(root);
  fs::create_directories(root);
  return root;
}

// Shared fixtures reused across criteria.
struct RbModel {
  Matrix coder, decoder, projector;
  Vector psi0;
  ErrorModel model;
};

RbModel rb_protection_model() {
  RbModel rb;
  rb.coder = rb78::coding_matrix();
  rb.decoder = rb.coder.adjoint();
  const auto targets = rb78::target_subspace();
  rb.projector = projector_onto(targets);
  rb.psi0 = ((targets[0] + targets[1]) / std::sqrt(2.0)).eval();
  rb.model.generators = rb78::error_set(rb78::ElectricGauge::kRaw);
  for (size_t m = 0; m < rb.model.generators.size(); ++m) {
    ErrorSignal s;
    s.kind = SignalKind::kConstant;
    s.amplitude = 0.02 * (1.0 + 0.15 * static_cast<double>(m));
    rb.model.signals.push_back(s);
  }
  rb.model.seed = 1;
  return rb;
}

double rb_single_cycle_infidelity(const RbModel& rb, double t) {
  const Matrix u =
      error_propagator(rb.model, t, PropagationMode::kExactPiecewise, 64);
  const ZenoCycleResult r =
      zeno_cycle(rb.psi0, rb.coder, rb.decoder, rb.projector, u);
  return 1.0 - r.success_probability;
}

struct DeskFixture {
  std::vector<Matrix> errors;
  ControlPair pair{Matrix::Identity(1, 1), Matrix::Identity(1, 1)};
  Supervector info;
  SuperMatrixSet set;
  TimingSolveResult solved;
  BracketGenerationReport bracket;
};

DeskFixture solve_desk_instance() {
  DeskFixture desk;
  std::mt19937_64 rng(9001);
  for (int m = 0; m < 2; ++m) {
    Matrix h = random_hermitian(4, rng);
    h -= (h.trace() / 4.0) * Matrix::Identity(4, 4);
    desk.errors.push_back(h);
  }
  desk.pair = ControlPair(random_hermitian(4, rng), random_hermitian(4, rng));
  desk.info.dim = 4;
  desk.info.comps.push_back(random_state(4, rng));
  desk.set = build_supermatrices(desk.errors, 1);
  desk.bracket = bracket_generation_check(desk.pair.a, desk.pair.b);

  ControlSolveParams params;
  params.seed = 3;
  params.target_g = kDeskTarget;
  params.max_steps = 4000;
  desk.solved = solve_timings(desk.set, desk.pair, desk.info, params);
  return desk;
}

double decode_inverse_defect(const ControlPair& pair,
                             const std::vector<double>& timings) {
  const Matrix u_cod = schedule_propagator(pair, coding_sequence(timings));
  const Matrix u_dec = schedule_propagator(pair, decoding_sequence(timings));
  const int n = pair.dim();
  return (u_dec * u_cod - Matrix::Identity(n, n)).norm();  // Frobenius
}

}  // namespace

int main() {
  const fs::path scratch = scratch_root();
  std::printf("acceptance gate (scratch: %s)\n\n", scratch.string().c_str());

  // ---- 1: dimension-count feasibility ------------------------------------
  try {
    const bool pass7 = hamming_bound_ok(7, 6);
    const bool fail6 = !hamming_bound_ok(6, 6);
    report(1, pass7 && fail6,
           "ancilla dimension screen: 7 levels admit 6 errors (" +
               std::string(pass7 ? "yes" : "no") + "), 6 levels do not (" +
               std::string(fail6 ? "confirmed" : "violated") + ")");
  } catch (const std::exception& e) {
    report(1, false, std::string("exception: ") + e.what());
  }

  // ---- 2: hand-derived codewords against all six couplings ----------------
  try {
    const auto codewords = rb78::analytic_codewords();
    const auto raw = rb78::error_set(rb78::ElectricGauge::kRaw);

    double magnetic_residual = 0.0;
    for (int m = 0; m < 3; ++m)
      for (const Vector& t : codewords)
        for (const Vector& s : codewords)
          magnetic_residual =
              std::max(magnetic_residual, std::abs(t.dot(raw[m].mat * s)));

    const auto gen = check_generalized_condition(codewords, mats_of(raw));
    double magnetic_xi = 0.0;
    for (int m = 0; m < 3; ++m)
      magnetic_xi = std::max(magnetic_xi, std::abs(gen.xi[m]));

    const bool ok = magnetic_residual < kStrictZero &&
                    magnetic_xi < kStrictZero &&
                    gen.max_deviation < kStrictZero && gen.satisfied;
    report(2, ok,
           "codeword residuals: magnetic strict " + num(magnetic_residual) +
               ", magnetic scalar " + num(magnetic_xi) +
               ", common-scalar deviation " + num(gen.max_deviation) +
               " (all < " + num(kStrictZero) + ")");
    info("electric common scalars: xy=" + num(gen.xi[3]) +
         " xz=" + num(gen.xi[4]) + " yz=" + num(gen.xi[5]));
  } catch (const std::exception& e) {
    report(2, false, std::string("exception: ") + e.what());
  }

  // ---- 3: iterative search finds the 14-level code -------------------------
  try {
    const auto shifted_ops = rb78::error_set(rb78::ElectricGauge::kCodeShifted);
    const auto shifted = mats_of(shifted_ops);
    int converged = 0;
    int first_seed = 0;
    FindCodeResult first;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      SearchParams params;
      params.seed = seed;
      params.max_iterations = kSearchIterations;
      params.target_residual = kSearchTarget;
      const FindCodeResult result = find_code(shifted, 2, params);
      if (result.search.converged) {
        ++converged;
        if (first_seed == 0) {
          first_seed = static_cast<int>(seed);
          first = result;
        }
      }
    }

    bool check_ok = false;
    if (first_seed != 0) {
      const fs::path dir = scratch / "criterion3";
      fs::create_directories(dir);
      io::write_json_file(dir / "errors.json",
                          io::error_set_to_json(shifted_ops));
      io::write_json_file(dir / "code.json",
                          io::code_basis_to_json(first.basis));
      cmd::CheckCodeOptions check;
      check.global.out = dir;
      check.errors_file = dir / "errors.json";
      check.code_file = dir / "code.json";
      check.tol = kCheckTol;
      check.strict = true;
      check_ok = cmd::run_check_code(check) == cmd::kExitOk;
    }

    report(3, converged >= 1 && check_ok,
           "code search on the 14-level instance: " + std::to_string(converged) +
               "/10 seeds reached total residual < " + num(kSearchTarget) +
               " within " + std::to_string(kSearchIterations) + " iterations");
    if (first_seed != 0)
      info("first converged seed " + std::to_string(first_seed) + ": " +
           std::to_string(first.search.iterations) + " iterations, " +
           std::to_string(first.search.restarts) + " restarts, residual " +
           num(first.search.residual) + "; independent strict check at " +
           num(kCheckTol) + (check_ok ? " passed" : " FAILED"));
  } catch (const std::exception& e) {
    report(3, false, std::string("exception: ") + e.what());
  }

  // ---- 4: coherence-transfer efficiency -----------------------------------
  try {
    const double ratio = rb78::gamma_ratio_from_cg();
    const double eta = rb78::projection_efficiency(ratio, 1.0);
    const double reference = 12.0 * std::sqrt(2.0) / 17.0;
    const bool eta_ok = std::abs(eta - reference) < kEtaTol;
    // The published loss 0.00173 is the 3-significant-digit rounding of the
    // exact 1 - 12 sqrt(2)/17 = 0.0017316...; accept up to half an ulp of the
    // printed value.
    const bool loss_ok = (1.0 - eta) <= 0.00173 + kEtaPrintTol;
    report(4, eta_ok && loss_ok,
           "transfer efficiency eta = " + num(eta) + " vs 12*sqrt(2)/17 = " +
               num(reference) + " (|diff| = " + num(std::abs(eta - reference)) +
               " < " + num(kEtaTol) + ")");
    info("rate ratio " + num(ratio) + " (= 8/9); coherence loss 1 - eta = " +
         num(1.0 - eta) + ", printed value 0.00173 matched within " +
         num(kEtaPrintTol));
  } catch (const std::exception& e) {
    report(4, false, std::string("exception: ") + e.what());
  }

  // ---- 5: quadratic interval scaling --------------------------------------
  double rb_quadratic_c = 0.0;  // reused by criterion 8
  try {
    // (a) two-level closed-form instance.
    const double a = 0.4;
    ErrorModel toy;
    Matrix sz(2, 2);
    sz << 1, 0, 0, -1;
    toy.generators.emplace_back("z", sz);
    ErrorSignal sig;
    sig.kind = SignalKind::kConstant;
    sig.amplitude = a;
    toy.signals = {sig};
    Vector plus(2);
    plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    const Matrix eye = Matrix::Identity(2, 2);
    const Matrix proj = projector_onto({plus});

    std::vector<double> toy_times;
    for (int i = 0; i < 6; ++i) toy_times.push_back(1e-3 * std::pow(2.0, i));
    const ScalingFit toy_fit = infidelity_scaling(toy_times, [&](double t) {
      const Matrix u =
          error_propagator(toy, t, PropagationMode::kExactPiecewise, 16);
      return 1.0 - zeno_cycle(plus, eye, eye, proj, u).success_probability;
    });

    // (b) full 14-level protected instance.
    const RbModel rb = rb_protection_model();
    std::vector<double> rb_times;
    for (int i = 0; i < 5; ++i)
      rb_times.push_back(1e-3 * std::pow(10.0, i / 4.0));
    const ScalingFit rb_fit = infidelity_scaling(
        rb_times, [&](double t) { return rb_single_cycle_infidelity(rb, t); });
    rb_quadratic_c = std::exp(rb_fit.intercept);

    const bool toy_ok = std::abs(toy_fit.slope - 2.0) < kToySlopeTol;
    const bool rb_ok = std::abs(rb_fit.slope - 2.0) < kRbSlopeTol;
    report(5, toy_ok && rb_ok,
           "interval-scaling exponents: two-level " + num(toy_fit.slope) +
               " (2 +- " + num(kToySlopeTol) + "), 14-level protected " +
               num(rb_fit.slope) + " (2 +- " + num(kRbSlopeTol) + ")");
    info("14-level per-cycle quadratic coefficient c = " +
         num(rb_quadratic_c));
  } catch (const std::exception& e) {
    report(5, false, std::string("exception: ") + e.what());
  }

  // Shared: desk-scale timing solve (criteria 6 and 7).
  DeskFixture desk;
  bool desk_built = false;
  try {
    desk = solve_desk_instance();
    desk_built = true;
  } catch (const std::exception& e) {
    info(std::string("desk instance failed to build: ") + e.what());
  }

  // ---- 6: decoding schedules invert coding schedules -----------------------
  try {
    std::vector<std::string> details;
    bool ok = true;
    if (desk_built) {
      const double defect = decode_inverse_defect(desk.pair, desk.solved.timings);
      ok = ok && defect < kInverseTol;
      details.push_back("desk solve " + num(defect));
    } else {
      ok = false;
      details.push_back("desk solve unavailable");
    }
    const ControlPair rb_pair = rb78::control_pair();
    const double ref_defect =
        decode_inverse_defect(rb_pair, rb78::reference_timings());
    ok = ok && ref_defect < kInverseTol;
    details.push_back("published 34-pulse schedule " + num(ref_defect));

    std::mt19937_64 rng(12);
    std::vector<double> random_timings;
    for (int i = 0; i < 9; ++i)
      random_timings.push_back(2.0 + 5.0 * uniform_real(rng));
    const double rand_defect = decode_inverse_defect(rb_pair, random_timings);
    ok = ok && rand_defect < kInverseTol;
    details.push_back("random 9-pulse schedule " + num(rand_defect));

    std::string joined;
    for (const auto& d : details) joined += (joined.empty() ? "" : ", ") + d;
    report(6, ok, "decode*code - identity (Frobenius): " + joined + " (all < " +
                      num(kInverseTol) + ")");
  } catch (const std::exception& e) {
    report(6, false, std::string("exception: ") + e.what());
  }

  // ---- 7: timing solver at desk scale + published-schedule fixtures --------
  try {
    bool ok = desk_built && desk.bracket.satisfied && desk.solved.converged &&
              desk.solved.g < kDeskTarget;

    const auto& ref = rb78::reference_timings();
    double sum = 0.0, lo = ref.empty() ? 0.0 : ref[0], hi = lo;
    for (double t : ref) {
      sum += t;
      lo = std::min(lo, t);
      hi = std::max(hi, t);
    }
    const bool fixtures_ok = ref.size() == 34 && std::abs(lo - 2.8717) < 1e-12 &&
                             std::abs(hi - 7.3834) < 1e-12 &&
                             std::abs(sum - 170.3543) < 1e-9 &&
                             std::abs(lo - 2.87) < 5e-3 &&
                             std::abs(hi - 7.38) < 5e-3;
    ok = ok && fixtures_ok;

    report(7, ok,
           "alternating-pulse solver: 4-level instance reached G = " +
               (desk_built ? num(desk.solved.g) : std::string("n/a")) +
               " in " + (desk_built ? std::to_string(desk.solved.steps)
                                    : std::string("-")) +
               " steps (target " + num(kDeskTarget) +
               "); published schedule fixtures " +
               (fixtures_ok ? "verified" : "MISMATCH") +
               " (34 pulses, range [2.8717, 7.3834] ns)");
    if (desk_built)
      info("generator pair spans the full operator algebra: rank " +
           std::to_string(desk.bracket.rank) + "/16");
    info("published per-pulse durations sum to " + num(sum) +
         " ns; the separately published ~125 ns total is inconsistent with "
         "the per-pulse list and is not used as a gate");

    // Stretch attempt on the 14-level pair (recorded, not gating): the
    // coupling constant behind the published schedule is not available, and
    // the pair's bracket algebra closes on a 49-dimensional subalgebra.
    const ControlPair rb_pair = rb78::control_pair();
    const auto rb_bracket = bracket_generation_check(rb_pair.a, rb_pair.b);
    const auto raw = mats_of(rb78::error_set(rb78::ElectricGauge::kRaw));
    const SuperMatrixSet rb_set = build_supermatrices(raw, 2);
    Supervector rb_info;
    rb_info.dim = rb78::kDim;
    rb_info.comps = rb78::target_subspace();
    ControlSolveParams stretch;
    stretch.seed = 11;
    stretch.max_steps = 200;
    stretch.target_g = 1e-6;
    const TimingSolveResult rb_solve =
        solve_timings(rb_set, rb_pair, rb_info, stretch);
    info("14-level stretch attempt (200 steps, calibrated coupling): best G = " +
         num(rb_solve.g) + (rb_solve.converged ? " (converged)" :
         " (not converged; pair algebra rank " +
             std::to_string(rb_bracket.rank) + "/196 cannot generate an "
             "arbitrary coding unitary)"));
  } catch (const std::exception& e) {
    report(7, false, std::string("exception: ") + e.what());
  }

  // ---- 8: end-to-end protection beats the no-coding control ----------------
  try {
    const RbModel rb = rb_protection_model();
    const double t = 5e-3;
    ProtectionParams params;
    params.cycles = 100;
    params.cycle_time = t;
    params.mode = PropagationMode::kExactPiecewise;
    params.n_steps = 64;

    const ProtectionResult protected_run = run_protection(
        rb.psi0, rb.coder, rb.decoder, rb.projector, rb.model, params);
    const Matrix eye = Matrix::Identity(rb78::kDim, rb78::kDim);
    const ProtectionResult control_run = run_protection(
        rb.psi0, eye, eye, rb.projector, rb.model, params);

    const double bound = 1.0 - 100.0 * rb_quadratic_c * t * t;
    const bool bound_ok = protected_run.final_fidelity > bound;
    const bool control_ok =
        control_run.final_fidelity < protected_run.final_fidelity;
    report(8, bound_ok && control_ok && rb_quadratic_c > 0.0,
           "100 protected cycles at T = " + num(t) + ": fidelity " +
               num(protected_run.final_fidelity) + " > 1 - 100 c T^2 = " +
               num(bound) + "; no-coding control " +
               num(control_run.final_fidelity) + " is strictly lower");
    info("cumulative success probability: protected " +
         num(protected_run.cumulative_success) + ", control " +
         num(control_run.cumulative_success));
  } catch (const std::exception& e) {
    report(8, false, std::string("exception: ") + e.what());
  }

  // ---- 9: numerical hygiene -------------------------------------------------
  try {
    std::vector<std::string> broken;

    {  // unitarity of generated propagators
      std::mt19937_64 rng(41);
      const Matrix u = matrix_exponential_hermitian(random_hermitian(8, rng), 0.7);
      const ControlPair rb_pair = rb78::control_pair();
      const Matrix seq = schedule_propagator(
          rb_pair, coding_sequence(rb78::reference_timings()));
      if (!is_unitary(u, 1e-12) || !is_unitary(seq, 1e-10))
        broken.push_back("unitarity");
    }

    {  // trace preservation through a density-matrix cycle
      std::mt19937_64 rng(43);
      const Matrix g = random_matrix(rb78::kDim, rb78::kDim, rng);
      Matrix rho = g * g.adjoint();
      rho /= rho.trace().real();
      const Matrix coder = rb78::coding_matrix();
      const Matrix proj = projector_onto(rb78::analytic_codewords());
      // Decoder-side projector: measure in the coded frame after re-encoding.
      const Matrix u = matrix_exponential_hermitian(
          random_hermitian(rb78::kDim, rng), 0.02);
      const DensityCycleResult r = zeno_cycle_density(
          rho, coder, coder.adjoint(),
          coder.adjoint() * proj * coder, u);
      if (std::abs(r.post.trace().real() - 1.0) > 1e-10 ||
          r.success_probability < 0.0 || r.success_probability > 1.0)
        broken.push_back("trace preservation");
    }

    {  // Casimir invariant
      const AngularMomentumOps l = angular_momentum_operators(3.0);
      const Matrix casimir = l.lx * l.lx + l.ly * l.ly + l.lz * l.lz;
      if ((casimir - 12.0 * Matrix::Identity(7, 7)).cwiseAbs().maxCoeff() >
          1e-12)
        broken.push_back("casimir");
    }

    {  // coupling-coefficient row orthogonality
      double worst = 0.0;
      for (double ja : {3.5, 2.5})
        for (double jb : {3.5, 2.5})
          for (double m = -2.5; m <= 2.5; m += 1.0) {
            double sum = 0.0;
            for (int twice_ml = -6; twice_ml <= 6; twice_ml += 2)
              for (int twice_ms = -1; twice_ms <= 1; twice_ms += 2) {
                const double ml = twice_ml / 2.0, ms = twice_ms / 2.0;
                sum += clebsch_gordan(3.0, ml, 0.5, ms, ja, m) *
                       clebsch_gordan(3.0, ml, 0.5, ms, jb, m);
              }
            const double want = (ja == jb) ? 1.0 : 0.0;
            worst = std::max(worst, std::abs(sum - want));
          }
      if (worst > 1e-12) broken.push_back("coupling orthogonality");
    }

    if (desk_built) {  // linearized control system vs finite differences
      const PulseSequence seq(desk.pair);
      std::mt19937_64 rng(6);
      std::vector<double> timings;
      for (int i = 0; i < 4; ++i)
        timings.push_back(2.0 + 4.0 * uniform_real(rng));
      const std::vector<int> free_timings{0, 2};
      const ControlStepSystem sys = control_step_system(
          desk.set, seq, desk.info, timings, free_timings, 0.5);
      const int k_err = desk.set.error_count();
      const auto stacked = [&](const std::vector<double>& tt) {
        const Matrix u = seq.propagator(tt);
        RealVector f(2 * k_err);
        for (int k = 0; k < k_err; ++k) {
          const Matrix& e =
              desk.set.errors[desk.set.ops[desk.set.first_error_op() + k]
                                  .error_index];
          const Complex val = desk.info.comps[0].dot(u.adjoint() * e * u *
                                                     desk.info.comps[0]);
          f[k] = val.real();
          f[k_err + k] = val.imag();
        }
        return f;
      };
      const double h = 1e-6;
      double rel = 0.0;
      for (size_t c = 0; c < free_timings.size(); ++c) {
        std::vector<double> up = timings, dn = timings;
        up[free_timings[c]] += h;
        dn[free_timings[c]] -= h;
        const RealVector col = (stacked(up) - stacked(dn)) / (2.0 * h);
        for (int r = 0; r < sys.s.rows(); ++r) {
          const double fd = col[sys.kept_rows[r]];
          const double scale = std::max(std::abs(fd), 1e-6);
          rel = std::max(rel,
                         std::abs(sys.s(r, static_cast<int>(c)) - fd) / scale);
        }
      }
      if (rel > kJacobianRelTol) broken.push_back("control linearization");
    } else {
      broken.push_back("control linearization (desk unavailable)");
    }

    {  // rate equations: closed form vs integrator
      rb78::RateState init;
      init.pop_src1 = 1.0;
      init.pop_src2 = 0.6;
      init.coh_src = Complex(0.4, -0.3);
      const double g1 = 0.08, g2 = 0.09, t = 10.0 / g1;
      const auto exact = rb78::projection_rate_evolution(init, g1, g2, t);
      const auto numeric =
          rb78::projection_rate_evolution_numeric(init, g1, g2, t);
      const double rel =
          std::max({std::abs(exact.pop_src1 - numeric.pop_src1),
                    std::abs(exact.pop_src2 - numeric.pop_src2),
                    std::abs(exact.coh_src - numeric.coh_src),
                    std::abs(exact.pop_dst1 - numeric.pop_dst1),
                    std::abs(exact.pop_dst2 - numeric.pop_dst2),
                    std::abs(exact.coh_dst - numeric.coh_dst)}) /
          std::max(1.0, std::abs(exact.pop_dst1));
      if (rel > kRateRelTol) broken.push_back("rate equations");
    }

    std::string detail = "unitarity, trace preservation, Casimir, coupling "
                         "orthogonality, control linearization (rel " +
                         num(kJacobianRelTol) + "), rate equations (rel " +
                         num(kRateRelTol) + ")";
    if (broken.empty()) {
      report(9, true, "numerical hygiene: " + detail + " - all verified");
    } else {
      std::string joined;
      for (const auto& b : broken) joined += (joined.empty() ? "" : ", ") + b;
      report(9, false, "numerical hygiene failures: " + joined);
    }
  } catch (const std::exception& e) {
    report(9, false, std::string("exception: ") + e.what());
  }

  // ---- 10: byte-identical reruns -------------------------------------------
  try {
    const fs::path dir = scratch / "criterion10";
    fs::create_directories(dir);

    // Inputs shared by both runs.
    const auto raw_ops = rb78::error_set(rb78::ElectricGauge::kRaw);
    io::write_json_file(dir / "errors.json", io::error_set_to_json(raw_ops));
    const CodeBasis protected_basis =
        make_code_basis(rb78::target_subspace(), mats_of(raw_ops));
    io::write_json_file(dir / "protected.json",
                        io::code_basis_to_json(protected_basis));

    io::json cfg;
    cfg["schema_version"] = 1;
    cfg["errors"] = "errors.json";
    cfg["coder"] = {{"kind", "identity"}};
    cfg["protected"] = "protected.json";
    io::json signals = io::json::array();
    for (size_t m = 0; m < raw_ops.size(); ++m) {
      if (m % 2 == 0)
        signals.push_back({{"kind", "filtered_noise"},
                           {"amplitude", 0.05},
                           {"correlation_time", 0.4}});
      else
        signals.push_back({{"kind", "sinusoid"},
                           {"amplitude", 0.04},
                           {"frequency", 2.5}});
    }
    cfg["model"] = {{"seed", 7}, {"signals", signals}};
    cfg["run"] = {{"cycles", 5}, {"cycle_time", 0.02}};
    cfg["propagation"] = {{"mode", "exact_piecewise"}, {"n_steps", 16}};
    io::write_json_file(dir / "config.json", cfg);

    cmd::SimulateOptions opt;
    opt.config_file = dir / "config.json";
    opt.global.out = dir / "run-a";
    const int code_a = cmd::run_simulate(opt);
    opt.global.out = dir / "run-b";
    const int code_b = cmd::run_simulate(opt);

    bool ok = code_a == cmd::kExitOk && code_b == cmd::kExitOk;
    int compared = 0;
    for (const char* name : {"trace.csv", "summary.json", "manifest.json"}) {
      const std::string a = read_file(dir / "run-a" / name);
      const std::string b = read_file(dir / "run-b" / name);
      ok = ok && !a.empty() && a == b;
      ++compared;
    }
    report(10, ok,
           "reran the same simulation manifest twice: " +
               std::to_string(compared) +
               " output files byte-identical across runs");
  } catch (const std::exception& e) {
    report(10, false, std::string("exception: ") + e.what());
  }

  std::printf("\n%s: %d/10 criteria passed\n",
              failures == 0 ? "ACCEPTED" : "REJECTED", 10 - failures);
  return failures;
}
