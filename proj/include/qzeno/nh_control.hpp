#pragma once

#include <cstdint>
#include <vector>

#include "qzeno/code_search.hpp"
#include "qzeno/linalg.hpp"
#include "qzeno/types.hpp"

namespace qzeno {

// The two alternating pulse generators.  Pulse j (1-based) applies `a` when j
// is odd and `b` when j is even; the sequence propagator is the
// right-to-left product U = exp(-i H_n t_n) ... exp(-i H_2 t_2) exp(-i H_1 t_1).
struct ControlPair {
  Matrix a, b;

  ControlPair() = default;
  ControlPair(Matrix a_, Matrix b_);
  int dim() const { return static_cast<int>(a.rows()); }
};

// One entry of an executable pulse schedule.  `use_b` selects the generator,
// `negated` flips its sign (decoding runs the sequence backwards with negated
// generators), `duration` is in the same time unit the generators' energies
// are expressed in (1/energy).
struct PulseStep {
  int pulse = 0;  // 1-based index into the timing vector
  bool use_b = false;
  bool negated = false;
  double duration = 0.0;
};

std::vector<PulseStep> coding_sequence(const std::vector<double>& timings);
std::vector<PulseStep> decoding_sequence(const std::vector<double>& timings);

// Multiplies out a schedule (first entry acts first).
Matrix schedule_propagator(const ControlPair& pair,
                           const std::vector<PulseStep>& schedule);

// Cached eigensystems of both generators; evaluates sequence propagators and
// their exact per-timing derivatives (product rule, -iH inserted at pulse j).
class PulseSequence {
 public:
  explicit PulseSequence(const ControlPair& pair);

  Matrix propagator(const std::vector<double>& timings) const;
  // du[j] = dU/dt_{j+1}; returns U.
  Matrix propagator_and_derivatives(const std::vector<double>& timings,
                                    std::vector<Matrix>& du) const;
  const ControlPair& pair() const { return pair_; }

 private:
  ControlPair pair_;
  HermitianExp exp_a_, exp_b_;
};

// Sum of |<C| U%(t)^dag E_k U%(t) |C>|^2 over the error-carrying constraint
// operators only (U% is the block-diagonal I-fold repetition of U; the
// pairwise-orthogonality constraints are invariant under it).
double test_function_g(const SuperMatrixSet& set, const PulseSequence& seq,
                       const Supervector& info_basis,
                       const std::vector<double>& timings);

struct ControlSolveParams {
  int delta_n = 2;          // extra pulses beyond the M*I^2 constraint count
  int n_pulses = 0;         // 0 = M*I^2 + delta_n
  double t_min = 2.0;
  double t_max = 8.0;
  std::vector<double> alpha_grid{1.0, 0.5, 0.25, 0.1, 0.05, 0.01};
  double target_g = 1e-8;
  int max_steps = 20000;
  std::uint64_t seed = 1;
};

// Linearized constraint system for one solver step, restricted to the free
// timing subset: rows are the real/imaginary parts of the error-constraint
// equations with trivial (0=0) and linearly dependent rows removed by
// rank-revealing QR.
struct ControlStepSystem {
  RealMatrix s;                // kept rows x free timings
  RealVector w;                // target change per kept row
  std::vector<int> kept_rows;  // indices into the stacked 2*K real rows
  bool rank_deficient = false;
};

ControlStepSystem control_step_system(const SuperMatrixSet& set,
                                      const PulseSequence& seq,
                                      const Supervector& info_basis,
                                      const std::vector<double>& timings,
                                      const std::vector<int>& free_timings,
                                      double step_fraction = 0.5);

struct ConvergenceRecord {
  int step = 0;
  double g = 0.0;
  double alpha = 0.0;      // 0 = no progress, permutation redrawn
  int permutation = 0;     // id of the free-subset draw in effect
};

struct TimingSolveResult {
  std::vector<double> timings;
  double g = 0.0;
  int steps = 0;
  bool converged = false;
  std::vector<ConvergenceRecord> log;
};

// Randomized descent on the pulse timings: seeded start within bounds, a
// square linearized solve over a randomly chosen free subset of M*I^2
// timings, a backtracking grid line search, and a fresh subset draw whenever
// the search stalls.
TimingSolveResult solve_timings(const SuperMatrixSet& set,
                                const ControlPair& pair,
                                const Supervector& info_basis,
                                const ControlSolveParams& params);

// Rank of the real Lie algebra generated by {iA, iB} under commutation,
// inside u(N) (dimension N^2).  `satisfied` means the pair can generate any
// unitary up to global phase: full u(N) or its traceless part su(N).
struct BracketGenerationReport {
  int rank = 0;
  int traceless_rank = 0;
  bool satisfied = false;
};

BracketGenerationReport bracket_generation_check(const Matrix& a,
                                                 const Matrix& b,
                                                 double tol = 1e-10);

}  // namespace qzeno
