#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "qzeno/linalg.hpp"
#include "qzeno/types.hpp"

namespace qzeno {

// Time dependence of one error amplitude f_m(tau) over a protection interval.
enum class SignalKind { kConstant, kSinusoid, kFilteredNoise };

struct ErrorSignal {
  SignalKind kind = SignalKind::kConstant;
  double amplitude = 0.0;
  double frequency = 0.0;         // cycles per time unit (sinusoid)
  double phase = 0.0;             // radians (sinusoid)
  double correlation_time = 1.0;  // exponential memory (filtered noise)
};

// Perturbation sum_m f_m(tau) E_m with one signal per Hermitian generator.
struct ErrorModel {
  std::vector<HermitianOperator> generators;
  std::vector<ErrorSignal> signals;
  std::uint64_t seed = 0;

  int dim() const;
  void validate() const;
};

// Piecewise-constant realization of all signals on n_steps midpoints, plus
// the integrated amplitudes epsilon_m = integral of f_m over [0, T].
struct SignalTrajectory {
  double dt = 0.0;
  std::vector<RealVector> values;  // per step, one amplitude per generator
  std::vector<double> epsilon;
};

SignalTrajectory sample_epsilon(const ErrorModel& model, double total_time,
                                int n_steps, std::uint64_t realization = 0);

enum class PropagationMode { kFirstOrder, kExactPiecewise };

// kFirstOrder: 1 - i sum_m epsilon_m E_m (truncated expansion, not unitary).
// kExactPiecewise: time-ordered product of exact step propagators.
Matrix error_propagator(const ErrorModel& model, double total_time,
                        PropagationMode mode, int n_steps = 64,
                        std::uint64_t realization = 0);
Matrix error_propagator(const ErrorModel& model,
                        const SignalTrajectory& trajectory,
                        PropagationMode mode);

// Projector sum_i |v_i><v_i| onto the span of an orthonormal family.
Matrix projector_onto(const std::vector<Vector>& vectors);

double overlap_fidelity(const Vector& a, const Vector& b);

// One protection cycle: encode, suffer the error propagator, decode, measure
// the code-subspace projector.  `post` is the normalized projected state;
// success_probability is <psi'|P|psi'>/<psi'|psi'>.
struct ZenoCycleResult {
  Vector post;
  double success_probability = 0.0;
};

ZenoCycleResult zeno_cycle(const Vector& psi, const Matrix& coder,
                           const Matrix& decoder, const Matrix& projector,
                           const Matrix& error_prop);

struct DensityCycleResult {
  Matrix post;
  double success_probability = 0.0;
};
DensityCycleResult zeno_cycle_density(const Matrix& rho, const Matrix& coder,
                                      const Matrix& decoder,
                                      const Matrix& projector,
                                      const Matrix& error_prop);

// For a factorized code (information space tensor a fixed ancilla state, with
// the ancilla as the slow index): the effective error generators seen inside
// the information space, <alpha| C^dag E_m C |alpha>.  All of them vanish for
// a valid coding matrix.
std::vector<Matrix> effective_hamiltonian(const Matrix& coder,
                                          const std::vector<Matrix>& errors,
                                          const Vector& alpha, int dim_info);

struct ProtectionParams {
  int cycles = 100;
  double cycle_time = 0.01;
  PropagationMode mode = PropagationMode::kExactPiecewise;
  int n_steps = 64;
  bool project = true;
};

struct TraceEntry {
  int cycle = 0;
  double fidelity = 0.0;            // vs the initial state
  double cumulative_success = 1.0;  // product of cycle probabilities
};

struct ProtectionResult {
  std::vector<TraceEntry> trace;
  Vector final_state;
  double final_fidelity = 0.0;
  double cumulative_success = 1.0;
};

// Repeated cycles with a fresh signal realization per cycle (realization
// index = cycle number, so runs are reproducible from the model seed).
ProtectionResult run_protection(const Vector& psi0, const Matrix& coder,
                                const Matrix& decoder, const Matrix& projector,
                                const ErrorModel& model,
                                const ProtectionParams& params);

// Log-log slope fit of a per-interval infidelity measure against the interval
// length.  Values at or below the noise floor are excluded from the fit.
struct ScalingFit {
  double slope = 0.0;
  double intercept = 0.0;
  std::vector<double> times;
  std::vector<double> infidelities;  // only the fitted points
  int excluded = 0;
};

ScalingFit infidelity_scaling(const std::vector<double>& times,
                              const std::function<double(double)>& infidelity,
                              double noise_floor = 1e-14);

}  // namespace qzeno
