#include "qzeno/zeno_engine.hpp"

#include <cmath>
#include <numbers>

namespace qzeno {

namespace {

std::uint64_t mix64(std::uint64_t x) {
  // splitmix64 finalizer; used to derive independent per-signal streams.
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

}  // namespace

int ErrorModel::dim() const {
  return generators.empty() ? 0 : static_cast<int>(generators[0].mat.rows());
}

void ErrorModel::validate() const {
  if (generators.empty())
    throw ValidationError("error model needs at least one generator");
  if (signals.size() != generators.size())
    throw ValidationError("error model needs one signal per generator");
  for (const HermitianOperator& g : generators)
    if (g.mat.rows() != dim())
      throw ValidationError("error generators must share one dimension");
  for (const ErrorSignal& s : signals)
    if (s.kind == SignalKind::kFilteredNoise && s.correlation_time <= 0.0)
      throw ValidationError("filtered noise needs a positive correlation time");
}

SignalTrajectory sample_epsilon(const ErrorModel& model, double total_time,
                                int n_steps, std::uint64_t realization) {
  model.validate();
  if (total_time <= 0.0) throw ValidationError("total_time must be positive");
  if (n_steps < 1) throw ValidationError("n_steps must be positive");

  const int m = static_cast<int>(model.signals.size());
  SignalTrajectory traj;
  traj.dt = total_time / n_steps;
  traj.values.assign(n_steps, RealVector::Zero(m));
  traj.epsilon.assign(m, 0.0);

  for (int s = 0; s < m; ++s) {
    const ErrorSignal& sig = model.signals[s];
    std::mt19937_64 rng(mix64(model.seed + mix64(realization + mix64(s))));
    double noise = sig.amplitude * gaussian(rng);  // stationary start
    for (int j = 0; j < n_steps; ++j) {
      const double tau = (j + 0.5) * traj.dt;
      double f = 0.0;
      switch (sig.kind) {
        case SignalKind::kConstant:
          f = sig.amplitude;
          break;
        case SignalKind::kSinusoid:
          f = sig.amplitude *
              std::sin(2.0 * std::numbers::pi * sig.frequency * tau +
                       sig.phase);
          break;
        case SignalKind::kFilteredNoise: {
          f = noise;
          const double decay = std::exp(-traj.dt / sig.correlation_time);
          noise = noise * decay +
                  sig.amplitude * std::sqrt(1.0 - decay * decay) *
                      gaussian(rng);
          break;
        }
      }
      traj.values[j](s) = f;
      traj.epsilon[s] += f * traj.dt;
    }
  }
  return traj;
}

Matrix error_propagator(const ErrorModel& model,
                        const SignalTrajectory& trajectory,
                        PropagationMode mode) {
  model.validate();
  const int n = model.dim();
  if (mode == PropagationMode::kFirstOrder) {
    Matrix u = Matrix::Identity(n, n);
    for (size_t m = 0; m < model.generators.size(); ++m)
      u -= Complex(0.0, trajectory.epsilon[m]) * model.generators[m].mat;
    return u;
  }
  Matrix u = Matrix::Identity(n, n);
  for (const RealVector& amps : trajectory.values) {
    Matrix h = Matrix::Zero(n, n);
    for (size_t m = 0; m < model.generators.size(); ++m)
      h += amps(m) * model.generators[m].mat;
    u = matrix_exponential_hermitian(h, trajectory.dt) * u;
  }
  return u;
}

Matrix error_propagator(const ErrorModel& model, double total_time,
                        PropagationMode mode, int n_steps,
                        std::uint64_t realization) {
  return error_propagator(
      model, sample_epsilon(model, total_time, n_steps, realization), mode);
}

Matrix projector_onto(const std::vector<Vector>& vectors) {
  if (vectors.empty()) throw ValidationError("projector needs vectors");
  const int n = static_cast<int>(vectors[0].size());
  Matrix p = Matrix::Zero(n, n);
  for (size_t i = 0; i < vectors.size(); ++i) {
    for (size_t j = 0; j < i; ++j)
      if (std::abs(vectors[j].dot(vectors[i])) > 1e-8)
        throw ValidationError("projector family must be orthonormal");
    if (std::abs(vectors[i].norm() - 1.0) > 1e-8)
      throw ValidationError("projector family must be normalized");
    p += vectors[i] * vectors[i].adjoint();
  }
  return p;
}

double overlap_fidelity(const Vector& a, const Vector& b) {
  const double na = a.squaredNorm(), nb = b.squaredNorm();
  if (na == 0.0 || nb == 0.0) return 0.0;
  return std::norm(a.dot(b)) / (na * nb);
}

namespace {

void validate_cycle_inputs(const Matrix& coder, const Matrix& decoder,
                           const Matrix& projector) {
  const int n = static_cast<int>(coder.rows());
  if ((decoder * coder - Matrix::Identity(n, n)).cwiseAbs().maxCoeff() > 1e-8)
    throw ValidationError("decoder does not invert coder");
  if (!is_hermitian(projector, 1e-8) ||
      (projector * projector - projector).cwiseAbs().maxCoeff() > 1e-8)
    throw ValidationError("projector must be a Hermitian idempotent");
}

}  // namespace

ZenoCycleResult zeno_cycle(const Vector& psi, const Matrix& coder,
                           const Matrix& decoder, const Matrix& projector,
                           const Matrix& error_prop) {
  validate_cycle_inputs(coder, decoder, projector);
  const Vector decoded = decoder * (error_prop * (coder * psi));
  const double total = decoded.squaredNorm();
  if (total == 0.0)
    throw ValidationError("state annihilated during protection cycle");
  const Vector projected = projector * decoded;
  ZenoCycleResult result;
  result.success_probability = projected.squaredNorm() / total;
  result.post = result.success_probability > 0.0
                    ? Vector(projected / projected.norm())
                    : Vector::Zero(psi.size());
  return result;
}

DensityCycleResult zeno_cycle_density(const Matrix& rho, const Matrix& coder,
                                      const Matrix& decoder,
                                      const Matrix& projector,
                                      const Matrix& error_prop) {
  validate_cycle_inputs(coder, decoder, projector);
  const Matrix chain = decoder * error_prop * coder;
  const Matrix evolved = chain * rho * chain.adjoint();
  const double total = evolved.trace().real();
  if (total <= 0.0)
    throw ValidationError("state annihilated during protection cycle");
  const Matrix projected = projector * evolved * projector;
  DensityCycleResult result;
  result.success_probability = projected.trace().real() / total;
  result.post = result.success_probability > 0.0
                    ? Matrix(projected / projected.trace().real())
                    : Matrix::Zero(rho.rows(), rho.cols());
  return result;
}

std::vector<Matrix> effective_hamiltonian(const Matrix& coder,
                                          const std::vector<Matrix>& errors,
                                          const Vector& alpha, int dim_info) {
  const int n = static_cast<int>(coder.rows());
  if (dim_info <= 0 || n % dim_info != 0)
    throw ValidationError("information dimension must divide the full space");
  const int dim_anc = n / dim_info;
  if (alpha.size() != dim_anc)
    throw ValidationError("ancilla state dimension mismatch");
  if (std::abs(alpha.norm() - 1.0) > 1e-8)
    throw ValidationError("ancilla state must be normalized");

  std::vector<Matrix> out;
  out.reserve(errors.size());
  for (const Matrix& e : errors) {
    const Matrix w = coder.adjoint() * e * coder;
    Matrix h = Matrix::Zero(dim_info, dim_info);
    // Composite index = ancilla * dim_info + info (ancilla is slow).
    for (int a = 0; a < dim_anc; ++a)
      for (int ap = 0; ap < dim_anc; ++ap)
        h += std::conj(alpha(a)) * alpha(ap) *
             w.block(a * dim_info, ap * dim_info, dim_info, dim_info);
    out.push_back((h + h.adjoint()) / 2.0);
  }
  return out;
}

ProtectionResult run_protection(const Vector& psi0, const Matrix& coder,
                                const Matrix& decoder, const Matrix& projector,
                                const ErrorModel& model,
                                const ProtectionParams& params) {
  if (params.cycles < 1) throw ValidationError("cycle count must be positive");
  if (std::abs(psi0.norm() - 1.0) > 1e-8)
    throw ValidationError("initial state must be normalized");

  ProtectionResult result;
  result.trace.reserve(params.cycles);
  Vector state = psi0;
  for (int cycle = 1; cycle <= params.cycles; ++cycle) {
    const Matrix u = error_propagator(model, params.cycle_time, params.mode,
                                      params.n_steps, cycle);
    if (params.project) {
      const ZenoCycleResult r =
          zeno_cycle(state, coder, decoder, projector, u);
      result.cumulative_success *= r.success_probability;
      state = r.post;
    } else {
      const Vector decoded = decoder * (u * (coder * state));
      state = decoded / decoded.norm();
    }
    result.trace.push_back(
        {cycle, overlap_fidelity(psi0, state), result.cumulative_success});
  }
  result.final_state = state;
  result.final_fidelity = result.trace.back().fidelity;
  return result;
}

ScalingFit infidelity_scaling(const std::vector<double>& times,
                              const std::function<double(double)>& infidelity,
                              double noise_floor) {
  if (times.size() < 2)
    throw ValidationError("scaling fit needs at least two interval lengths");
  ScalingFit fit;
  for (double t : times) {
    if (t <= 0.0) throw ValidationError("interval lengths must be positive");
    const double v = infidelity(t);
    if (v <= noise_floor) {
      ++fit.excluded;
      continue;
    }
    fit.times.push_back(t);
    fit.infidelities.push_back(v);
  }
  if (fit.times.size() < 2)
    throw ConvergenceError(
        "scaling fit: too few points above the noise floor");

  // Least-squares line through (log t, log infidelity).
  const int n = static_cast<int>(fit.times.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    const double x = std::log(fit.times[i]);
    const double y = std::log(fit.infidelities[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = n * sxx - sx * sx;
  if (std::abs(denom) < 1e-30)
    throw ValidationError("scaling fit: degenerate abscissae");
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  return fit;
}

}  // namespace qzeno
