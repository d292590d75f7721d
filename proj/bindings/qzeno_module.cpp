#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <vector>

#include "qzeno/angular.hpp"
#include "qzeno/code_search.hpp"
#include "qzeno/linalg.hpp"
#include "qzeno/nh_control.hpp"
#include "qzeno/rb78.hpp"
#include "qzeno/zeno_engine.hpp"

namespace py = pybind11;
using namespace qzeno;

namespace {

std::vector<Matrix> as_matrices(const std::vector<HermitianOperator>& ops) {
  std::vector<Matrix> mats;
  for (const auto& op : ops) mats.push_back(op.mat);
  return mats;
}

py::dict find_code_py(const std::vector<Matrix>& errors, int codewords,
                      std::uint64_t seed, int max_iterations,
                      double target_residual) {
  SearchParams params;
  params.seed = seed;
  params.max_iterations = max_iterations;
  params.target_residual = target_residual;
  const FindCodeResult result = find_code(errors, codewords, params);
  py::dict out;
  out["codewords"] = result.basis.codewords;
  out["converged"] = result.search.converged;
  out["iterations"] = result.search.iterations;
  out["restarts"] = result.search.restarts;
  out["residual"] = result.search.residual;
  out["orthonormality_residual"] = result.basis.orthonormality_residual;
  out["error_orthogonality_residual"] =
      result.basis.error_orthogonality_residual;
  return out;
}

py::dict check_code_py(const std::vector<Vector>& basis,
                       const std::vector<Matrix>& errors, double tol) {
  const auto report = check_generalized_condition(basis, errors, tol);
  py::dict out;
  out["common_scalars"] = report.xi;
  out["max_deviation"] = report.max_deviation;
  out["satisfied"] = report.satisfied;
  return out;
}

py::dict solve_timings_py(const std::vector<Matrix>& errors, const Matrix& a,
                          const Matrix& b, const std::vector<Vector>& basis,
                          std::uint64_t seed, int max_steps, double target,
                          int n_pulses) {
  const auto set =
      build_supermatrices(errors, static_cast<int>(basis.size()));
  Supervector info;
  info.dim = static_cast<int>(a.rows());
  info.comps = basis;
  ControlSolveParams params;
  params.seed = seed;
  params.max_steps = max_steps;
  params.target_g = target;
  params.n_pulses = n_pulses;
  const TimingSolveResult result =
      solve_timings(set, ControlPair(a, b), info, params);
  py::dict out;
  out["timings"] = result.timings;
  out["test_function"] = result.g;
  out["steps"] = result.steps;
  out["converged"] = result.converged;
  return out;
}

Matrix pulse_propagator_py(const Matrix& a, const Matrix& b,
                           const std::vector<double>& timings, bool decode) {
  const ControlPair pair(a, b);
  const auto schedule =
      decode ? decoding_sequence(timings) : coding_sequence(timings);
  return schedule_propagator(pair, schedule);
}

py::dict run_protection_py(const Vector& psi0, const Matrix& coder,
                           const std::vector<Matrix>& generators,
                           const std::vector<double>& amplitudes,
                           const std::vector<Vector>& protected_basis,
                           std::uint64_t seed, int cycles, double cycle_time,
                           int n_steps) {
  ErrorModel model;
  for (size_t m = 0; m < generators.size(); ++m)
    model.generators.emplace_back("E" + std::to_string(m), generators[m]);
  for (double a : amplitudes) {
    ErrorSignal s;
    s.kind = SignalKind::kConstant;
    s.amplitude = a;
    model.signals.push_back(s);
  }
  model.seed = seed;
  model.validate();

  ProtectionParams params;
  params.cycles = cycles;
  params.cycle_time = cycle_time;
  params.n_steps = n_steps;
  const ProtectionResult result =
      run_protection(psi0, coder, coder.adjoint(),
                     projector_onto(protected_basis), model, params);
  std::vector<double> fidelities;
  for (const auto& entry : result.trace) fidelities.push_back(entry.fidelity);
  py::dict out;
  out["final_fidelity"] = result.final_fidelity;
  out["cumulative_success"] = result.cumulative_success;
  out["fidelities"] = fidelities;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Coherence-protection core: code search, pulse synthesis, "
            "protection cycles and the 14-level worked example";
  m.attr("__version__") = "0.1.0";

  py::register_exception<ValidationError>(m, "ValidationError",
                                          PyExc_ValueError);
  py::register_exception<ConvergenceError>(m, "ConvergenceError",
                                           PyExc_RuntimeError);

  m.def("find_code", &find_code_py, py::arg("errors"),
        py::arg("codewords") = 2, py::arg("seed") = 1,
        py::arg("max_iterations") = 100000,
        py::arg("target_residual") = 1e-10,
        "Iterative search for a subspace with vanishing error sandwiches");
  m.def("check_code", &check_code_py, py::arg("basis"), py::arg("errors"),
        py::arg("tol") = 1e-8,
        "Common-scalar acceptance check of a codeword basis");
  m.def("solve_timings", &solve_timings_py, py::arg("errors"), py::arg("a"),
        py::arg("b"), py::arg("basis"), py::arg("seed") = 1,
        py::arg("max_steps") = 20000, py::arg("target") = 1e-8,
        py::arg("n_pulses") = 0,
        "Alternating-pulse timing solve for the coding unitary");
  m.def("pulse_propagator", &pulse_propagator_py, py::arg("a"), py::arg("b"),
        py::arg("timings"), py::arg("decode") = false,
        "Propagator of an alternating schedule (decode reverses and negates)");
  m.def("run_protection", &run_protection_py, py::arg("psi0"),
        py::arg("coder"), py::arg("generators"), py::arg("amplitudes"),
        py::arg("protected_basis"), py::arg("seed") = 0,
        py::arg("cycles") = 100, py::arg("cycle_time") = 0.01,
        py::arg("n_steps") = 64,
        "Repeated encode/error/decode/project cycles with constant signals");
  m.def("clebsch_gordan", &clebsch_gordan, py::arg("j1"), py::arg("m1"),
        py::arg("j2"), py::arg("m2"), py::arg("j"), py::arg("m"),
        "Exact Clebsch-Gordan coefficient (half-integer arguments allowed)");

  auto rb = m.def_submodule("rb78", "14-level worked example");
  rb.attr("DIM") = rb78::kDim;
  rb.def("error_set",
         [](bool code_shifted) {
           return as_matrices(rb78::error_set(
               code_shifted ? rb78::ElectricGauge::kCodeShifted
                            : rb78::ElectricGauge::kRaw));
         },
         py::arg("code_shifted") = false,
         "The six stray-field couplings (magnetic then quadratic electric)");
  rb.def("analytic_codewords", &rb78::analytic_codewords,
         "The two hand-derived codewords");
  rb.def("target_subspace", &rb78::target_subspace,
         "The two fine-structure information states");
  rb.def("coding_matrix", &rb78::coding_matrix,
         py::arg("seed") = 0x0c0de5eedull,
         "Unitary mapping the information states onto the codewords");
  rb.def("control_pair",
         [](double raman_scale) {
           const ControlPair pair = rb78::control_pair(raman_scale);
           return py::make_tuple(pair.a, pair.b);
         },
         py::arg("raman_scale") = 0.0,
         "The two alternating pulse generators (rad/ns)");
  rb.def("reference_timings",
         [] { return rb78::reference_timings(); },
         "The 34 published pulse durations (ns)");
  rb.def("gamma_ratio_from_cg", &rb78::gamma_ratio_from_cg,
         "Transfer-rate ratio of the two codewords");
  rb.def("projection_efficiency", &rb78::projection_efficiency,
         py::arg("gamma1"), py::arg("gamma2"),
         "Coherence transfer efficiency 2 sqrt(G1 G2)/(G1 + G2)");
}
