#include "qzeno/rb78.hpp"

#include <cmath>

#include "qzeno/angular.hpp"

namespace qzeno::rb78 {

namespace {

// mu_B / hbar in rad / (ns * tesla).
constexpr double kMuBOverHbar = 87.9410057;

const AngularMomentumOps& orbital() {
  static const AngularMomentumOps ops = angular_momentum_operators(3.0);
  return ops;
}

const AngularMomentumOps& spin() {
  static const AngularMomentumOps ops = angular_momentum_operators(0.5);
  return ops;
}

Matrix orbital_identity() { return Matrix::Identity(kOrbitalDim, kOrbitalDim); }
Matrix spin_identity() { return Matrix::Identity(kSpinDim, kSpinDim); }

}  // namespace

int basis_index(int m_l, bool spin_up) {
  if (m_l < -3 || m_l > 3) throw ValidationError("m_l out of range");
  return (3 - m_l) * kSpinDim + (spin_up ? 0 : 1);
}

std::vector<std::string> basis_labels() {
  std::vector<std::string> labels(kDim);
  for (int m_l = 3; m_l >= -3; --m_l)
    for (int up = 1; up >= 0; --up)
      labels[basis_index(m_l, up)] =
          "|3," + std::to_string(m_l) + ";1/2," + (up ? "+1/2>" : "-1/2>");
  return labels;
}

std::vector<HermitianOperator> magnetic_errors() {
  const auto& l = orbital();
  const auto& s = spin();
  const std::array<const Matrix*, 3> lk{&l.lx, &l.ly, &l.lz};
  const std::array<const Matrix*, 3> sk{&s.lx, &s.ly, &s.lz};
  const std::array<std::string, 3> names{"magnetic-x", "magnetic-y",
                                         "magnetic-z"};
  std::vector<HermitianOperator> out;
  for (int k = 0; k < 3; ++k) {
    Matrix g = tensor_product(*lk[k], spin_identity()) +
               2.0 * tensor_product(orbital_identity(), *sk[k]);
    out.emplace_back(names[k], g / spectral_norm(g));
  }
  return out;
}

std::vector<HermitianOperator> electric_errors() {
  const auto& l = orbital();
  const Matrix lx2 = l.lx * l.lx, ly2 = l.ly * l.ly, lz2 = l.lz * l.lz;
  const std::array<Matrix, 3> diffs{lx2 - ly2, lx2 - lz2, ly2 - lz2};
  const std::array<std::string, 3> names{"electric-xy", "electric-xz",
                                         "electric-yz"};
  std::vector<HermitianOperator> out;
  for (int k = 0; k < 3; ++k) {
    const Matrix g = tensor_product(diffs[k], spin_identity());
    out.emplace_back(names[k], g / spectral_norm(g));
  }
  return out;
}

std::vector<HermitianOperator> electric_errors_code_shifted() {
  const std::vector<Vector> code = analytic_codewords();
  std::vector<HermitianOperator> out;
  for (const HermitianOperator& e : electric_errors()) {
    // The coupling acts as this common scalar on the code subspace; removing
    // it (a global-phase gauge) makes the codewords an exact zero.
    const double xi = std::real(code[0].dot(e.mat * code[0]));
    Matrix shifted = e.mat - xi * Matrix::Identity(kDim, kDim);
    shifted /= spectral_norm(shifted);
    out.emplace_back(e.label + "-shifted", shifted);
  }
  return out;
}

std::vector<HermitianOperator> error_set(ElectricGauge gauge) {
  std::vector<HermitianOperator> out = magnetic_errors();
  std::vector<HermitianOperator> electric =
      gauge == ElectricGauge::kRaw ? electric_errors()
                                   : electric_errors_code_shifted();
  out.insert(out.end(), electric.begin(), electric.end());
  return out;
}

std::vector<Vector> analytic_codewords() {
  Vector c1 = Vector::Zero(kDim), c2 = Vector::Zero(kDim);
  c1(basis_index(-1, true)) = 1.0;
  c2(basis_index(+1, false)) = 1.0;
  return {c1, c2};
}

std::vector<Vector> target_subspace() {
  std::vector<Vector> out;
  for (const double m_j : {-1.5, -0.5}) {
    Vector v = Vector::Zero(kDim);
    for (int m_l = -3; m_l <= 3; ++m_l)
      for (int up = 0; up <= 1; ++up) {
        const double m_s = up ? 0.5 : -0.5;
        const double c = clebsch_gordan(3.0, m_l, 0.5, m_s, 2.5, m_j);
        if (c != 0.0) v(basis_index(m_l, up)) = c;
      }
    out.push_back(v);
  }
  return out;
}

Matrix coding_matrix(std::uint64_t seed) {
  const Matrix from = gram_schmidt_complete(target_subspace(), kDim, seed);
  const Matrix to = gram_schmidt_complete(analytic_codewords(), kDim, seed + 1);
  return to * from.adjoint();
}

Matrix zeeman_hamiltonian(const std::array<double, 3>& b_tesla) {
  const auto& l = orbital();
  const auto& s = spin();
  const std::array<const Matrix*, 3> lk{&l.lx, &l.ly, &l.lz};
  const std::array<const Matrix*, 3> sk{&s.lx, &s.ly, &s.lz};
  Matrix h = Matrix::Zero(kDim, kDim);
  for (int k = 0; k < 3; ++k)
    h += kMuBOverHbar * b_tesla[k] *
         (tensor_product(*lk[k], spin_identity()) +
          2.0 * tensor_product(orbital_identity(), *sk[k]));
  return h;
}

FieldSpec field_spec_a() {
  FieldSpec f;
  f.ex = 8.5e5;
  f.ey = 5.2e6;
  f.ex2 = 8.5e5;
  f.ey2 = 5.2e6;
  f.phase_y = 2.3;
  f.detuning = -1.0e-5;
  f.detuning2 = +1.0e-5;
  return f;
}

FieldSpec field_spec_b() {
  FieldSpec f;
  f.ex = -5.2e6;
  f.ey = 8.5e5;
  f.ex2 = -5.2e6;
  f.ey2 = 8.5e5;
  f.phase_y = 2.3;
  f.detuning = -1.0e-5;
  f.detuning2 = +1.0e-5;
  return f;
}

Matrix raman_hamiltonian(const FieldSpec& fields, double scale) {
  if (fields.detuning == 0.0 || fields.detuning2 == 0.0)
    throw ValidationError("raman detunings must be non-zero");
  const auto& l = orbital();
  const std::array<const Matrix*, 2> lk{&l.lx, &l.ly};

  const Complex phase = std::exp(Complex(0.0, fields.phase_y));
  const std::array<Complex, 2> f1{Complex(fields.ex, 0.0), fields.ey * phase};
  const std::array<Complex, 2> f2{Complex(fields.ex2, 0.0),
                                  fields.ey2 * phase};

  Matrix h7 = Matrix::Zero(kOrbitalDim, kOrbitalDim);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const Complex form =
          fields.path_weight * std::conj(f1[i]) * f1[j] / fields.detuning +
          fields.path_weight2 * std::conj(f2[i]) * f2[j] / fields.detuning2;
      h7 += form * 0.5 * ((*lk[i]) * (*lk[j]) + (*lk[j]) * (*lk[i]));
    }
  Matrix h = scale * tensor_product(h7, spin_identity());
  return (h + h.adjoint()) / 2.0;
}

double calibrated_raman_scale() {
  static const double scale = [] {
    const double zeeman = spectral_norm(zeeman_hamiltonian(kBiasFieldTesla));
    const double raman = spectral_norm(raman_hamiltonian(field_spec_a(), 1.0));
    return zeeman / raman;
  }();
  return scale;
}

ControlPair control_pair(double raman_scale) {
  const double scale =
      raman_scale > 0.0 ? raman_scale : calibrated_raman_scale();
  const Matrix zeeman = zeeman_hamiltonian(kBiasFieldTesla);
  return ControlPair(zeeman + raman_hamiltonian(field_spec_a(), scale),
                     zeeman + raman_hamiltonian(field_spec_b(), scale));
}

const std::vector<double>& reference_timings() {
  static const std::vector<double> timings{
      3.9763, 6.4748, 4.2274, 3.6259, 2.8717, 3.6281, 7.2263, 6.4260, 4.8070,
      5.0394, 6.5242, 4.8890, 4.2400, 7.3834, 4.8653, 5.4799, 4.5341, 4.3099,
      6.2959, 3.7346, 6.5293, 6.8586, 6.0749, 5.1213, 4.6806, 3.4985, 3.9909,
      4.6701, 4.5168, 6.4702, 4.7787, 5.3476, 3.4567, 3.8009};
  return timings;
}

Matrix fine_structure_projection(const Matrix& op) {
  if (op.rows() != kDim || op.cols() != kDim)
    throw ValidationError("fine-structure projection expects the full space");
  // Unitary from coupled coordinates to the uncoupled basis; j=7/2 block
  // (8 states, m_j descending) then j=5/2 (6 states, m_j descending).
  static const Matrix transform = [] {
    Matrix t = Matrix::Zero(kDim, kDim);
    int col = 0;
    for (const double j : {3.5, 2.5}) {
      for (double m_j = j; m_j >= -j; m_j -= 1.0) {
        for (int m_l = -3; m_l <= 3; ++m_l)
          for (int up = 0; up <= 1; ++up) {
            const double m_s = up ? 0.5 : -0.5;
            const double c = clebsch_gordan(3.0, m_l, 0.5, m_s, j, m_j);
            if (c != 0.0) t(basis_index(m_l, up), col) = c;
          }
        ++col;
      }
    }
    return t;
  }();
  Matrix coupled = transform.adjoint() * op * transform;
  coupled.block(0, 8, 8, 6).setZero();
  coupled.block(8, 0, 6, 8).setZero();
  return transform * coupled * transform.adjoint();
}

double gamma_ratio_from_cg() {
  const double num = clebsch_gordan(1.5, -0.5, 1.0, -1.0, 2.5, -1.5) *
                     clebsch_gordan(1.5, 0.5, 1.0, -1.0, 1.5, -0.5) *
                     clebsch_gordan(0.5, -0.5, 1.0, 1.0, 1.5, 0.5);
  const double den = clebsch_gordan(1.5, 0.5, 1.0, -1.0, 2.5, -0.5) *
                     clebsch_gordan(1.5, 1.5, 1.0, -1.0, 1.5, 0.5) *
                     clebsch_gordan(0.5, 0.5, 1.0, 1.0, 1.5, 1.5);
  return (num * num) / (den * den);
}

double projection_efficiency(double gamma1, double gamma2) {
  if (gamma1 <= 0.0 || gamma2 <= 0.0)
    throw ValidationError("transfer rates must be positive");
  return 2.0 * std::sqrt(gamma1 * gamma2) / (gamma1 + gamma2);
}

RateState projection_rate_evolution(const RateState& initial, double gamma1,
                                    double gamma2, double t) {
  if (gamma1 <= 0.0 || gamma2 <= 0.0)
    throw ValidationError("transfer rates must be positive");
  const double half = (gamma1 + gamma2) / 2.0;
  const double eta = projection_efficiency(gamma1, gamma2);
  RateState s;
  s.pop_src1 = initial.pop_src1 * std::exp(-gamma1 * t);
  s.pop_src2 = initial.pop_src2 * std::exp(-gamma2 * t);
  s.coh_src = initial.coh_src * std::exp(-half * t);
  s.pop_dst1 = initial.pop_dst1 + initial.pop_src1 * (1.0 - std::exp(-gamma1 * t));
  s.pop_dst2 = initial.pop_dst2 + initial.pop_src2 * (1.0 - std::exp(-gamma2 * t));
  s.coh_dst = initial.coh_dst +
              eta * initial.coh_src * (1.0 - std::exp(-half * t));
  return s;
}

RateState projection_rate_evolution_numeric(const RateState& initial,
                                            double gamma1, double gamma2,
                                            double t, int steps) {
  if (steps < 1) throw ValidationError("integrator needs at least one step");
  // State layout: (p1, p2, c_src, P1, P2, c_dst); linear autonomous system.
  using State = std::array<Complex, 6>;
  const auto deriv = [&](const State& s) {
    State d;
    d[0] = -gamma1 * s[0];
    d[1] = -gamma2 * s[1];
    d[2] = -(gamma1 + gamma2) / 2.0 * s[2];
    d[3] = gamma1 * s[0];
    d[4] = gamma2 * s[1];
    d[5] = std::sqrt(gamma1 * gamma2) * s[2];
    return d;
  };
  State y{Complex(initial.pop_src1), Complex(initial.pop_src2),
          initial.coh_src, Complex(initial.pop_dst1), Complex(initial.pop_dst2),
          initial.coh_dst};
  const double h = t / steps;
  for (int n = 0; n < steps; ++n) {
    const State k1 = deriv(y);
    State y2, y3, y4;
    for (int i = 0; i < 6; ++i) y2[i] = y[i] + 0.5 * h * k1[i];
    const State k2 = deriv(y2);
    for (int i = 0; i < 6; ++i) y3[i] = y[i] + 0.5 * h * k2[i];
    const State k3 = deriv(y3);
    for (int i = 0; i < 6; ++i) y4[i] = y[i] + h * k3[i];
    const State k4 = deriv(y4);
    for (int i = 0; i < 6; ++i)
      y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  RateState s;
  s.pop_src1 = y[0].real();
  s.pop_src2 = y[1].real();
  s.coh_src = y[2];
  s.pop_dst1 = y[3].real();
  s.pop_dst2 = y[4].real();
  s.coh_dst = y[5];
  return s;
}

}  // namespace qzeno::rb78
