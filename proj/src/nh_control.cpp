#include "qzeno/nh_control.hpp"

#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <limits>

namespace qzeno {

ControlPair::ControlPair(Matrix a_, Matrix b_)
    : a(std::move(a_)), b(std::move(b_)) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows())
    throw ValidationError("control pair must be square and share a dimension");
  const double tol = tolerances().validation;
  if (!is_hermitian(a, tol) || !is_hermitian(b, tol))
    throw ValidationError("control generators must be Hermitian");
}

std::vector<PulseStep> coding_sequence(const std::vector<double>& timings) {
  std::vector<PulseStep> seq;
  seq.reserve(timings.size());
  for (int j = 1; j <= static_cast<int>(timings.size()); ++j)
    seq.push_back({j, j % 2 == 0, false, timings[j - 1]});
  return seq;
}

std::vector<PulseStep> decoding_sequence(const std::vector<double>& timings) {
  // Undo the coding walk: last pulse first, generators negated.  The leading
  // pulse uses the generator of the final coding pulse (b for an even count,
  // a for an odd count); each pulse then cancels its coding partner exactly.
  std::vector<PulseStep> seq;
  seq.reserve(timings.size());
  for (int j = static_cast<int>(timings.size()); j >= 1; --j)
    seq.push_back({j, j % 2 == 0, true, timings[j - 1]});
  return seq;
}

Matrix schedule_propagator(const ControlPair& pair,
                           const std::vector<PulseStep>& schedule) {
  const HermitianExp exp_a(pair.a), exp_b(pair.b);
  Matrix u = Matrix::Identity(pair.dim(), pair.dim());
  for (const PulseStep& step : schedule) {
    const HermitianExp& e = step.use_b ? exp_b : exp_a;
    const double t = step.negated ? -step.duration : step.duration;
    u = e.at(t) * u;  // later steps act on the left
  }
  return u;
}

PulseSequence::PulseSequence(const ControlPair& pair)
    : pair_(pair), exp_a_(pair.a), exp_b_(pair.b) {}

Matrix PulseSequence::propagator(const std::vector<double>& timings) const {
  Matrix u = Matrix::Identity(pair_.dim(), pair_.dim());
  for (size_t j = 0; j < timings.size(); ++j) {
    const HermitianExp& e = (j % 2 == 0) ? exp_a_ : exp_b_;  // pulse j+1
    u = e.at(timings[j]) * u;
  }
  return u;
}

Matrix PulseSequence::propagator_and_derivatives(
    const std::vector<double>& timings, std::vector<Matrix>& du) const {
  const int n = static_cast<int>(timings.size());
  const int dim = pair_.dim();
  // prefix[j] = F_j ... F_1, suffix[j] = F_n ... F_{j+1}.
  std::vector<Matrix> prefix(n + 1), suffix(n + 1);
  prefix[0] = Matrix::Identity(dim, dim);
  for (int j = 1; j <= n; ++j) {
    const HermitianExp& e = (j % 2 == 1) ? exp_a_ : exp_b_;
    prefix[j] = e.at(timings[j - 1]) * prefix[j - 1];
  }
  suffix[n] = Matrix::Identity(dim, dim);
  for (int j = n - 1; j >= 0; --j) {
    const HermitianExp& e = ((j + 1) % 2 == 1) ? exp_a_ : exp_b_;
    suffix[j] = suffix[j + 1] * e.at(timings[j]);
  }
  du.resize(n);
  const Complex mi(0.0, -1.0);
  for (int j = 1; j <= n; ++j) {
    const Matrix& h = (j % 2 == 1) ? pair_.a : pair_.b;
    du[j - 1] = suffix[j] * (mi * h) * prefix[j];
  }
  return prefix[n];
}

namespace {

Supervector transformed(const Supervector& c, const Matrix& u) {
  Supervector out;
  out.dim = c.dim;
  out.comps.reserve(c.comps.size());
  for (const Vector& v : c.comps) out.comps.push_back(u * v);
  return out;
}

void require_orthonormal(const Supervector& c) {
  for (int i = 0; i < c.blocks(); ++i)
    for (int j = 0; j <= i; ++j) {
      const Complex g = c.comps[j].dot(c.comps[i]);
      const double want = (i == j) ? 1.0 : 0.0;
      if (std::abs(g - want) > 1e-8)
        throw ValidationError("information basis is not orthonormal");
    }
}

}  // namespace

double test_function_g(const SuperMatrixSet& set, const PulseSequence& seq,
                       const Supervector& info_basis,
                       const std::vector<double>& timings) {
  const Supervector c0 = transformed(info_basis, seq.propagator(timings));
  double g = 0.0;
  for (int k = set.first_error_op(); k < set.size(); ++k)
    g += std::norm(supermatrix_element(set, k, c0, c0));
  return g;
}

ControlStepSystem control_step_system(const SuperMatrixSet& set,
                                      const PulseSequence& seq,
                                      const Supervector& info_basis,
                                      const std::vector<double>& timings,
                                      const std::vector<int>& free_timings,
                                      double step_fraction) {
  const int n_free = static_cast<int>(free_timings.size());
  const int k_err = set.error_count();

  std::vector<Matrix> du;
  const Matrix u = seq.propagator_and_derivatives(timings, du);
  const Supervector c0 = transformed(info_basis, u);

  // Per free timing, the derivative of every transformed component.
  std::vector<std::vector<Vector>> dc(n_free);
  for (int f = 0; f < n_free; ++f) {
    dc[f].reserve(info_basis.comps.size());
    for (const Vector& v : info_basis.comps)
      dc[f].push_back(du[free_timings[f]] * v);
  }

  // Right side: the constraint change one elementary code-search step at C0
  // would produce, normalized by the stepped supervector's squared norm.
  const CodeSearchStep step = code_search_step(set, c0);
  Supervector cp = c0;
  for (int i = 0; i < cp.blocks(); ++i)
    cp.comps[i] += step_fraction * step.delta.comps[i];
  double cp_norm2 = 0.0;
  for (const Vector& v : cp.comps) cp_norm2 += v.squaredNorm();

  Eigen::MatrixXcd jac(k_err, n_free);
  Vector target(k_err);
  for (int k = 0; k < k_err; ++k) {
    const int op = set.first_error_op() + k;
    const SuperBlock& blk = set.ops[op];
    const Matrix& content = set.errors[blk.error_index];
    const Vector applied = content * c0.comps[blk.col];
    for (int f = 0; f < n_free; ++f)
      jac(k, f) = dc[f][blk.row].dot(applied) +
                  c0.comps[blk.row].dot(content * dc[f][blk.col]);
    target(k) = (supermatrix_element(set, op, cp, cp) -
                 supermatrix_element(set, op, c0, c0)) /
                cp_norm2;
  }

  // Stack real and imaginary rows, drop identically-trivial ones (diagonal
  // blocks of Hermitian contents have real constraints, so their imaginary
  // rows are 0 = 0), then keep a maximal independent subset by pivoted QR.
  RealMatrix rows(2 * k_err, n_free);
  RealVector rhs(2 * k_err);
  rows.topRows(k_err) = jac.real();
  rows.bottomRows(k_err) = jac.imag();
  rhs.head(k_err) = target.real();
  rhs.tail(k_err) = target.imag();

  const double scale = std::max(rows.cwiseAbs().maxCoeff(), 1e-30);
  std::vector<int> nontrivial;
  for (int r = 0; r < 2 * k_err; ++r)
    if (rows.row(r).cwiseAbs().maxCoeff() > 1e-12 * scale ||
        std::abs(rhs(r)) > 1e-12 * scale)
      nontrivial.push_back(r);

  RealMatrix live(nontrivial.size(), n_free);
  for (size_t i = 0; i < nontrivial.size(); ++i)
    live.row(i) = rows.row(nontrivial[i]);

  Eigen::ColPivHouseholderQR<RealMatrix> qr(live.transpose());
  qr.setThreshold(1e-10);
  const int rank = static_cast<int>(qr.rank());
  std::vector<int> keep(qr.colsPermutation().indices().data(),
                        qr.colsPermutation().indices().data() + rank);
  std::sort(keep.begin(), keep.end());

  ControlStepSystem sys;
  sys.s.resize(rank, n_free);
  sys.w.resize(rank);
  sys.kept_rows.reserve(rank);
  for (int i = 0; i < rank; ++i) {
    sys.s.row(i) = live.row(keep[i]);
    sys.w(i) = rhs(nontrivial[keep[i]]);
    sys.kept_rows.push_back(nontrivial[keep[i]]);
  }
  sys.rank_deficient = rank < n_free;
  return sys;
}

TimingSolveResult solve_timings(const SuperMatrixSet& set,
                                const ControlPair& pair,
                                const Supervector& info_basis,
                                const ControlSolveParams& params) {
  if (set.dim != pair.dim())
    throw ValidationError("control pair dimension does not match constraints");
  if (info_basis.dim != set.dim || info_basis.blocks() != set.blocks)
    throw ValidationError("information basis shape mismatch");
  require_orthonormal(info_basis);
  if (params.t_min <= 0.0 || params.t_max <= params.t_min)
    throw ValidationError("timing bounds must satisfy 0 < t_min < t_max");
  if (params.alpha_grid.empty())
    throw ValidationError("empty line-search grid");

  const int m = static_cast<int>(set.errors.size());
  const int i_blocks = set.blocks;
  const int determined = m * i_blocks * i_blocks;
  const int n = params.n_pulses > 0 ? params.n_pulses
                                    : determined + params.delta_n;
  if (n < 1) throw ValidationError("pulse count must be positive");
  const int n_free = std::min(determined, n);

  const PulseSequence seq(pair);
  std::mt19937_64 rng(params.seed);

  std::vector<double> t(n);
  for (double& x : t)
    x = params.t_min + (params.t_max - params.t_min) * uniform_real(rng);

  std::vector<int> perm = random_permutation(n, rng);
  std::vector<int> free_set(perm.begin(), perm.begin() + n_free);
  int permutation_id = 0;

  TimingSolveResult result;
  result.timings = t;
  result.g = std::numeric_limits<double>::infinity();

  for (int step = 0; step < params.max_steps; ++step) {
    const double g = test_function_g(set, seq, info_basis, t);
    if (g < result.g) {
      result.g = g;
      result.timings = t;
    }
    if (g < params.target_g) {
      result.steps = step;
      result.converged = true;
      result.log.push_back({step, g, 0.0, permutation_id});
      return result;
    }

    const ControlStepSystem sys =
        control_step_system(set, seq, info_basis, t, free_set);
    Eigen::CompleteOrthogonalDecomposition<RealMatrix> cod(sys.s);
    cod.setThreshold(1e-10);
    const RealVector dt_free = cod.solve(sys.w);

    std::vector<double> dt(n, 0.0);
    for (int f = 0; f < n_free; ++f) dt[free_set[f]] = dt_free(f);

    double accepted_alpha = 0.0;
    for (double alpha : params.alpha_grid) {
      std::vector<double> trial = t;
      for (int j = 0; j < n; ++j)
        trial[j] = std::clamp(t[j] + alpha * dt[j], params.t_min,
                              params.t_max);
      if (test_function_g(set, seq, info_basis, trial) < g) {
        t = trial;
        accepted_alpha = alpha;
        break;
      }
    }
    result.log.push_back({step, g, accepted_alpha, permutation_id});

    if (accepted_alpha == 0.0) {
      // Stalled on this free subset; draw a different one and keep going.
      std::vector<int> fresh = free_set;
      for (int tries = 0; tries < 64 && fresh == free_set; ++tries) {
        perm = random_permutation(n, rng);
        fresh.assign(perm.begin(), perm.begin() + n_free);
        std::sort(fresh.begin(), fresh.end());
      }
      free_set = fresh;
      ++permutation_id;
    }
  }

  result.steps = params.max_steps;
  result.converged = false;
  return result;
}

namespace {

// Real vectorization of an anti-Hermitian matrix (imaginary diagonal plus
// the real/imaginary parts of the upper triangle): dimension N^2 over R.
RealVector vectorize_anti_hermitian(const Matrix& x) {
  const int n = static_cast<int>(x.rows());
  RealVector v(n * n);
  int at = 0;
  for (int i = 0; i < n; ++i) v(at++) = x(i, i).imag();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      v(at++) = x(i, j).real();
      v(at++) = x(i, j).imag();
    }
  return v;
}

}  // namespace

BracketGenerationReport bracket_generation_check(const Matrix& a,
                                                 const Matrix& b, double tol) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows())
    throw ValidationError("generators must be square with equal dimension");
  const double vtol = tolerances().validation;
  if (!is_hermitian(a, vtol) || !is_hermitian(b, vtol))
    throw ValidationError("generators must be Hermitian");

  const int n = static_cast<int>(a.rows());
  const int full = n * n;
  const Complex im(0.0, 1.0);

  std::vector<Matrix> basis;  // orthonormal w.r.t. the Frobenius inner product
  auto try_add = [&](Matrix x) {
    const double scale = x.norm();
    if (scale < 1e-14) return;
    x /= scale;
    for (int pass = 0; pass < 2; ++pass)
      for (const Matrix& e : basis) {
        const Complex overlap = (e.adjoint() * x).trace();
        x -= overlap.real() * e;  // overlap is real for anti-Hermitian pairs
      }
    const double residual = x.norm();
    if (residual > 1e-8) basis.push_back(x / residual);
  };

  try_add(im * a);
  try_add(im * b);
  // Process every unordered pair once; new elements extend the loop bound.
  for (size_t i = 1; i < basis.size() && static_cast<int>(basis.size()) < full;
       ++i)
    for (size_t j = 0; j < i && static_cast<int>(basis.size()) < full; ++j)
      try_add(basis[i] * basis[j] - basis[j] * basis[i]);

  BracketGenerationReport report;
  report.rank = static_cast<int>(basis.size());

  // Rank of the traceless projections decides controllability up to phase.
  RealMatrix stacked(full, basis.size());
  const Matrix identity = Matrix::Identity(n, n);
  for (size_t k = 0; k < basis.size(); ++k) {
    const Matrix traceless =
        basis[k] - (basis[k].trace() / static_cast<double>(n)) * identity;
    stacked.col(k) = vectorize_anti_hermitian(traceless);
  }
  Eigen::ColPivHouseholderQR<RealMatrix> qr(stacked);
  qr.setThreshold(tol);
  report.traceless_rank = static_cast<int>(qr.rank());
  report.satisfied =
      report.rank == full || report.traceless_rank == full - 1;
  return report;
}

}  // namespace qzeno
