#include "qzeno/code_search.hpp"

#include <Eigen/QR>
#include <algorithm>
#include <cmath>

namespace qzeno {

double Supervector::norm() const {
  double s = 0.0;
  for (const Vector& v : comps) s += v.squaredNorm();
  return std::sqrt(s);
}

Vector Supervector::flat() const {
  Vector out(dim * blocks());
  for (int i = 0; i < blocks(); ++i) out.segment(i * dim, dim) = comps[i];
  return out;
}

Supervector random_supervector(int dim, int blocks, std::mt19937_64& rng) {
  Supervector c;
  c.dim = dim;
  c.comps.reserve(blocks);
  for (int i = 0; i < blocks; ++i) c.comps.push_back(random_state(dim, rng));
  return c;
}

SuperMatrixSet build_supermatrices(const std::vector<Matrix>& errors,
                                   int blocks) {
  if (blocks < 1) throw ValidationError("need at least one codeword");
  if (errors.empty()) throw ValidationError("need at least one error");
  const int dim = static_cast<int>(errors.front().rows());
  for (const Matrix& e : errors) {
    if (e.rows() != dim || e.cols() != dim)
      throw ValidationError("error operators must share one square dimension");
    if (!is_hermitian(e, tolerances().validation))
      throw ValidationError("error operators must be Hermitian");
  }
  SuperMatrixSet set;
  set.dim = dim;
  set.blocks = blocks;
  set.errors = errors;
  // Pairwise-orthogonality identities strictly above the diagonal...
  for (int r = 0; r < blocks; ++r)
    for (int c = r + 1; c < blocks; ++c) set.ops.push_back({r, c, -1});
  // ...then every error in every on-or-above-diagonal block.
  for (int m = 0; m < static_cast<int>(errors.size()); ++m)
    for (int r = 0; r < blocks; ++r)
      for (int c = r; c < blocks; ++c) set.ops.push_back({r, c, m});
  return set;
}

namespace {

// E_k applied to the single component it reads; callers pair the result with
// ops[k].row.
Vector applied_column(const SuperMatrixSet& set, int k, const Supervector& c) {
  const SuperBlock& op = set.ops[k];
  if (op.error_index < 0) return c.comps[op.col];
  return set.errors[op.error_index] * c.comps[op.col];
}

}  // namespace

Complex supermatrix_element(const SuperMatrixSet& set, int k,
                            const Supervector& bra, const Supervector& ket) {
  const SuperBlock& op = set.ops[k];
  return bra.comps[op.row].dot(applied_column(set, k, ket));
}

Supervector apply_supermatrix(const SuperMatrixSet& set, int k,
                              const Supervector& c) {
  Supervector out;
  out.dim = set.dim;
  out.comps.assign(c.comps.size(), Vector::Zero(set.dim));
  out.comps[set.ops[k].row] = applied_column(set, k, c);
  return out;
}

ConditionResiduals condition_residuals(const SuperMatrixSet& set,
                                       const Supervector& c) {
  ConditionResiduals r;
  r.per_operator.reserve(set.size());
  for (int k = 0; k < set.size(); ++k) {
    const Complex v = supermatrix_element(set, k, c, c);
    r.per_operator.push_back(v);
    r.total += std::norm(v);
  }
  return r;
}

void assemble_step_system(const SuperMatrixSet& set, const Supervector& c,
                          RealMatrix& k_out, RealVector& d_out) {
  const int e = set.size();
  // Applied columns v_k = E_k C (single non-zero component each).
  std::vector<Vector> applied(e);
  for (int k = 0; k < e; ++k) applied[k] = applied_column(set, k, c);

  Matrix gram = Matrix::Zero(e, e);  // <E_i C | E_j C>
  Vector d(e);                       // <C | E_i | C>
  for (int i = 0; i < e; ++i) {
    d(i) = c.comps[set.ops[i].row].dot(applied[i]);
    for (int j = 0; j < e; ++j)
      if (set.ops[i].row == set.ops[j].row)
        gram(i, j) = applied[i].dot(applied[j]);
  }

  k_out.resize(2 * e, 2 * e);
  d_out.resize(2 * e);
  k_out.topLeftCorner(e, e) = gram.real();
  k_out.topRightCorner(e, e) = -gram.imag();
  k_out.bottomLeftCorner(e, e) = gram.imag();
  k_out.bottomRightCorner(e, e) = gram.real();
  d_out.head(e) = -d.real();
  d_out.tail(e) = d.imag();
}

CodeSearchStep code_search_step(const SuperMatrixSet& set,
                                const Supervector& c) {
  const int e = set.size();
  RealMatrix k;
  RealVector d;
  assemble_step_system(set, c, k, d);

  // K is symmetric positive semi-definite; a rank-revealing least-squares
  // solve returns the minimum-norm coefficients when constraints are
  // degenerate.
  Eigen::CompleteOrthogonalDecomposition<RealMatrix> cod(k);
  cod.setThreshold(1e-10);
  const RealVector solution = cod.solve(d);

  CodeSearchStep step;
  step.lambda.resize(e);
  step.delta.dim = set.dim;
  step.delta.comps.assign(c.comps.size(), Vector::Zero(set.dim));
  for (int i = 0; i < e; ++i) {
    step.lambda[i] = Complex(solution(i), solution(e + i));
    if (step.lambda[i] != Complex(0.0, 0.0))
      step.delta.comps[set.ops[i].row] +=
          step.lambda[i] * applied_column(set, i, c);
  }
  return step;
}

namespace {

// Fractional update with per-component renormalization; returns the new
// residual, or infinity when a component collapses.
double residual_after_step(const SuperMatrixSet& set, const Supervector& c,
                           const CodeSearchStep& step, double alpha,
                           Supervector& out) {
  out = c;
  for (int i = 0; i < c.blocks(); ++i) {
    out.comps[i] += alpha * step.delta.comps[i];
    const double n = out.comps[i].norm();
    if (n < 1e-10) return std::numeric_limits<double>::infinity();
    out.comps[i] /= n;
  }
  return condition_residuals(set, out).total;
}

}  // namespace

SearchResult iterate_code_search(const SuperMatrixSet& set,
                                 const SearchParams& params) {
  std::mt19937_64 rng(params.seed);
  Supervector c = random_supervector(set.dim, set.blocks, rng);
  double res = condition_residuals(set, c).total;

  SearchResult best;
  best.code = c;
  best.residual = res;

  // Structured error sets leave the residual landscape riddled with strict
  // local minima; a monotone backtracking line search on the update fraction
  // plus a fresh random start whenever no fraction improves keeps the plain
  // fractional update from bouncing chaotically around them.
  static constexpr double kBacktrack[] = {1.0, 0.5, 0.2, 0.1, 0.02, 0.004};

  int restarts = 0;
  for (int iteration = 0; iteration <= params.max_iterations; ++iteration) {
    if (res < best.residual) {
      best.residual = res;
      best.code = c;
    }
    if (res < params.target_residual) {
      best.iterations = iteration;
      best.restarts = restarts;
      best.converged = true;
      return best;
    }
    if (iteration == params.max_iterations) break;

    const CodeSearchStep step = code_search_step(set, c);
    Supervector next;
    bool improved = false;
    for (const double scale : kBacktrack) {
      const double trial = residual_after_step(
          set, c, step, scale * params.step_fraction, next);
      if (trial < res) {
        c = std::move(next);
        res = trial;
        improved = true;
        break;
      }
    }
    if (!improved) {  // strict local minimum (or component collapse)
      if (restarts >= params.restart_limit && params.restart_limit >= 0)
        break;  // give up; report the best candidate seen
      ++restarts;
      c = random_supervector(set.dim, set.blocks, rng);
      res = condition_residuals(set, c).total;
    }
  }
  best.iterations = params.max_iterations;
  best.restarts = restarts;
  best.converged = false;
  return best;
}

CodeBasis make_code_basis(const std::vector<Vector>& codewords,
                          const std::vector<Matrix>& errors) {
  CodeBasis basis;
  if (codewords.empty()) throw ValidationError("empty codeword list");
  basis.dim = static_cast<int>(codewords.front().size());
  basis.codewords = codewords;
  for (size_t t = 0; t < codewords.size(); ++t)
    for (size_t s = 0; s < codewords.size(); ++s) {
      const Complex g = codewords[t].dot(codewords[s]);
      const double want = (t == s) ? 1.0 : 0.0;
      basis.orthonormality_residual =
          std::max(basis.orthonormality_residual, std::abs(g - want));
    }
  for (const Matrix& e : errors)
    for (const Vector& t : codewords)
      for (const Vector& s : codewords)
        basis.error_orthogonality_residual = std::max(
            basis.error_orthogonality_residual, std::abs(t.dot(e * s)));
  return basis;
}

GeneralizedConditionReport check_generalized_condition(
    const std::vector<Vector>& basis, const std::vector<Matrix>& errors,
    double tol) {
  if (basis.empty()) throw ValidationError("empty basis");
  const int n = static_cast<int>(basis.size());
  for (size_t t = 0; t < basis.size(); ++t)
    for (size_t s = 0; s <= t; ++s) {
      const Complex g = basis[s].dot(basis[t]);
      const double want = (t == s) ? 1.0 : 0.0;
      if (std::abs(g - want) > 1e-8)
        throw ValidationError("basis is not orthonormal");
    }

  GeneralizedConditionReport report;
  for (const Matrix& e : errors) {
    double xi = 0.0;
    for (const Vector& v : basis) xi += std::real(v.dot(e * v));
    xi /= n;
    report.xi.push_back(xi);
    for (int t = 0; t < n; ++t)
      for (int s = 0; s < n; ++s) {
        const Complex g = basis[t].dot(e * basis[s]);
        const Complex want = (t == s) ? Complex(xi, 0.0) : Complex(0.0, 0.0);
        report.max_deviation =
            std::max(report.max_deviation, std::abs(g - want));
      }
  }
  report.satisfied = report.max_deviation < tol;
  return report;
}

bool hamming_bound_ok(int ancilla_dim, int error_count) {
  return ancilla_dim - 1 >= error_count;
}

FindCodeResult find_code(const std::vector<Matrix>& errors, int block_count,
                         const SearchParams& params) {
  const SuperMatrixSet set = build_supermatrices(errors, block_count);
  FindCodeResult result;
  result.hamming_ok =
      set.dim % block_count == 0 &&
      hamming_bound_ok(set.dim / block_count,
                       static_cast<int>(errors.size()));
  result.search = iterate_code_search(set, params);
  result.basis = make_code_basis(result.search.code.comps, errors);
  return result;
}

}  // namespace qzeno
