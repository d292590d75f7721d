#pragma once

#include <cstdint>
#include <vector>

#include "qzeno/linalg.hpp"
#include "qzeno/types.hpp"

namespace qzeno {

// A stack of I candidate codewords, each of dimension N.  Conditions on the
// codewords become linear constraint operators on the stacked (N*I)-vector.
struct Supervector {
  int dim = 0;                 // N
  std::vector<Vector> comps;   // I components

  int blocks() const { return static_cast<int>(comps.size()); }
  double norm() const;
  Vector flat() const;
};

Supervector random_supervector(int dim, int blocks, std::mt19937_64& rng);

// One block-sparse constraint operator: a single N x N content placed at
// block (row, col) of the stacked space, zero elsewhere.  error_index < 0
// places the identity (a pairwise-orthogonality constraint, row < col);
// otherwise it places errors[error_index] (row <= col).
struct SuperBlock {
  int row = 0;
  int col = 0;
  int error_index = -1;
};

struct SuperMatrixSet {
  int dim = 0;     // N
  int blocks = 0;  // I
  std::vector<Matrix> errors;
  std::vector<SuperBlock> ops;

  int size() const { return static_cast<int>(ops.size()); }
  int orthonormality_count() const { return blocks * (blocks - 1) / 2; }
  int error_count() const { return size() - orthonormality_count(); }
  // First operator index that carries an error content (the orthonormality
  // identities come first).
  int first_error_op() const { return orthonormality_count(); }
};

// I(I-1)/2 identity placements strictly above the diagonal, then for each
// error all I(I+1)/2 on-or-above-diagonal placements.
SuperMatrixSet build_supermatrices(const std::vector<Matrix>& errors,
                                   int blocks);

// <bra| E_k |ket>; the block sparsity reduces this to a single N-dim sandwich.
Complex supermatrix_element(const SuperMatrixSet& set, int k,
                            const Supervector& bra, const Supervector& ket);
inline Complex supermatrix_element(const SuperMatrixSet& set, int k,
                                   const Supervector& c) {
  return supermatrix_element(set, k, c, c);
}

// E_k |c>: only component `ops[k].row` is non-zero; returned densely.
Supervector apply_supermatrix(const SuperMatrixSet& set, int k,
                              const Supervector& c);

struct ConditionResiduals {
  std::vector<Complex> per_operator;  // <C|E_k|C>
  double total = 0.0;                 // sum of squared magnitudes
};
ConditionResiduals condition_residuals(const SuperMatrixSet& set,
                                       const Supervector& c);

// One linearized update: minimizes ||C + sum_k lambda_k E_k C||^2 over the
// complex coefficients by solving the real 2E x 2E block system K L = D.
struct CodeSearchStep {
  std::vector<Complex> lambda;
  Supervector delta;  // sum_k lambda_k E_k C
};
CodeSearchStep code_search_step(const SuperMatrixSet& set,
                                const Supervector& c);

// Exposed for property tests: the K matrix and D vector of the step system.
void assemble_step_system(const SuperMatrixSet& set, const Supervector& c,
                          RealMatrix& k_out, RealVector& d_out);

struct SearchParams {
  int max_iterations = 100000;
  double target_residual = 1e-10;
  double step_fraction = 0.5;
  int restart_limit = -1;  // restarts on stalls; negative = no cap
  std::uint64_t seed = 1;
};

struct SearchResult {
  Supervector code;
  double residual = 0.0;
  int iterations = 0;
  int restarts = 0;
  bool converged = false;
};

SearchResult iterate_code_search(const SuperMatrixSet& set,
                                 const SearchParams& params);

// Codeword basis with its condition defects.
struct CodeBasis {
  int dim = 0;
  std::vector<Vector> codewords;
  double orthonormality_residual = 0.0;    // max |<t|s> - delta_ts|
  double error_orthogonality_residual = 0.0;  // max |<t|E_m|s>|
};

CodeBasis make_code_basis(const std::vector<Vector>& codewords,
                          const std::vector<Matrix>& errors);

// Relaxed acceptance: errors may act as a common scalar on the subspace
// (<t|E_m|s> = delta_ts * xi_m), which only contributes a global phase.
struct GeneralizedConditionReport {
  std::vector<double> xi;      // per error, mean of the diagonal
  double max_deviation = 0.0;  // max |<t|E_m|s> - delta_ts xi_m|
  bool satisfied = false;
};
GeneralizedConditionReport check_generalized_condition(
    const std::vector<Vector>& basis, const std::vector<Matrix>& errors,
    double tol = 1e-8);

// Dimension-counting feasibility screen: ancilla_dim - 1 >= error_count.
bool hamming_bound_ok(int ancilla_dim, int error_count);

struct FindCodeResult {
  CodeBasis basis;
  SearchResult search;
  bool hamming_ok = true;
};

// Full pipeline: feasibility screen (warning only), supermatrix construction,
// seeded iterative search, final residual report.
FindCodeResult find_code(const std::vector<Matrix>& errors, int block_count,
                         const SearchParams& params);

}  // namespace qzeno
