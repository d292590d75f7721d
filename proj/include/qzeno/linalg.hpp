#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "qzeno/types.hpp"

namespace qzeno {

bool is_hermitian(const Matrix& m, double tol);
bool is_unitary(const Matrix& m, double tol);
double spectral_norm(const Matrix& m);

// Labelled Hermitian generator; construction validates hermiticity against
// the active tolerance profile and symmetrizes the stored matrix so later
// eigendecompositions see an exactly Hermitian input.
struct HermitianOperator {
  std::string label;
  Matrix mat;

  HermitianOperator() = default;
  HermitianOperator(std::string label_, Matrix mat_);
};

struct UnitaryMatrix {
  Matrix mat;

  UnitaryMatrix() = default;
  explicit UnitaryMatrix(Matrix mat_);
};

// Kronecker product; the first factor is the slow (block) index.  Composite
// bases across the project order their labels accordingly.
Matrix tensor_product(const Matrix& a, const Matrix& b);

// exp(-i h t) for Hermitian h.  Caches the eigensystem so repeated
// exponentials of the same generator cost one dense multiply each.
class HermitianExp {
 public:
  explicit HermitianExp(const Matrix& h);
  Matrix at(double t) const;  // exp(-i h t)
  const Matrix& generator() const { return h_; }

 private:
  Matrix h_;
  Matrix vecs_;
  RealVector vals_;
};

Matrix matrix_exponential_hermitian(const Matrix& h, double t);

// Unitary whose first `vectors.size()` columns are exactly the inputs.  The
// inputs must be orthonormal within the validation tolerance; the remaining
// columns are completed deterministically from a seeded Gaussian draw.
Matrix gram_schmidt_complete(const std::vector<Vector>& vectors, int dim,
                             std::uint64_t seed = 0x5eed0c0de5u);

// Exact Gram-Schmidt pass over nearly-orthonormal vectors (e.g. the output
// of an iterative search); throws when a vector is linearly dependent.
std::vector<Vector> orthonormalize(const std::vector<Vector>& vectors);

// Seeded draws used for starts, completions and test fixtures.  The mt19937_64
// stream is specified exactly by the standard, and the mappings below avoid
// std::*_distribution (whose algorithms are implementation-defined), so every
// seeded draw is reproducible across standard libraries.
double uniform_real(std::mt19937_64& rng);                   // [0, 1)
double gaussian(std::mt19937_64& rng);                       // N(0, 1)
std::vector<int> random_permutation(int n, std::mt19937_64& rng);
Vector random_state(int dim, std::mt19937_64& rng);
Matrix random_matrix(int rows, int cols, std::mt19937_64& rng);
Matrix random_hermitian(int dim, std::mt19937_64& rng);

}  // namespace qzeno
