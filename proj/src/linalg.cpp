#include "qzeno/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>
#include <numbers>

namespace qzeno {

bool is_hermitian(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol * scale;
}

bool is_unitary(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  const Matrix defect =
      m.adjoint() * m - Matrix::Identity(m.rows(), m.cols());
  return defect.cwiseAbs().maxCoeff() <= tol;
}

double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

HermitianOperator::HermitianOperator(std::string label_, Matrix mat_)
    : label(std::move(label_)), mat(std::move(mat_)) {
  if (mat.rows() != mat.cols())
    throw ValidationError("operator '" + label + "' is not square");
  if (!is_hermitian(mat, tolerances().validation))
    throw ValidationError("operator '" + label + "' is not Hermitian");
  mat = ((mat + mat.adjoint()) / 2.0).eval();
}

UnitaryMatrix::UnitaryMatrix(Matrix mat_) : mat(std::move(mat_)) {
  if (!is_unitary(mat, tolerances().unitarity))
    throw ValidationError("matrix is not unitary within tolerance");
}

Matrix tensor_product(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

HermitianExp::HermitianExp(const Matrix& h) {
  if (!is_hermitian(h, tolerances().validation))
    throw ValidationError("exponential generator is not Hermitian");
  h_ = (h + h.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(h_);
  if (es.info() != Eigen::Success)
    throw ConvergenceError("eigendecomposition failed");
  vecs_ = es.eigenvectors();
  vals_ = es.eigenvalues();
}

Matrix HermitianExp::at(double t) const {
  Vector phases(vals_.size());
  for (Eigen::Index i = 0; i < vals_.size(); ++i)
    phases(i) = std::exp(Complex(0.0, -vals_(i) * t));
  return vecs_ * phases.asDiagonal() * vecs_.adjoint();
}

Matrix matrix_exponential_hermitian(const Matrix& h, double t) {
  return HermitianExp(h).at(t);
}

double uniform_real(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double gaussian(std::mt19937_64& rng) {
  // Box-Muller; discards the second variate to keep the stream simple.
  double u1 = uniform_real(rng);
  while (u1 <= 0.0) u1 = uniform_real(rng);
  const double u2 = uniform_real(rng);
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

std::vector<int> random_permutation(int n, std::mt19937_64& rng) {
  std::vector<int> p(n);
  for (int i = 0; i < n; ++i) p[i] = i;
  for (int i = n - 1; i > 0; --i) {
    const int j = static_cast<int>(rng() % static_cast<std::uint64_t>(i + 1));
    std::swap(p[i], p[j]);
  }
  return p;
}

namespace {
// Real part drawn strictly before the imaginary part: argument evaluation
// order is unspecified, and the stream must not depend on the compiler.
Complex complex_gaussian(std::mt19937_64& rng) {
  const double re = gaussian(rng);
  const double im = gaussian(rng);
  return Complex(re, im);
}
}  // namespace

Vector random_state(int dim, std::mt19937_64& rng) {
  Vector v(dim);
  for (int i = 0; i < dim; ++i) v(i) = complex_gaussian(rng);
  const double n = v.norm();
  if (n == 0.0) return random_state(dim, rng);
  return v / n;
}

Matrix random_matrix(int rows, int cols, std::mt19937_64& rng) {
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      m(i, j) = complex_gaussian(rng);
  return m;
}

Matrix random_hermitian(int dim, std::mt19937_64& rng) {
  const Matrix m = random_matrix(dim, dim, rng);
  return (m + m.adjoint()) / 2.0;
}

Matrix gram_schmidt_complete(const std::vector<Vector>& vectors, int dim,
                             std::uint64_t seed) {
  const int given = static_cast<int>(vectors.size());
  if (dim <= 0 || given > dim)
    throw ValidationError("gram_schmidt_complete: more vectors than dim");
  for (const Vector& v : vectors)
    if (v.size() != dim)
      throw ValidationError("gram_schmidt_complete: vector dimension mismatch");

  // The provided columns must already be orthonormal; they are kept exactly.
  const double tol = std::max(tolerances().unitarity, 1e-10);
  for (int i = 0; i < given; ++i)
    for (int j = 0; j <= i; ++j) {
      const Complex g = vectors[j].dot(vectors[i]);
      const double want = (i == j) ? 1.0 : 0.0;
      if (std::abs(g - want) > tol)
        throw ValidationError(
            "gram_schmidt_complete: input vectors are not orthonormal");
    }

  Matrix u(dim, dim);
  for (int i = 0; i < given; ++i) u.col(i) = vectors[i];

  std::mt19937_64 rng(seed);
  int col = given;
  int attempts = 0;
  while (col < dim) {
    if (++attempts > 64 * dim)
      throw ConvergenceError("gram_schmidt_complete: completion failed");
    Vector v(dim);
    for (int i = 0; i < dim; ++i) v(i) = complex_gaussian(rng);
    // Two projection passes (classical twice == numerically modified) keep
    // the completion orthogonal to working precision.
    for (int pass = 0; pass < 2; ++pass)
      for (int j = 0; j < col; ++j) v -= u.col(j).dot(v) * u.col(j);
    const double n = v.norm();
    if (n < 1e-6) continue;  // degenerate draw; try again
    u.col(col) = v / n;
    ++col;
  }
  return u;
}

std::vector<Vector> orthonormalize(const std::vector<Vector>& vectors) {
  std::vector<Vector> out;
  out.reserve(vectors.size());
  for (Vector v : vectors) {
    for (int pass = 0; pass < 2; ++pass)
      for (const Vector& q : out) v -= q.dot(v) * q;
    const double n = v.norm();
    if (n < 1e-8)
      throw ValidationError("orthonormalize: linearly dependent vectors");
    out.push_back(v / n);
  }
  return out;
}

}  // namespace qzeno
