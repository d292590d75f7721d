#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace qzeno {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

// Input validation failed (bad dimensions, non-Hermitian generator, malformed
// file, inconsistent configuration). CLI exit code 2.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An iterative routine exhausted its budget without reaching its target.
// CLI exit code 3.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Filesystem-level failure (missing file, unwritable output). CLI exit code 4.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Numeric guard rails used across the library.  `validation` bounds how far
// an input may deviate from its contract (hermiticity, normalization,
// orthonormality) before it is rejected; `unitarity` bounds the acceptable
// defect of constructed unitaries (propagators, basis completions).
struct ToleranceProfile {
  std::string name = "default";
  double validation = 1e-12;
  double unitarity = 1e-10;

  static ToleranceProfile by_name(const std::string& name);
};

// Process-wide active profile (set once by the CLI, read by the library).
ToleranceProfile& tolerances();

}  // namespace qzeno
