#include "qzeno/angular.hpp"

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>

namespace qzeno {

namespace {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

// Converts j (or m) to its doubled integer representation, validating that
// the input is an integer or half-integer.
int twice(double x, const char* what) {
  const double t = 2.0 * x;
  const double r = std::round(t);
  if (std::abs(t - r) > 1e-9)
    throw ValidationError(std::string(what) +
                          " must be an integer or half-integer");
  return static_cast<int>(r);
}

BigInt factorial(int n) {
  BigInt f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// Factorial of twice_n/2; twice_n must be even (checked by callers via
// parity screens) and non-negative.
BigInt fact2(int twice_n) {
  return factorial(twice_n / 2);
}

}  // namespace

AngularMomentumOps angular_momentum_operator_impl(int twice_l) {
  const int dim = twice_l + 1;
  const double l = twice_l / 2.0;
  AngularMomentumOps ops;
  ops.twice_l = twice_l;
  ops.lz = Matrix::Zero(dim, dim);
  ops.lplus = Matrix::Zero(dim, dim);
  ops.lminus = Matrix::Zero(dim, dim);
  // Row/column i holds m = l - i (descending m).
  for (int i = 0; i < dim; ++i) {
    const double m = l - i;
    ops.lz(i, i) = m;
    if (i > 0)  // raising: |l,m> -> |l,m+1>, row index i-1
      ops.lplus(i - 1, i) = std::sqrt(l * (l + 1) - m * (m + 1));
    if (i < dim - 1)
      ops.lminus(i + 1, i) = std::sqrt(l * (l + 1) - m * (m - 1));
  }
  ops.lx = (ops.lplus + ops.lminus) / 2.0;
  ops.ly = (ops.lplus - ops.lminus) / Complex(0.0, 2.0);
  return ops;
}

AngularMomentumOps angular_momentum_operators(double l) {
  const int twice_l = twice(l, "l");
  if (twice_l < 0) throw ValidationError("l must be non-negative");
  return angular_momentum_operator_impl(twice_l);
}

double clebsch_gordan(double j1, double m1, double j2, double m2, double J,
                      double M) {
  const int tj1 = twice(j1, "j1"), tm1 = twice(m1, "m1");
  const int tj2 = twice(j2, "j2"), tm2 = twice(m2, "m2");
  const int tJ = twice(J, "J"), tM = twice(M, "M");
  if (tj1 < 0 || tj2 < 0 || tJ < 0) throw ValidationError("j must be >= 0");

  // Out-of-domain combinations are defined as zero.
  if (((tj1 + tm1) & 1) || ((tj2 + tm2) & 1) || ((tJ + tM) & 1)) return 0.0;
  if (std::abs(tm1) > tj1 || std::abs(tm2) > tj2 || std::abs(tM) > tJ)
    return 0.0;
  if (tm1 + tm2 != tM) return 0.0;
  if (tJ < std::abs(tj1 - tj2) || tJ > tj1 + tj2) return 0.0;
  if ((tj1 + tj2 + tJ) & 1) return 0.0;  // couplings need integer j1+j2+J

  // Prefactor, exact:  (2J+1) * triangle(j1,j2,J) * product of m-factorials.
  BigRational prefactor(tJ + 1, 1);
  prefactor *= BigRational(fact2(tj1 + tj2 - tJ) * fact2(tj1 - tj2 + tJ) *
                               fact2(-tj1 + tj2 + tJ),
                           fact2(tj1 + tj2 + tJ + 2));
  prefactor *= BigRational(fact2(tJ + tM) * fact2(tJ - tM) * fact2(tj1 - tm1) *
                               fact2(tj1 + tm1) * fact2(tj2 - tm2) *
                               fact2(tj2 + tm2),
                           1);

  // Alternating sum, exact.  k runs over all values keeping every factorial
  // argument non-negative; arguments are even in doubled representation.
  const int k_min =
      std::max({0, -(tJ - tj1 - tm2) / 2, -(tJ - tj2 + tm1) / 2});
  const int k_max = std::min({(tj1 + tj2 - tJ) / 2, (tj1 - tm1) / 2,
                              (tj2 + tm2) / 2});
  BigRational sum = 0;
  for (int k = k_min; k <= k_max; ++k) {
    BigInt denom = factorial(k) * fact2(tj1 + tj2 - tJ - 2 * k) *
                   fact2(tj1 - tm1 - 2 * k) * fact2(tj2 + tm2 - 2 * k) *
                   fact2(tJ - tj1 - tm2 + 2 * k) *
                   fact2(tJ - tj2 + tm1 + 2 * k);
    if (k & 1)
      sum -= BigRational(1, denom);
    else
      sum += BigRational(1, denom);
  }
  if (sum == 0) return 0.0;

  const BigRational square = prefactor * sum * sum;
  const double magnitude = std::sqrt(square.convert_to<double>());
  return sum < 0 ? -magnitude : magnitude;
}

}  // namespace qzeno
