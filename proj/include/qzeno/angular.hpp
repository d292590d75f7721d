#pragma once

#include "qzeno/types.hpp"

namespace qzeno {

// Spin-l operators in the |l,m> basis ordered by descending m
// (m = l, l-1, ..., -l).  l may be integer or half-integer.
struct AngularMomentumOps {
  int twice_l = 0;
  Matrix lz, lplus, lminus, lx, ly;
  int dim() const { return twice_l + 1; }
};

AngularMomentumOps angular_momentum_operators(double l);

// <j1 m1; j2 m2 | J M> with the Condon-Shortley phase convention.  Arguments
// are integers or half-integers (validated); out-of-domain combinations
// (triangle violation, M != m1+m2, |m| > j, parity mismatch) return 0.
// Evaluated from the exact factorial sum with rational intermediates, so the
// returned double is correct to the last unit.
double clebsch_gordan(double j1, double m1, double j2, double m2, double J,
                      double M);

}  // namespace qzeno
