#pragma once

#include "quadagg/types.hpp"

namespace quadagg {

/// Value of the quadratic form x'Ax + 2b'x + c.
double evaluate(const QuadConstraint& q, const Vector& x);

/// Block matrix [[A, b], [b', c]] of order n+1.
SymMatrix homogenized_matrix(const QuadConstraint& q);

/// Weighted sum of the system's constraints; defines S_lambda.
/// Unsigned weights must not vanish; signed weights are accepted for
/// assembling definite combinations.
QuadConstraint aggregate(const QuadSystem& sys, const Weights& w);

/// Number of eigenvalues of the A block below -tol * max(1, spectral_radius(A)).
int nu(const QuadConstraint& q, double tol = 1e-9);

/// Sense-aware membership with a numerical cushion: strict constraints must
/// evaluate below -margin, nonstrict ones at most margin. A negative margin
/// demands an interior cushion (used to sample int(T) in the closed case).
bool contains_point(const QuadSystem& sys, const Vector& x, double margin = 1e-9);

}  // namespace quadagg
