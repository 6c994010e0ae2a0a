#pragma once

#include "quadagg/types.hpp"

#include <optional>

namespace quadagg {

/// Full spectral decomposition. Eigenvalues sorted descending; column i of
/// eigenvectors pairs with eigenvalue i; each eigenvector's first
/// non-negligible component is positive.
struct Spectrum {
  Vector eigenvalues;
  Matrix eigenvectors;
};

/// Unit normal of a linear hyperplane disjoint from the open negative set of
/// a one-negative-eigenvalue quadratic form.
struct FauxSeparator {
  Vector normal;
};

/// Cyclic Jacobi eigensolver. Converges when the off-diagonal Frobenius norm
/// drops below 1e-12 * ||M||_F; at most 100 sweeps, then NumericalError.
Spectrum eigh(const SymMatrix& M);

double min_eigenvalue(const SymMatrix& M);

/// lambda_min(M) >= -tol * max(1, spectral_radius(M)).
bool is_psd(const SymMatrix& M, double tol = 1e-9);

/// Count of eigenvalues below -tol * max(1, spectral_radius(M)).
int negative_eigenvalue_count(const SymMatrix& M, double tol = 1e-9);

/// If M has exactly one negative eigenvalue, returns its unit eigenvector:
/// the hyperplane orthogonal to it misses {x : x'Mx < 0}. Otherwise nullopt.
std::optional<FauxSeparator> classify_scc(const SymMatrix& M, double tol = 1e-9);

/// Congruence U'MU for U with orthonormal columns (checked to 1e-10).
SymMatrix restrict_to(const SymMatrix& M, const Matrix& U);

/// Orthonormal basis of the orthogonal complement of `normal`, chosen by a
/// fixed Householder completion so the output is deterministic.
Matrix hyperplane_basis(const Vector& normal);

}  // namespace quadagg
