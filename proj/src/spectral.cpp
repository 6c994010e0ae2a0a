#include "quadagg/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace quadagg {

namespace {

// One cyclic sweep of Jacobi rotations over the strict upper triangle.
void jacobi_sweep(Matrix& a, Matrix& v) {
  const int n = static_cast<int>(a.rows());
  for (int p = 0; p < n - 1; ++p) {
    for (int q = p + 1; q < n; ++q) {
      const double apq = a(p, q);
      if (apq == 0.0) continue;
      const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
      double t;
      if (std::isfinite(tau)) {
        t = 1.0 / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        if (tau < 0.0) t = -t;
      } else {
        t = 0.0;
      }
      const double c = 1.0 / std::sqrt(1.0 + t * t);
      const double s = t * c;
      if (s == 0.0) continue;

      for (int k = 0; k < n; ++k) {
        const double akp = a(k, p);
        const double akq = a(k, q);
        a(k, p) = c * akp - s * akq;
        a(k, q) = s * akp + c * akq;
      }
      for (int k = 0; k < n; ++k) {
        const double apk = a(p, k);
        const double aqk = a(q, k);
        a(p, k) = c * apk - s * aqk;
        a(q, k) = s * apk + c * aqk;
      }
      a(p, q) = 0.0;
      a(q, p) = 0.0;
      for (int k = 0; k < n; ++k) {
        const double vkp = v(k, p);
        const double vkq = v(k, q);
        v(k, p) = c * vkp - s * vkq;
        v(k, q) = s * vkp + c * vkq;
      }
    }
  }
}

double offdiag_norm(const Matrix& a) {
  const int n = static_cast<int>(a.rows());
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) s += 2.0 * a(i, j) * a(i, j);
  }
  return std::sqrt(s);
}

void fix_eigenvector_sign(Matrix& vectors, int col) {
  const Eigen::Index n = vectors.rows();
  const double big = vectors.col(col).cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(vectors(i, col)) > 1e-12 * std::max(1.0, big)) {
      if (vectors(i, col) < 0.0) vectors.col(col) *= -1.0;
      return;
    }
  }
}

double spectral_radius(const Vector& eigenvalues) {
  return eigenvalues.size() == 0 ? 0.0 : eigenvalues.cwiseAbs().maxCoeff();
}

}  // namespace

Spectrum eigh(const SymMatrix& M) {
  const int n = M.order();
  Matrix a = M.mat();
  Matrix v = Matrix::Identity(n, n);

  const double norm = a.norm();
  if (n > 1 && norm > 0.0) {
    const double thresh = 1e-12 * norm;
    bool converged = false;
    for (int sweep = 0; sweep < 100; ++sweep) {
      if (offdiag_norm(a) <= thresh) {
        converged = true;
        break;
      }
      jacobi_sweep(a, v);
    }
    if (!converged && offdiag_norm(a) > thresh) {
      throw NumericalError("eigh: Jacobi iteration did not converge in 100 sweeps");
    }
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int i, int j) { return a(i, i) > a(j, j); });

  Spectrum s;
  s.eigenvalues = Vector(n);
  s.eigenvectors = Matrix(n, n);
  for (int k = 0; k < n; ++k) {
    s.eigenvalues(k) = a(order[k], order[k]);
    s.eigenvectors.col(k) = v.col(order[k]);
    fix_eigenvector_sign(s.eigenvectors, k);
  }
  return s;
}

double min_eigenvalue(const SymMatrix& M) {
  const Spectrum s = eigh(M);
  return s.eigenvalues(M.order() - 1);
}

bool is_psd(const SymMatrix& M, double tol) {
  if (tol < 0.0) throw std::invalid_argument("is_psd: tol must be nonnegative");
  const Spectrum s = eigh(M);
  const double scale = std::max(1.0, spectral_radius(s.eigenvalues));
  return s.eigenvalues(M.order() - 1) >= -tol * scale;
}

int negative_eigenvalue_count(const SymMatrix& M, double tol) {
  const Spectrum s = eigh(M);
  const double cutoff = -tol * std::max(1.0, spectral_radius(s.eigenvalues));
  int count = 0;
  for (Eigen::Index i = 0; i < s.eigenvalues.size(); ++i) {
    if (s.eigenvalues(i) < cutoff) ++count;
  }
  return count;
}

std::optional<FauxSeparator> classify_scc(const SymMatrix& M, double tol) {
  const Spectrum s = eigh(M);
  const double cutoff = -tol * std::max(1.0, spectral_radius(s.eigenvalues));
  int count = 0;
  for (Eigen::Index i = 0; i < s.eigenvalues.size(); ++i) {
    if (s.eigenvalues(i) < cutoff) ++count;
  }
  if (count != 1) return std::nullopt;
  // Eigenvalues are sorted descending, so the negative one is last.
  return FauxSeparator{s.eigenvectors.col(M.order() - 1)};
}

SymMatrix restrict_to(const SymMatrix& M, const Matrix& U) {
  if (U.rows() != M.order()) {
    throw std::invalid_argument("restrict_to: U row count must equal order(M)");
  }
  const Matrix gram = U.transpose() * U;
  const Matrix id = Matrix::Identity(U.cols(), U.cols());
  if ((gram - id).cwiseAbs().maxCoeff() > 1e-10) {
    throw std::invalid_argument("restrict_to: U columns must be orthonormal");
  }
  return SymMatrix(U.transpose() * M.mat() * U);
}

Matrix hyperplane_basis(const Vector& normal) {
  const double norm = normal.norm();
  if (norm == 0.0) {
    throw std::invalid_argument("hyperplane_basis: normal must be nonzero");
  }
  const Eigen::Index k = normal.size();
  Vector u = normal / norm;
  Vector w = u;
  w(0) += std::copysign(1.0, u(0));
  const Matrix h = Matrix::Identity(k, k) - (2.0 / w.squaredNorm()) * (w * w.transpose());
  // h maps e1 to -sign(u(0)) * u; the remaining columns span the complement.
  return h.rightCols(k - 1);
}

}  // namespace quadagg
