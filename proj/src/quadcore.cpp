#include "quadagg/quadcore.hpp"

#include "quadagg/spectral.hpp"

namespace quadagg {

double evaluate(const QuadConstraint& q, const Vector& x) {
  if (x.size() != q.n()) {
    throw std::invalid_argument("evaluate: dim(x) must equal order(A)");
  }
  return q.A.quad(x) + 2.0 * q.b.dot(x) + q.c;
}

SymMatrix homogenized_matrix(const QuadConstraint& q) {
  const int n = q.n();
  Matrix m(n + 1, n + 1);
  m.topLeftCorner(n, n) = q.A.mat();
  m.col(n).head(n) = q.b;
  m.row(n).head(n) = q.b.transpose();
  m(n, n) = q.c;
  return SymMatrix(m);
}

QuadConstraint aggregate(const QuadSystem& sys, const Weights& w) {
  if (w.size() != sys.m()) {
    throw std::invalid_argument("aggregate: weight count must equal constraint count");
  }
  Matrix a = Matrix::Zero(sys.n, sys.n);
  Vector b = Vector::Zero(sys.n);
  double c = 0.0;
  for (int i = 0; i < sys.m(); ++i) {
    const double wi = w.values(i);
    a += wi * sys.constraints[i].A.mat();
    b += wi * sys.constraints[i].b;
    c += wi * sys.constraints[i].c;
  }
  return QuadConstraint(SymMatrix(a), b, c, sys.sense());
}

int nu(const QuadConstraint& q, double tol) {
  if (tol <= 0.0) throw std::invalid_argument("nu: tol must be positive");
  return negative_eigenvalue_count(q.A, tol);
}

bool contains_point(const QuadSystem& sys, const Vector& x, double margin) {
  if (x.size() != sys.n) {
    throw std::invalid_argument("contains_point: dim(x) must equal n");
  }
  for (const auto& q : sys.constraints) {
    const double v = evaluate(q, x);
    if (q.sense == Sense::Strict ? !(v < -margin) : !(v <= margin)) return false;
  }
  return true;
}

}  // namespace quadagg
