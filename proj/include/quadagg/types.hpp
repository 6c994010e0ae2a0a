#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace quadagg {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Thrown when an iterative routine fails to reach its tolerance.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

enum class Sense { Strict, Nonstrict };

inline const char* to_string(Sense s) {
  return s == Sense::Strict ? "strict" : "nonstrict";
}

/// Dense real symmetric matrix. Construction mirrors the upper triangle so
/// that entry (i,j) equals entry (j,i) exactly.
class SymMatrix {
 public:
  SymMatrix() = default;

  explicit SymMatrix(const Matrix& m) {
    if (m.rows() != m.cols()) {
      throw std::invalid_argument("SymMatrix: matrix must be square");
    }
    if (!m.allFinite()) {
      throw std::invalid_argument("SymMatrix: entries must be finite");
    }
    m_ = 0.5 * (m + m.transpose());
    for (Eigen::Index i = 0; i < m_.rows(); ++i) {
      for (Eigen::Index j = i + 1; j < m_.cols(); ++j) {
        m_(j, i) = m_(i, j);
      }
    }
  }

  static SymMatrix Zero(int order) { return SymMatrix(Matrix::Zero(order, order)); }
  static SymMatrix Identity(int order) { return SymMatrix(Matrix::Identity(order, order)); }

  int order() const { return static_cast<int>(m_.rows()); }
  const Matrix& mat() const { return m_; }
  double operator()(int i, int j) const { return m_(i, j); }

  /// Frobenius inner product <A, B>.
  double inner(const SymMatrix& other) const {
    return (m_.array() * other.m_.array()).sum();
  }

  /// Quadratic form x' M x.
  double quad(const Vector& x) const { return x.dot(m_ * x); }

  double frobenius_norm() const { return m_.norm(); }

 private:
  Matrix m_;
};

inline SymMatrix operator+(const SymMatrix& a, const SymMatrix& b) {
  return SymMatrix(a.mat() + b.mat());
}

inline SymMatrix operator-(const SymMatrix& a, const SymMatrix& b) {
  return SymMatrix(a.mat() - b.mat());
}

inline SymMatrix operator*(double s, const SymMatrix& a) { return SymMatrix(s * a.mat()); }

/// One quadratic constraint x'Ax + 2b'x + c  (<|<=)  0.
struct QuadConstraint {
  SymMatrix A;
  Vector b;
  double c = 0.0;
  Sense sense = Sense::Strict;

  QuadConstraint() = default;
  QuadConstraint(SymMatrix A_, Vector b_, double c_, Sense sense_)
      : A(std::move(A_)), b(std::move(b_)), c(c_), sense(sense_) {
    if (b.size() != A.order()) {
      throw std::invalid_argument("QuadConstraint: dim(b) must equal order(A)");
    }
  }

  int n() const { return A.order(); }
};

/// A system of m >= 1 quadratic constraints over R^n with a uniform sense.
struct QuadSystem {
  int n = 0;
  std::vector<QuadConstraint> constraints;

  QuadSystem() = default;
  QuadSystem(int n_, std::vector<QuadConstraint> cs) : n(n_), constraints(std::move(cs)) {
    if (constraints.empty()) {
      throw std::invalid_argument("QuadSystem: at least one constraint required");
    }
    for (const auto& q : constraints) {
      if (q.n() != n) {
        throw std::invalid_argument("QuadSystem: constraint dimension mismatch");
      }
      if (q.sense != constraints.front().sense) {
        throw std::invalid_argument("QuadSystem: all senses must match");
      }
    }
  }

  int m() const { return static_cast<int>(constraints.size()); }
  Sense sense() const { return constraints.front().sense; }
};

/// Multiplier vector. Unsigned weights model lambda >= 0 (not all zero);
/// signed weights model the theta vector of a definite linear combination.
struct Weights {
  Vector values;
  bool is_signed = false;

  Weights() = default;
  Weights(Vector v, bool is_signed_) : values(std::move(v)), is_signed(is_signed_) {
    if (!is_signed) {
      if ((values.array() < 0).any()) {
        throw std::invalid_argument("Weights: unsigned weights must be nonnegative");
      }
      if (values.lpNorm<1>() == 0.0) {
        throw std::invalid_argument("Weights: unsigned weights must not all vanish");
      }
    }
  }

  int size() const { return static_cast<int>(values.size()); }
};

}  // namespace quadagg
