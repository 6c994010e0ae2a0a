#include "quadagg/spectral.hpp"

#include "quadagg/quadcore.hpp"
#include "quadagg/rng.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

using namespace quadagg;

namespace {

SymMatrix diag(std::initializer_list<double> entries) {
  const int n = static_cast<int>(entries.size());
  Matrix m = Matrix::Zero(n, n);
  int i = 0;
  for (double v : entries) m(i, i) = v, ++i;
  return SymMatrix(m);
}

// 4x4 determinant by cofactor expansion, independent of the eigensolver.
double det4(const Matrix& m) {
  auto det3 = [](double a, double b, double c, double d, double e, double f, double g, double h,
                 double i) { return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g); };
  double out = 0.0;
  for (int col = 0; col < 4; ++col) {
    Matrix sub(3, 3);
    for (int r = 1; r < 4; ++r) {
      int cc = 0;
      for (int c = 0; c < 4; ++c) {
        if (c == col) continue;
        sub(r - 1, cc++) = m(r, c);
      }
    }
    const double minor = det3(sub(0, 0), sub(0, 1), sub(0, 2), sub(1, 0), sub(1, 1), sub(1, 2),
                              sub(2, 0), sub(2, 1), sub(2, 2));
    out += (col % 2 == 0 ? 1.0 : -1.0) * m(0, col) * minor;
  }
  return out;
}

}  // namespace

TEST_CASE("eigh on a diagonal matrix") {
  const Spectrum s = eigh(diag({3, 1, -2}));
  CHECK(s.eigenvalues(0) == doctest::Approx(3).epsilon(1e-14));
  CHECK(s.eigenvalues(1) == doctest::Approx(1).epsilon(1e-14));
  CHECK(s.eigenvalues(2) == doctest::Approx(-2).epsilon(1e-14));
  // axis eigenvectors, sign rule makes the leading entry positive
  CHECK(s.eigenvectors.col(0).isApprox(Vector::Unit(3, 0), 1e-12));
  CHECK(s.eigenvectors.col(1).isApprox(Vector::Unit(3, 1), 1e-12));
  CHECK(s.eigenvectors.col(2).isApprox(Vector::Unit(3, 2), 1e-12));
}

TEST_CASE("definite combination matrix of the first worked example") {
  Matrix p(4, 4);
  p << 2, 0, 0, 3, 0, 4, 0, 0, 0, 0, 1, 0, 3, 0, 0, 9;
  const Spectrum s = eigh(SymMatrix(p));
  CHECK(s.eigenvalues(3) > 0.0);

  // smallest root of the characteristic polynomial, frozen from the 2x2
  // interacting block: (11 - sqrt(85)) / 2
  const double expected = 0.5 * (11.0 - std::sqrt(85.0));
  CHECK(min_eigenvalue(SymMatrix(p)) == doctest::Approx(expected).epsilon(1e-13));
  CHECK(expected > 0.0);
  CHECK(expected <= 1.0);

  // char-poly check: det(P - t I) vanishes at the computed eigenvalue
  const double t = min_eigenvalue(SymMatrix(p));
  CHECK(std::abs(det4(p - t * Matrix::Identity(4, 4))) < 1e-10);
}

TEST_CASE("worst orthant matrix eigenvalue") {
  Matrix q(3, 3);
  q << 1.5, 16.0 / 15.0, 16.0 / 15.0, 16.0 / 15.0, 1.5, 1.0 / 30.0, 16.0 / 15.0, 1.0 / 30.0, 1.5;
  const double expected = 22.0 / (15.0 * (std::sqrt(8193.0) + 91.0));
  CHECK(min_eigenvalue(SymMatrix(q)) == doctest::Approx(expected).epsilon(0).scale(1).epsilon(1e-12));
  CHECK(expected > 8.0 / 1000.0);
}

TEST_CASE("min_eigenvalue basics") {
  CHECK(min_eigenvalue(SymMatrix::Identity(4)) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(min_eigenvalue(diag({1, 0, -1})) == doctest::Approx(-1.0).epsilon(1e-14));
}

TEST_CASE("is_psd thresholds at the relative tolerance") {
  CHECK(is_psd(SymMatrix::Zero(3)));
  CHECK(is_psd(diag({1, 1, 0})));
  CHECK_FALSE(is_psd(diag({1, -1e-3, 1}), 1e-9));
  // lambda = (1,1,0) on diag(-1,..)-style test matrices sums to diag(0,0,2)
  CHECK(is_psd(diag({0, 0, 2})));
}

TEST_CASE("classify_scc returns the faux separator exactly when nu is one") {
  const auto sep = classify_scc(diag({-1, 1, 1}));
  REQUIRE(sep.has_value());
  CHECK(sep->normal.isApprox(Vector::Unit(3, 0), 1e-12));
  const Matrix basis = hyperplane_basis(sep->normal);
  CHECK(min_eigenvalue(restrict_to(diag({-1, 1, 1}), basis)) >= -1e-10);

  CHECK_FALSE(classify_scc(diag({-1, -1, 1})).has_value());
}

TEST_CASE("restrict_to congruence") {
  const Matrix u = hyperplane_basis(Vector::Unit(3, 0));
  CHECK(restrict_to(SymMatrix::Identity(3), u).mat().isIdentity(1e-12));
  CHECK(restrict_to(diag({-1, 1, 1}), u).mat().isApprox(Matrix::Identity(2, 2), 1e-12));

  Matrix skew(3, 2);
  skew << 1, 1, 0, 1, 0, 0;
  CHECK_THROWS_AS(restrict_to(SymMatrix::Identity(3), skew), std::invalid_argument);
}

TEST_CASE("hyperplane_basis contract") {
  const Matrix u = hyperplane_basis(Vector::Unit(3, 0));
  CHECK((Vector::Unit(3, 0).transpose() * u).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((u.transpose() * u - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);
  // complement of e1 is the span of e2, e3
  CHECK((u * u.transpose() -
         (Matrix::Identity(3, 3) - Vector::Unit(3, 0) * Vector::Unit(3, 0).transpose()))
            .cwiseAbs()
            .maxCoeff() < 1e-12);

  CounterRng rng(55, 7);
  for (int trial = 0; trial < 50; ++trial) {
    const int k = 2 + static_cast<int>(rng.next_u64() % 6);
    const Vector normal = rng.normal_vector(k);
    const Matrix basis = hyperplane_basis(normal);
    CHECK((normal.transpose() * basis).cwiseAbs().maxCoeff() < 1e-12 * normal.norm());
    CHECK((basis.transpose() * basis - Matrix::Identity(k - 1, k - 1)).cwiseAbs().maxCoeff() <
          1e-12);
  }
  CHECK_THROWS_AS(hyperplane_basis(Vector::Zero(3)), std::invalid_argument);
}

TEST_CASE("spectrum invariants over random matrices") {
  CounterRng rng(2024, 3);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 2 + static_cast<int>(rng.next_u64() % 29);
    const SymMatrix m = rng.random_symmetric(n, 1.0 + 10.0 * rng.uniform01());
    const Spectrum s = eigh(m);

    const Matrix rebuilt =
        s.eigenvectors * s.eigenvalues.asDiagonal() * s.eigenvectors.transpose();
    CHECK((rebuilt - m.mat()).norm() <= 1e-9 * std::max(1.0, m.frobenius_norm()));
    CHECK((s.eigenvectors.transpose() * s.eigenvectors - Matrix::Identity(n, n)).norm() <= 1e-9);

    // agreement with an independent solver
    Eigen::SelfAdjointEigenSolver<Matrix> reference(m.mat());
    const Vector ref = reference.eigenvalues().reverse();
    CHECK((s.eigenvalues - ref).cwiseAbs().maxCoeff() <=
          1e-9 * std::max(1.0, ref.cwiseAbs().maxCoeff()));

    // descending order
    for (int i = 0; i + 1 < n; ++i) CHECK(s.eigenvalues(i) >= s.eigenvalues(i + 1));
  }
}

TEST_CASE("eigh is deterministic") {
  CounterRng rng(77, 1);
  const SymMatrix m = rng.random_symmetric(9);
  const Spectrum a = eigh(m);
  const Spectrum b = eigh(m);
  CHECK(a.eigenvalues == b.eigenvalues);
  CHECK(a.eigenvectors == b.eigenvectors);
}

TEST_CASE("interlacing bounds the negative count of principal submatrices") {
  CounterRng rng(4242, 9);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 3 + static_cast<int>(rng.next_u64() % 18);
    const SymMatrix m = rng.random_symmetric(n);
    const int full = negative_eigenvalue_count(m);
    const int drop = static_cast<int>(rng.next_u64() % n);
    Matrix sub(n - 1, n - 1);
    int ri = 0;
    for (int i = 0; i < n; ++i) {
      if (i == drop) continue;
      int ci = 0;
      for (int j = 0; j < n; ++j) {
        if (j == drop) continue;
        sub(ri, ci++) = m(i, j);
      }
      ++ri;
    }
    CHECK(negative_eigenvalue_count(SymMatrix(sub)) <= full);
  }
}

TEST_CASE("classify_scc is sound on random one-negative-eigenvalue forms") {
  CounterRng rng(888, 12);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 3 + static_cast<int>(rng.next_u64() % 6);
    // random orthogonal frame via QR of a random matrix
    Matrix g(n, n);
    for (int i = 0; i < n; ++i) g.row(i) = rng.normal_vector(n).transpose();
    const Matrix q = Eigen::HouseholderQR<Matrix>(g).householderQ();
    Vector d(n);
    d(0) = -(0.1 + rng.uniform01());
    for (int i = 1; i < n; ++i) d(i) = 0.1 + rng.uniform01();
    const SymMatrix m(q * d.asDiagonal() * q.transpose());

    const auto sep = classify_scc(m);
    REQUIRE(sep.has_value());
    const double scale = std::max(1.0, d.cwiseAbs().maxCoeff());
    CHECK(min_eigenvalue(restrict_to(m, hyperplane_basis(sep->normal))) >= -1e-8 * scale);
  }
}

TEST_CASE("restriction preserves definite combinations") {
  // a found theta for the homogenized system stays definite after congruence
  const QuadSystem sys = [] {
    Matrix a1 = Matrix::Zero(3, 3);
    a1(0, 0) = a1(1, 1) = 1;
    Matrix a2 = -a1;
    Matrix a3 = Matrix::Zero(3, 3);
    a3(0, 0) = -1;
    a3(1, 1) = 1;
    a3(2, 2) = 1;
    Vector b3(3);
    b3 << 3, 0, 0;
    std::vector<QuadConstraint> cs;
    cs.emplace_back(SymMatrix(a1), Vector::Zero(3), -2.0, Sense::Strict);
    cs.emplace_back(SymMatrix(a2), Vector::Zero(3), 1.0, Sense::Strict);
    cs.emplace_back(SymMatrix(a3), b3, 0.0, Sense::Strict);
    return QuadSystem(3, cs);
  }();

  Matrix combo = Matrix::Zero(4, 4);
  const double theta[3] = {-12, -15, 1};
  for (int i = 0; i < 3; ++i) combo += theta[i] * homogenized_matrix(sys.constraints[i]).mat();
  REQUIRE(min_eigenvalue(SymMatrix(combo)) > 0.0);

  CounterRng rng(31, 4);
  for (int trial = 0; trial < 25; ++trial) {
    const Matrix basis = hyperplane_basis(rng.normal_vector(4));
    Matrix restricted = Matrix::Zero(3, 3);
    for (int i = 0; i < 3; ++i) {
      restricted +=
          theta[i] * restrict_to(homogenized_matrix(sys.constraints[i]), basis).mat();
    }
    CHECK(min_eigenvalue(SymMatrix(restricted)) > 0.0);
  }
}
