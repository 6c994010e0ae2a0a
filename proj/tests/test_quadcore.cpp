#include "quadagg/quadcore.hpp"

#include "quadagg/catalog.hpp"
#include "quadagg/rng.hpp"
#include "quadagg/spectral.hpp"

#include <doctest.h>

using namespace quadagg;

namespace {

QuadSystem example1() { return load_instance("example1-open").system; }

Vector v3(double a, double b, double c) {
  Vector v(3);
  v << a, b, c;
  return v;
}

}  // namespace

TEST_CASE("evaluate matches the closed forms") {
  const QuadSystem sys = example1();
  CHECK(evaluate(sys.constraints[0], Vector::Zero(3)) == -2.0);

  // any constraint at the origin returns its constant term
  CHECK(evaluate(sys.constraints[1], Vector::Zero(3)) == 1.0);
  CHECK(evaluate(sys.constraints[2], Vector::Zero(3)) == 0.0);

  // aggregation (0,1,1) at (-0.1, 0, 0): -2 x1^2 + x3^2 + 6 x1 + 1
  const QuadConstraint agg = aggregate(sys, Weights(v3(0, 1, 1), false));
  const double x1 = -0.1;
  const double byHand = -2.0 * x1 * x1 + 0.0 + 6.0 * x1 + 1.0;
  CHECK(evaluate(agg, v3(-0.1, 0, 0)) == doctest::Approx(0.38).epsilon(0).scale(1).epsilon(1e-12));
  CHECK(evaluate(agg, v3(-0.1, 0, 0)) == doctest::Approx(byHand).epsilon(1e-15));

  CHECK_THROWS_AS(evaluate(sys.constraints[0], Vector::Zero(2)), std::invalid_argument);
}

TEST_CASE("homogenized_matrix block structure") {
  const QuadSystem sys = example1();
  const SymMatrix m3 = homogenized_matrix(sys.constraints[2]);
  CHECK(m3.order() == 4);
  CHECK(m3.mat().topLeftCorner(3, 3) == sys.constraints[2].A.mat());
  CHECK(m3(0, 3) == 3.0);
  CHECK(m3(1, 3) == 0.0);
  CHECK(m3(2, 3) == 0.0);
  CHECK(m3(3, 3) == 0.0);

  const QuadConstraint constant(SymMatrix::Zero(2), Vector::Zero(2), 1.0, Sense::Strict);
  const SymMatrix mc = homogenized_matrix(constant);
  CHECK(mc.mat() == (Matrix(3, 3) << 0, 0, 0, 0, 0, 0, 0, 0, 1).finished());

  // stripping the border recovers A, b, c exactly
  for (const auto& q : sys.constraints) {
    const SymMatrix h = homogenized_matrix(q);
    CHECK(h.mat().topLeftCorner(3, 3) == q.A.mat());
    CHECK(h.mat().col(3).head(3) == q.b);
    CHECK(h(3, 3) == q.c);
  }
}

TEST_CASE("aggregate reproduces the printed combinations") {
  const QuadSystem sys = example1();

  const QuadConstraint agg = aggregate(sys, Weights(v3(0, 1, 1), false));
  CHECK(agg.A.mat() == (Matrix(3, 3) << -2, 0, 0, 0, 0, 0, 0, 0, 1).finished());
  CHECK(agg.b == v3(3, 0, 0));
  CHECK(agg.c == 1.0);

  const QuadConstraint same = aggregate(sys, Weights(v3(1, 0, 0), false));
  CHECK(same.A.mat() == sys.constraints[0].A.mat());
  CHECK(same.b == sys.constraints[0].b);
  CHECK(same.c == sys.constraints[0].c);

  // lambda^{1/2} = (1/4, 1/4, 3/4) on the infinite-aggregation instance
  const QuadSystem ex4 = load_instance("infinite-agg").system;
  const QuadConstraint ga =
      aggregate(ex4, Weights((Vector(3) << 0.25, 0.25, 0.75).finished(), false));
  CHECK(ga.A.mat() == (Matrix(2, 2) << -0.5, 0, 0, -0.5).finished());
  CHECK(ga.b == (Vector(2) << 0.75, 0.75).finished());  // 2 b'x = 1.5 (x1 + x2)
  CHECK(ga.c == -1.25);

  CHECK_THROWS_AS(Weights(Vector::Zero(3), false), std::invalid_argument);
  CHECK_THROWS_AS(aggregate(sys, Weights(Vector::Ones(2), false)), std::invalid_argument);
}

TEST_CASE("nu counts negative eigenvalues of the A block") {
  const QuadSystem sys = example1();
  CHECK(nu(sys.constraints[0]) == 0);
  CHECK(nu(sys.constraints[2]) == 1);
  CHECK(nu(QuadConstraint(SymMatrix::Zero(4), Vector::Zero(4), 0.0, Sense::Strict)) == 0);

  const QuadConstraint agg = aggregate(sys, Weights(v3(0, 1, 1), false));
  CHECK(nu(agg) == 1);
  CHECK_THROWS_AS(nu(agg, 0.0), std::invalid_argument);
}

TEST_CASE("contains_point is sense- and margin-aware") {
  const QuadSystem fourquad = load_instance("fourquad").system;
  const Vector xt1 = v3(1.207, 1.207, -1.2655);
  CHECK(contains_point(fourquad, xt1, 1e-9));

  const QuadSystem sys = example1();
  CHECK_FALSE(contains_point(sys, v3(2, 0, 0), 1e-9));   // constraint 1 gives +2
  CHECK_FALSE(contains_point(sys, Vector::Zero(3), 1e-9));  // values (-2, 1, 0)

  // nonstrict variant admits the zero boundary value
  const QuadSystem closed = load_instance("example1-closed").system;
  Vector boundary = v3(std::sqrt(2.0), 0, 0);
  CHECK(evaluate(closed.constraints[0], boundary) <= 1e-9);
}

TEST_CASE("bilinearity of aggregation") {
  CounterRng rng(991, 1);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + static_cast<int>(rng.next_u64() % 4);
    const int m = 1 + static_cast<int>(rng.next_u64() % 4);
    std::vector<QuadConstraint> cs;
    for (int i = 0; i < m; ++i) {
      cs.emplace_back(rng.random_symmetric(n), rng.normal_vector(n), rng.normal(), Sense::Strict);
    }
    const QuadSystem sys(n, cs);
    Vector lam(m);
    for (int i = 0; i < m; ++i) lam(i) = rng.uniform01() + 1e-3;
    const Vector x = rng.normal_vector(n);

    const double left = evaluate(aggregate(sys, Weights(lam, false)), x);
    double right = 0.0;
    for (int i = 0; i < m; ++i) right += lam(i) * evaluate(sys.constraints[i], x);
    CHECK(left == doctest::Approx(right).epsilon(1e-10));
  }
}

TEST_CASE("homogenization consistency") {
  CounterRng rng(992, 1);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + static_cast<int>(rng.next_u64() % 5);
    const QuadConstraint q(rng.random_symmetric(n), rng.normal_vector(n), rng.normal(),
                           Sense::Strict);
    const Vector x = rng.normal_vector(n);
    Vector lifted(n + 1);
    lifted.head(n) = x;
    lifted(n) = 1.0;
    const double direct = evaluate(q, x);
    const double viaBlock = homogenized_matrix(q).quad(lifted);
    CHECK(direct == doctest::Approx(viaBlock).epsilon(1e-12));
  }
}

TEST_CASE("aggregations contain the base set") {
  CounterRng rng(993, 1);
  const QuadSystem sys = example1();
  Vector lam(3);
  for (int trial = 0; trial < 20; ++trial) {
    for (int i = 0; i < 3; ++i) lam(i) = rng.uniform01();
    if (lam.sum() == 0.0) continue;
    const Weights w(lam, false);
    const QuadConstraint agg = aggregate(sys, w);
    int found = 0;
    for (int draws = 0; draws < 20000 && found < 1000; ++draws) {
      const Vector x = rng.uniform_vector(Vector::Constant(3, -3.0), Vector::Constant(3, 3.0));
      if (!contains_point(sys, x, 1e-9)) continue;
      ++found;
      CHECK(evaluate(agg, x) < 0.0);
    }
    CHECK(found > 0);
  }
}
