#include "quadagg/linear.hpp"

#include "quadagg/rng.hpp"

#include <doctest.h>

using namespace quadagg;

namespace {

LinearRow row1(double coeff, RowSense sense, double rhs) {
  LinearRow r;
  r.coeffs = Vector::Constant(1, coeff);
  r.sense = sense;
  r.rhs = rhs;
  return r;
}

}  // namespace

TEST_CASE("x >= 0 and x <= -1 is infeasible with a zero-row certificate") {
  std::vector<LinearRow> rows{row1(1, RowSense::Ge, 0), row1(1, RowSense::Le, -1)};
  const auto out = solve_linear_feasibility(rows);
  REQUIRE_FALSE(out.feasible());
  REQUIRE(out.certificate.has_value());
  CHECK(verify_farkas(rows, std::nullopt, *out.certificate));
  // the aggregation collapses to 0 <= negative
  CHECK(out.certificate->derived_coeffs.cwiseAbs().maxCoeff() < 1e-9);
  CHECK(out.certificate->derived_rhs < -1e-9);
  // sense-respecting multipliers: <= row nonnegative, >= row nonpositive
  CHECK(out.certificate->multipliers(0) <= 1e-12);
  CHECK(out.certificate->multipliers(1) >= -1e-12);
}

TEST_CASE("strict two-sided interval returns the centered point") {
  std::vector<LinearRow> rows{row1(1, RowSense::Gt, 0), row1(1, RowSense::Lt, 1)};
  const auto out = solve_linear_feasibility(rows);
  REQUIRE(out.feasible());
  CHECK((*out.point)(0) == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("equality pair pins the point") {
  std::vector<LinearRow> rows;
  rows.push_back({(Vector(2) << 1, 1).finished(), RowSense::Eq, 1.0});
  rows.push_back({(Vector(2) << 1, -1).finished(), RowSense::Eq, 0.0});
  const auto out = solve_linear_feasibility(rows);
  REQUIRE(out.feasible());
  CHECK((*out.point)(0) == doctest::Approx(0.5).epsilon(1e-9));
  CHECK((*out.point)(1) == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("the printed four-constraint system is infeasible with the published weights") {
  std::vector<LinearRow> rows;
  rows.push_back({(Vector(4) << 0.3051, -3.0576, 1.4559, 1.4559).finished(), RowSense::Lt, 0.0});
  rows.push_back({(Vector(4) << -16.0, -160.0, 72.5, 72.5).finished(), RowSense::Gt, 0.0});
  rows.push_back({Vector::Ones(4), RowSense::Eq, 1.0});
  const auto out = solve_linear_feasibility(rows, VarBounds::nonnegative(4));
  REQUIRE_FALSE(out.feasible());
  const FarkasCertificate& cert = *out.certificate;
  CHECK(verify_farkas(rows, VarBounds::nonnegative(4), cert));

  // normalize so the aggregated lambda_1 coefficient is one
  const double d1 = cert.derived_coeffs(0);
  REQUIRE(std::abs(d1) > 1e-12);
  const Vector w = cert.multipliers / d1;
  CHECK(std::abs(w(0) - 1.7629) < 1e-2);
  CHECK(std::abs(w(1) - (-0.0342)) < 1e-2);
  CHECK(std::abs(w(2) - (-0.0854)) < 1e-2);
  CHECK(std::abs(cert.derived_rhs / d1 - (-0.08544)) < 5e-3);
}

TEST_CASE("lp_maximize solves small bounded programs") {
  {
    VarBounds box;
    box.lo = Vector::Zero(1);
    box.hi = Vector::Constant(1, 10.0);
    std::vector<LinearRow> rows{row1(1, RowSense::Le, 3)};
    const LpOutcome out = lp_maximize(Vector::Ones(1), rows, box);
    REQUIRE(out.status == LpOutcome::Status::Optimal);
    CHECK(out.value == doctest::Approx(3.0).epsilon(1e-9));
  }
  {
    const LpOutcome out = lp_maximize(Vector::Ones(1), {}, VarBounds::free(1));
    CHECK(out.status == LpOutcome::Status::Unbounded);
  }
  {
    VarBounds box;
    box.lo = Vector::Zero(2);
    box.hi = (Vector(2) << 1.0, 2.0).finished();
    std::vector<LinearRow> rows;
    rows.push_back({(Vector(2) << 1, 1).finished(), RowSense::Le, 2.5});
    const LpOutcome out = lp_maximize(Vector::Ones(2), rows, box);
    REQUIRE(out.status == LpOutcome::Status::Optimal);
    CHECK(out.value == doctest::Approx(2.5).epsilon(1e-9));
  }
}

TEST_CASE("random planted-infeasible systems always certify") {
  CounterRng rng(606, 2);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + static_cast<int>(rng.next_u64() % 5);
    const Vector a = rng.normal_vector(n);
    std::vector<LinearRow> rows;
    rows.push_back({a, RowSense::Le, -1.0});
    rows.push_back({-a, RowSense::Le, -1.0});  // sums to 0 <= -2
    for (int extra = 0; extra < 3; ++extra) {
      rows.push_back({rng.normal_vector(n), RowSense::Le, 1.0 + rng.uniform01()});
    }
    const auto out = solve_linear_feasibility(rows);
    REQUIRE_FALSE(out.feasible());
    CHECK(verify_farkas(rows, std::nullopt, *out.certificate));
  }
}

TEST_CASE("verify_farkas rejects corrupted certificates") {
  std::vector<LinearRow> rows{row1(1, RowSense::Ge, 0), row1(1, RowSense::Le, -1)};
  const auto out = solve_linear_feasibility(rows);
  FarkasCertificate bad = *out.certificate;
  bad.derived_rhs = 1.0;
  CHECK_FALSE(verify_farkas(rows, std::nullopt, bad));
  FarkasCertificate wrongSign = *out.certificate;
  wrongSign.multipliers(0) = 1.0;  // >= row must carry a nonpositive weight
  CHECK_FALSE(verify_farkas(rows, std::nullopt, wrongSign));
}

TEST_CASE("feasible systems with many redundant rows") {
  CounterRng rng(607, 2);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + static_cast<int>(rng.next_u64() % 3);
    const Vector center = rng.normal_vector(n);
    std::vector<LinearRow> rows;
    for (int k = 0; k < 12; ++k) {
      const Vector dir = rng.normal_vector(n);
      rows.push_back({dir, RowSense::Le, dir.dot(center) + 0.5 + rng.uniform01()});
    }
    const auto out = solve_linear_feasibility(rows);
    REQUIRE(out.feasible());
    for (const auto& r : rows) {
      CHECK(r.coeffs.dot(*out.point) <= r.rhs + 1e-7);
    }
  }
}
