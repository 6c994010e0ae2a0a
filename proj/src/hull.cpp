#include "quadagg/hull.hpp"

#include "quadagg/quadcore.hpp"
#include "quadagg/rng.hpp"
#include "quadagg/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace quadagg {

Box Box::cube(int n, double lo, double hi) {
  Box b;
  b.lo = Vector::Constant(n, lo);
  b.hi = Vector::Constant(n, hi);
  return b;
}

SampledHull sample_set(const QuadSystem& sys, const Box& box, int proposals,
                       std::uint64_t seed, double margin) {
  if (proposals < 1) throw std::invalid_argument("sample_set: count must be >= 1");
  if (box.lo.size() != sys.n || box.hi.size() != sys.n || !box.lo.allFinite() ||
      !box.hi.allFinite()) {
    throw std::invalid_argument("sample_set: box must be finite and match n");
  }
  SampledHull hull;
  hull.seed = seed;
  hull.margin = margin;
  CounterRng rng(seed, 0x73616d70ULL);
  for (int k = 0; k < proposals; ++k) {
    const Vector x = rng.uniform_vector(box.lo, box.hi);
    if (contains_point(sys, x, margin)) hull.points.push_back(x);
  }
  return hull;
}

namespace {

// Separating functional from a Farkas certificate of the combination LP:
// g(p) = u_coords . p + u_sum, nonnegative on the working set, negative at x.
double functional(const Vector& multipliers, const Vector& p) {
  const int n = static_cast<int>(p.size());
  double g = multipliers(n);
  for (int k = 0; k < n; ++k) g += multipliers(k) * p(k);
  return g;
}

Membership exact_membership_by_lp(const SampledHull& hull, const Vector& x);

}  // namespace

Membership hull_membership(const SampledHull& hull, const Vector& x) {
  if (hull.points.empty()) {
    throw std::invalid_argument("hull_membership: hull must be nonempty");
  }
  const int n = static_cast<int>(x.size());
  const int total = static_cast<int>(hull.points.size());
  const int cap = 16;

  std::vector<int> order(total);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return (hull.points[a] - x).squaredNorm() < (hull.points[b] - x).squaredNorm();
  });

  std::vector<int> working(order.begin(), order.begin() + std::min(cap, total));

  for (int round = 0; round < 200; ++round) {
    const int k = static_cast<int>(working.size());
    std::vector<LinearRow> rows;
    for (int coord = 0; coord < n; ++coord) {
      LinearRow r;
      r.coeffs = Vector(k);
      for (int j = 0; j < k; ++j) r.coeffs(j) = hull.points[working[j]](coord);
      r.sense = RowSense::Eq;
      r.rhs = x(coord);
      rows.push_back(r);
    }
    rows.push_back({Vector::Ones(k), RowSense::Eq, 1.0});

    const LinearFeasibility feas = solve_linear_feasibility(rows, VarBounds::nonnegative(k));
    if (feas.feasible()) return Membership::Inside;

    const Vector& u = feas.certificate->multipliers;
    double worst = 0.0;
    int entering = -1;
    for (int j = 0; j < total; ++j) {
      const double g = functional(u, hull.points[j]);
      if (g < worst) {
        worst = g;
        entering = j;
      }
    }
    double gscale = 1.0;
    for (int j : working) gscale = std::max(gscale, std::abs(functional(u, hull.points[j])));
    if (entering < 0 || worst >= -1e-9 * gscale) {
      return Membership::OutsideSampledHull;  // certificate holds for every sample
    }
    if (std::find(working.begin(), working.end(), entering) != working.end()) {
      break;  // no progress possible; decide exactly below
    }
    if (k >= cap) {
      // Drop the sample deepest on the valid side of the certificate.
      int dropPos = 0;
      double best = -std::numeric_limits<double>::infinity();
      for (int j = 0; j < k; ++j) {
        const double g = functional(u, hull.points[working[j]]);
        if (g > best) {
          best = g;
          dropPos = j;
        }
      }
      working.erase(working.begin() + dropPos);
    }
    working.push_back(entering);
  }
  return exact_membership_by_lp(hull, x);
}

std::optional<Hyperplane> best_separating_hyperplane(const SampledHull& hull,
                                                     const Vector& query) {
  if (hull.points.empty()) {
    throw std::invalid_argument("best_separating_hyperplane: hull must be nonempty");
  }
  const int n = static_cast<int>(query.size());
  const int total = static_cast<int>(hull.points.size());

  // Variables (alpha, beta, delta); maximize delta.
  VarBounds bounds;
  bounds.lo = Vector(n + 2);
  bounds.hi = Vector(n + 2);
  bounds.lo.head(n).setConstant(-1.0);
  bounds.hi.head(n).setConstant(1.0);
  bounds.lo(n) = -std::numeric_limits<double>::infinity();
  bounds.hi(n) = std::numeric_limits<double>::infinity();
  bounds.lo(n + 1) = 0.0;
  bounds.hi(n + 1) = 1e9;
  Vector objective = Vector::Zero(n + 2);
  objective(n + 1) = 1.0;

  auto sample_row = [&](int j) {
    LinearRow r;  // alpha . p - beta + delta <= 0
    r.coeffs = Vector(n + 2);
    r.coeffs.head(n) = hull.points[j];
    r.coeffs(n) = -1.0;
    r.coeffs(n + 1) = 1.0;
    r.sense = RowSense::Le;
    r.rhs = 0.0;
    return r;
  };

  // Seed the active set with coordinate extremes.
  std::vector<int> active;
  auto add_unique = [&](int j) {
    if (std::find(active.begin(), active.end(), j) == active.end()) active.push_back(j);
  };
  for (int coord = 0; coord < n; ++coord) {
    int lo = 0, hi = 0;
    for (int j = 1; j < total; ++j) {
      if (hull.points[j](coord) < hull.points[lo](coord)) lo = j;
      if (hull.points[j](coord) > hull.points[hi](coord)) hi = j;
    }
    add_unique(lo);
    add_unique(hi);
  }

  LinearRow queryRow;  // -alpha . q + beta + delta <= 0
  queryRow.coeffs = Vector(n + 2);
  queryRow.coeffs.head(n) = -query;
  queryRow.coeffs(n) = 1.0;
  queryRow.coeffs(n + 1) = 1.0;
  queryRow.sense = RowSense::Le;
  queryRow.rhs = 0.0;

  Hyperplane plane;
  for (int round = 0; round < 300; ++round) {
    std::vector<LinearRow> rows;
    rows.push_back(queryRow);
    for (int j : active) rows.push_back(sample_row(j));
    const LpOutcome lp = lp_maximize(objective, rows, bounds);
    if (lp.status != LpOutcome::Status::Optimal) {
      throw NumericalError("best_separating_hyperplane: margin LP failed");
    }
    plane.alpha = lp.x.head(n);
    plane.beta = lp.x(n);
    plane.gap = lp.x(n + 1);

    // Most violated sample row under the incumbent plane.
    int entering = -1;
    double worst = 1e-12;
    for (int j = 0; j < total; ++j) {
      const double v = plane.alpha.dot(hull.points[j]) - plane.beta + plane.gap;
      if (v > worst) {
        worst = v;
        entering = j;
      }
    }
    if (entering < 0) break;
    if (std::find(active.begin(), active.end(), entering) != active.end()) break;
    active.push_back(entering);
  }

  if (plane.gap <= 1e-9) return std::nullopt;
  return plane;
}

namespace {

SeparationOutcome separate_impl(const QuadSystem& sys, const Vector& query,
                                const Vector& alpha, double beta, const SampledHull& hull,
                                int grid) {
  if (sys.m() != 3) {
    throw std::invalid_argument("separate: exactly three constraints required");
  }
  if (query.size() != sys.n || alpha.size() != sys.n) {
    throw std::invalid_argument("separate: dimension mismatch");
  }
  if (alpha.norm() == 0.0) throw std::invalid_argument("separate: alpha must be nonzero");
  const double side = alpha.dot(query) - beta;
  if (side < -1e-12 * std::max(1.0, std::abs(beta))) {
    throw std::invalid_argument("separate: query must satisfy alpha'query >= beta");
  }

  // H = {alpha'x = beta x_{n+1}} as the complement of the lifted normal.
  Vector normal(sys.n + 1);
  normal.head(sys.n) = alpha;
  normal(sys.n) = -beta;
  const Matrix basis = hyperplane_basis(normal);

  std::vector<SymMatrix> restricted;
  restricted.reserve(3);
  for (const auto& q : sys.constraints) {
    restricted.push_back(restrict_to(homogenized_matrix(q), basis));
  }
  const auto combo = find_psd_combination(restricted[0], restricted[1], restricted[2], grid);
  if (!combo) {
    return NoAggregation{"no PSD combination of the restricted forms at this resolution"};
  }

  Weights lambda(combo->lambda, false);
  const QuadConstraint agg = aggregate(sys, lambda);

  SeparationCertificate cert;
  cert.alpha = alpha;
  cert.beta = beta;
  cert.lambda = lambda;

  const double atQuery = evaluate(agg, query);
  double queryScale = 1.0;
  for (int i = 0; i < 3; ++i) {
    queryScale += combo->lambda(i) * std::abs(evaluate(sys.constraints[i], query));
  }
  cert.checks.excludes_query = atQuery >= -1e-9 * queryScale;
  cert.checks.nu_at_most_one = nu(agg) <= 1;

  cert.checks.contains_samples = true;
  for (const Vector& p : hull.points) {
    double pointScale = 1.0;
    for (int i = 0; i < 3; ++i) {
      pointScale += combo->lambda(i) * std::abs(evaluate(sys.constraints[i], p));
    }
    if (evaluate(agg, p) > 1e-9 * pointScale) {
      cert.checks.contains_samples = false;
      break;
    }
  }

  if (!cert.checks.all()) {
    std::string why = "combination found but checks failed:";
    if (!cert.checks.excludes_query) why += " query-not-excluded";
    if (!cert.checks.nu_at_most_one) why += " nu-exceeds-one";
    if (!cert.checks.contains_samples) why += " sample-escapes-aggregation";
    return NoAggregation{why};
  }
  return cert;
}

Membership exact_membership_by_lp(const SampledHull& hull, const Vector& x) {
  // Fallback decision through the max-margin dual: x lies in the sampled hull
  // exactly when no hyperplane separates it from the samples.
  SampledHull h = hull;
  const auto plane = best_separating_hyperplane(h, x);
  return plane ? Membership::OutsideSampledHull : Membership::Inside;
}

}  // namespace

SeparationOutcome separate(const QuadSystem& sys, const Vector& query, const Vector& alpha,
                           double beta, const SampledHull& hull, int grid) {
  if (sys.sense() != Sense::Strict) {
    throw std::invalid_argument("separate: open-case oracle requires a strict system");
  }
  return separate_impl(sys, query, alpha, beta, hull, grid);
}

SeparationOutcome closed_separate(const QuadSystem& sys, const Vector& query,
                                  const Vector& alpha, double beta, const SampledHull& hull,
                                  int grid) {
  if (sys.sense() != Sense::Nonstrict) {
    throw std::invalid_argument("closed_separate: nonstrict system required");
  }
  if (hull.points.empty()) {
    return NoAggregation{
        "empty interior sample: the no-low-dimensional-components hypothesis cannot be "
        "verified for this instance"};
  }
  for (const Vector& p : hull.points) {
    bool interior = true;
    for (const auto& q : sys.constraints) interior &= evaluate(q, p) <= -1e-6;
    if (!interior) {
      return NoAggregation{"hull point is not interior at margin 1e-6"};
    }
  }
  return separate_impl(sys, query, alpha, beta, hull, grid);
}

bool intersect_aggregations(const QuadSystem& sys, const std::vector<Weights>& lambdas,
                            const Vector& x, double margin) {
  for (const auto& w : lambdas) {
    const QuadConstraint agg = aggregate(sys, w);
    const double v = evaluate(agg, x);
    if (agg.sense == Sense::Strict ? !(v < -margin) : !(v <= margin)) return false;
  }
  return true;
}

}  // namespace quadagg
