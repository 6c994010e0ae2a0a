#pragma once

#include "quadagg/types.hpp"

#include <optional>

namespace quadagg {

enum class RowSense { Lt, Gt, Eq, Ge, Le };

/// coeffs' x  (sense)  rhs
struct LinearRow {
  Vector coeffs;
  RowSense sense = RowSense::Le;
  double rhs = 0.0;
};

/// Per-variable bounds; entries may be +/-infinity.
struct VarBounds {
  Vector lo;
  Vector hi;

  static VarBounds free(int n);
  static VarBounds nonnegative(int n);
};

/// Sense-respecting multipliers whose aggregation is visibly contradictory:
/// the aggregated row demands less than the smallest value its left-hand side
/// can take over the variable box.
struct FarkasCertificate {
  Vector multipliers;     // one per input row; >=0 on <=/< rows, <=0 on >=/> rows
  Vector derived_coeffs;  // aggregated left-hand side over the variables
  double derived_rhs = 0.0;
  bool derived_strict = false;  // aggregation carries weight on a strict row
};

struct LinearFeasibility {
  std::optional<Vector> point;
  std::optional<FarkasCertificate> certificate;
  bool feasible() const { return point.has_value(); }
};

/// Feasibility of a small linear system (micro scale, <= 16 variables).
/// Strict rows are enforced through an auxiliary gap variable that a bounded
/// simplex maximizes; a strict row holds only if the gap exceeds 1e-9.
/// Infeasible systems come back with a verified FarkasCertificate.
LinearFeasibility solve_linear_feasibility(const std::vector<LinearRow>& rows,
                                           const std::optional<VarBounds>& box = std::nullopt);

/// Recomputes the certificate's aggregation from the raw rows and checks the
/// contradiction by direct arithmetic.
bool verify_farkas(const std::vector<LinearRow>& rows, const std::optional<VarBounds>& box,
                   const FarkasCertificate& cert, double tol = 1e-9);

struct LpOutcome {
  enum class Status { Optimal, Infeasible, Unbounded };
  Status status = Status::Infeasible;
  Vector x;
  double value = 0.0;
  std::optional<FarkasCertificate> certificate;
};

/// max objective' x subject to rows and bounds (strict senses treated as
/// nonstrict here; feasibility-level strictness belongs to the caller).
LpOutcome lp_maximize(const Vector& objective, const std::vector<LinearRow>& rows,
                      const VarBounds& bounds);

}  // namespace quadagg
