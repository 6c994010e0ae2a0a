#pragma once

#include "quadagg/certsearch.hpp"
#include "quadagg/types.hpp"

#include <optional>
#include <variant>

namespace quadagg {

enum class SdpSense { Eq, Le };

struct SdpConstraint {
  SymMatrix Q;
  double target = 0.0;
  SdpSense sense = SdpSense::Eq;
};

/// Feasibility problem over the PSD cone cut by a few affine constraints.
struct AffineSdpProblem {
  int order = 0;
  std::vector<SdpConstraint> constraints;  // at most 8
};

struct PsdSolution {
  SymMatrix X;
  Vector residuals;
  int rank = 0;
};

struct SdpOptions {
  int max_iterations = 50000;
  double residual_tol = 1e-7;  // relative to max(1, ||X||, |targets|)
  std::uint64_t seed = 0;
};

/// Alternating projections between the PSD cone (eigenvalue clipping) and the
/// affine constraint set (Gram least squares), with over-relaxation. Returns
/// nullopt when the gap stalls above tolerance for the iteration budget.
std::optional<PsdSolution> solve_feasible_psd(const AffineSdpProblem& p,
                                              const SdpOptions& opts = {});

struct RankReduceResult {
  PsdSolution solution;
  std::optional<int> stuck_at_rank;  // set when the target rank was not reached
  int steps = 0;
  double max_step_drift = 0.0;  // largest per-step growth of any residual
};

/// Walks X along feasibility-preserving directions V Delta V' to the boundary
/// of the PSD cone, dropping rank each move; a Gauss-Newton polish closes the
/// final rank-2 to rank-1 gap that the direction search alone cannot cross
/// when three constraints pin the 3-dimensional sym(2) space.
RankReduceResult rank_reduce(const PsdSolution& start, const AffineSdpProblem& p,
                             int target_rank, const SdpOptions& opts = {});

/// Constructive side of the three-form dichotomy under a definite
/// combination: either a point with all three forms strictly negative, or
/// nonnegative multipliers whose combination is PSD. Every returned point is
/// re-verified; failures raise NumericalError naming the stage.
std::variant<Vector, PsdCombination> extract_strict_point(const SymMatrix& q1,
                                                          const SymMatrix& q2,
                                                          const SymMatrix& q3,
                                                          const SearchOptions& opts = {});

}  // namespace quadagg
