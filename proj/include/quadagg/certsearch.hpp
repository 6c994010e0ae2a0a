#pragma once

#include "quadagg/linear.hpp"
#include "quadagg/types.hpp"

#include <optional>
#include <variant>

namespace quadagg {

/// Signed multipliers of a positive definite combination, normalized to the
/// unit sphere; margin is lambda_min of the combination at that theta.
struct PdlcWitness {
  Vector theta;
  double margin = 0.0;
};

/// PSD matrix orthogonal to all three input matrices with positive trace;
/// by weak duality its existence rules out any definite combination.
struct DualWitness {
  SymMatrix W;
  Vector inner_products;
  double trace = 0.0;
};

/// Simplex-normalized nonnegative multipliers whose combination is PSD at
/// tolerance; margin is lambda_min of the combination.
struct PsdCombination {
  Vector lambda;
  double margin = 0.0;
};

struct NoWitness {
  std::string diagnostics;
};

using PdlcOutcome = std::variant<PdlcWitness, DualWitness, NoWitness>;

struct SearchOptions {
  int grid = 64;              // sphere polar resolution / simplex subdivisions
  std::uint64_t seed = 0;     // subsolver initialization
  int sdp_iterations = 50000;
};

/// Maximizes lambda_min over the theta sphere by grid plus coordinate-wise
/// golden-section refinement. A positive maximum certifies the definite
/// combination; otherwise a dual witness is attempted through the SDP
/// feasibility solver, and failing both the outcome is inconclusive.
PdlcOutcome check_pdlc(const SymMatrix& m1, const SymMatrix& m2, const SymMatrix& m3,
                       const SearchOptions& opts = {});

/// Maximizes lambda_min over the multiplier simplex (grid default 1/256 plus
/// edge refinement; the objective is concave on the simplex).
std::optional<PsdCombination> find_psd_combination(const SymMatrix& q1, const SymMatrix& q2,
                                                   const SymMatrix& q3, int grid = 256);

/// Best simplex point and its lambda_min value even when negative.
/// find_psd_combination thresholds this at -1e-8 * scale.
PsdCombination max_simplex_combination(const SymMatrix& q1, const SymMatrix& q2,
                                       const SymMatrix& q3, int grid = 256);

bool verify_dual_witness(const SymMatrix& m1, const SymMatrix& m2, const SymMatrix& m3,
                         const SymMatrix& w);

/// Searches lambda >= 0, sum 1, with the excluded point outside S_lambda and
/// the kept point inside; infeasibility comes back as a Farkas certificate.
std::variant<Weights, FarkasCertificate> find_excluding_aggregation(const QuadSystem& sys,
                                                                    const Vector& keep,
                                                                    const Vector& exclude);

}  // namespace quadagg
