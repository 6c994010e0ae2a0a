#pragma once

#include "quadagg/certsearch.hpp"
#include "quadagg/types.hpp"

#include <optional>
#include <variant>

namespace quadagg {

struct Box {
  Vector lo;
  Vector hi;

  static Box cube(int n, double lo, double hi);
};

/// Inner approximation of the feasible set: accepted rejection samples, all
/// re-checkable against the system at the stored margin.
struct SampledHull {
  std::vector<Vector> points;
  std::uint64_t seed = 0;
  double margin = 1e-9;
};

/// Uniform rejection sampling of `proposals` points in the box; deterministic
/// for a fixed seed. An empty result is a valid outcome.
SampledHull sample_set(const QuadSystem& sys, const Box& box, int proposals,
                       std::uint64_t seed, double margin = 1e-9);

enum class Membership { Inside, OutsideSampledHull };

/// Convex-combination feasibility over the sampled points, solved through the
/// micro LP with column generation over nearest samples. "Inside" is
/// conclusive; "OutsideSampledHull" only reports that the sample misses x.
Membership hull_membership(const SampledHull& hull, const Vector& x);

struct SeparationChecks {
  bool excludes_query = false;
  bool nu_at_most_one = false;
  bool contains_samples = false;
  bool all() const { return excludes_query && nu_at_most_one && contains_samples; }
};

struct SeparationCertificate {
  Vector alpha;
  double beta = 0.0;
  Weights lambda;
  SeparationChecks checks;
};

struct NoAggregation {
  std::string diagnostics;
};

using SeparationOutcome = std::variant<SeparationCertificate, NoAggregation>;

/// Homogenizes the hyperplane alpha'x = beta, restricts the three homogenized
/// constraint matrices to it, and searches for a PSD combination of the
/// restrictions; the certificate is returned only after the exclusion, the
/// negative-eigenvalue bound, and sample containment all re-verify.
SeparationOutcome separate(const QuadSystem& sys, const Vector& query, const Vector& alpha,
                           double beta, const SampledHull& hull, int grid = 256);

/// Nonstrict variant; the hull must approximate the interior (every stored
/// point is re-validated at strict margin 1e-6), mirroring the closed-case
/// route through the interior's convex hull.
SeparationOutcome closed_separate(const QuadSystem& sys, const Vector& query,
                                  const Vector& alpha, double beta, const SampledHull& hull,
                                  int grid = 256);

struct Hyperplane {
  Vector alpha;
  double beta = 0.0;
  double gap = 0.0;
};

/// Maximum-margin separation of the query from the sampled points
/// (row generation over the samples; ||alpha||_inf <= 1). Returns nullopt
/// when the best achievable gap is below 1e-9 (query inside).
std::optional<Hyperplane> best_separating_hyperplane(const SampledHull& hull,
                                                     const Vector& query);

/// x in S_lambda for every listed weight vector (empty list: true).
bool intersect_aggregations(const QuadSystem& sys, const std::vector<Weights>& lambdas,
                            const Vector& x, double margin = 1e-9);

}  // namespace quadagg
