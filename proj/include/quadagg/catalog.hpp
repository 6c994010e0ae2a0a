#pragma once

#include "quadagg/config.hpp"
#include "quadagg/types.hpp"

#include <map>
#include <string>
#include <vector>

namespace quadagg {

/// Built-in worked instances, stored with the exact printed constants.
struct PaperInstance {
  std::string id;
  QuadSystem system;
  std::map<std::string, Vector> points;  // named reference points
};

extern const std::vector<std::string> kInstanceIds;

PaperInstance load_instance(const std::string& id);

struct Claim {
  std::string id;
  std::string expected;
  std::string computed;
  std::string tolerance;
  bool pass = false;
};

struct Report {
  std::string instance;
  std::vector<Claim> claims;

  bool all_pass() const {
    for (const auto& c : claims) {
      if (!c.pass) return false;
    }
    return true;
  }
};

std::string to_text(const Report& report);

/// Scripted per-instance reproduction: every numbered claim checked against
/// the machinery, with expected value, computed value, tolerance, verdict.
Report reproduce(const std::string& id, const RunConfig& config = {});

/// Boundedness chain for the four-constraint counterexample: the min
/// relaxation, the per-orthant sign matrices, the worst-case smallest
/// eigenvalue, and the bounding-box radius.
Report verify_fourquad_boundedness();

/// The aggregation bound (3-sqrt(11))/2 on x1, a sampled maximum against it,
/// and the explicit feasible moment matrix with objective 1/3.
Report verify_sdp_tightness_gap(const RunConfig& config = {});

/// The lambda^a family: nonnegativity, tight containment at (a, 1-a),
/// exclusion just outside, one-boundary-point-per-aggregation, and the dual
/// witness that rules out any definite combination.
Report verify_infinite_family(const std::vector<double>& a_grid, double eps,
                              const RunConfig& config = {});

}  // namespace quadagg
