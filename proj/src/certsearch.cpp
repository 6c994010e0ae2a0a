#include "quadagg/certsearch.hpp"

#include "quadagg/quadcore.hpp"
#include "quadagg/sdprank.hpp"
#include "quadagg/spectral.hpp"

#include <cmath>

namespace quadagg {

namespace {

double combined_scale(const SymMatrix& a, const SymMatrix& b, const SymMatrix& c) {
  double s = 1.0;
  for (const SymMatrix* m : {&a, &b, &c}) {
    s = std::max(s, m->mat().cwiseAbs().maxCoeff() * m->order());
  }
  return s;
}

Vector sphere_point(double polar, double azimuth) {
  Vector t(3);
  t << std::sin(polar) * std::cos(azimuth), std::sin(polar) * std::sin(azimuth),
      std::cos(polar);
  return t;
}

}  // namespace

PdlcOutcome check_pdlc(const SymMatrix& m1, const SymMatrix& m2, const SymMatrix& m3,
                       const SearchOptions& opts) {
  if (m1.order() != m2.order() || m1.order() != m3.order()) {
    throw std::invalid_argument("check_pdlc: matrix orders must match");
  }
  const double scale = combined_scale(m1, m2, m3);
  auto value = [&](double polar, double azimuth) {
    const Vector t = sphere_point(polar, azimuth);
    return min_eigenvalue(SymMatrix(t(0) * m1.mat() + t(1) * m2.mat() + t(2) * m3.mat()));
  };

  const int nu_steps = std::max(4, opts.grid);
  const int nv_steps = 2 * nu_steps;
  double bestPolar = 0.0, bestAzimuth = 0.0, best = -std::numeric_limits<double>::infinity();
  for (int iu = 0; iu <= nu_steps; ++iu) {
    const double polar = M_PI * iu / nu_steps;
    for (int iv = 0; iv < nv_steps; ++iv) {
      const double azimuth = 2.0 * M_PI * iv / nv_steps;
      const double m = value(polar, azimuth);
      if (m > best) {
        best = m;
        bestPolar = polar;
        bestAzimuth = azimuth;
      }
    }
  }

  // Coordinate-wise golden-section refinement down to 1e-6 in angle.
  const double golden = 0.6180339887498948482;
  double spanPolar = M_PI / nu_steps;
  double spanAzimuth = 2.0 * M_PI / nv_steps;
  for (int round = 0; round < 60 && (spanPolar > 1e-6 || spanAzimuth > 1e-6); ++round) {
    {
      double a = bestPolar - spanPolar, b = bestPolar + spanPolar;
      while (b - a > 1e-7) {
        const double x1 = b - golden * (b - a);
        const double x2 = a + golden * (b - a);
        if (value(x1, bestAzimuth) >= value(x2, bestAzimuth)) {
          b = x2;
        } else {
          a = x1;
        }
      }
      bestPolar = 0.5 * (a + b);
    }
    {
      double a = bestAzimuth - spanAzimuth, b = bestAzimuth + spanAzimuth;
      while (b - a > 1e-7) {
        const double x1 = b - golden * (b - a);
        const double x2 = a + golden * (b - a);
        if (value(bestPolar, x1) >= value(bestPolar, x2)) {
          b = x2;
        } else {
          a = x1;
        }
      }
      bestAzimuth = 0.5 * (a + b);
    }
    spanPolar *= 0.5;
    spanAzimuth *= 0.5;
  }

  const double refined = value(bestPolar, bestAzimuth);
  if (refined > best) best = refined;
  if (best > 1e-8 * scale) {
    const Vector theta = sphere_point(bestPolar, bestAzimuth);
    PdlcWitness w;
    w.theta = theta;
    w.margin = value(bestPolar, bestAzimuth);
    return w;
  }

  // No definite combination surfaced; look for the weak-duality witness
  // W >= 0, <W, M_i> = 0, <W, I> = 1.
  AffineSdpProblem dual;
  dual.order = m1.order();
  dual.constraints.push_back({m1, 0.0, SdpSense::Eq});
  dual.constraints.push_back({m2, 0.0, SdpSense::Eq});
  dual.constraints.push_back({m3, 0.0, SdpSense::Eq});
  dual.constraints.push_back({SymMatrix::Identity(m1.order()), 1.0, SdpSense::Eq});
  SdpOptions sopts;
  sopts.max_iterations = opts.sdp_iterations;
  sopts.seed = opts.seed;
  sopts.residual_tol = 1e-9;  // the witness invariant is 1e-8 relative
  if (auto sol = solve_feasible_psd(dual, sopts)) {
    if (verify_dual_witness(m1, m2, m3, sol->X)) {
      DualWitness w;
      w.W = sol->X;
      w.inner_products = Vector(3);
      w.inner_products << sol->X.inner(m1), sol->X.inner(m2), sol->X.inner(m3);
      w.trace = sol->X.mat().trace();
      return w;
    }
  }
  return NoWitness{"grid maximum nonpositive and dual feasibility stalled; inconclusive at this resolution"};
}

PsdCombination max_simplex_combination(const SymMatrix& q1, const SymMatrix& q2,
                                       const SymMatrix& q3, int grid) {
  if (q1.order() != q2.order() || q1.order() != q3.order()) {
    throw std::invalid_argument("max_simplex_combination: matrix orders must match");
  }
  auto value = [&](const Vector& lam) {
    return min_eigenvalue(SymMatrix(lam(0) * q1.mat() + lam(1) * q2.mat() + lam(2) * q3.mat()));
  };

  const int steps = std::max(2, grid);
  Vector bestLam(3);
  double best = -std::numeric_limits<double>::infinity();
  for (int i = 0; i <= steps; ++i) {
    for (int j = 0; j <= steps - i; ++j) {
      Vector lam(3);
      lam << double(i) / steps, double(j) / steps, double(steps - i - j) / steps;
      const double m = value(lam);
      if (m > best) {
        best = m;
        bestLam = lam;
      }
    }
  }

  // lambda_min of the pencil is concave in lambda, so moves toward the
  // simplex vertices with shrinking step converge to the global maximum.
  double step = 1.0 / steps;
  while (step > 1e-12) {
    bool improved = false;
    for (int v = 0; v < 3; ++v) {
      for (double sign : {1.0, -1.0}) {
        Vector vertex = Vector::Zero(3);
        vertex(v) = 1.0;
        Vector cand = bestLam + sign * step * (vertex - bestLam);
        if (cand.minCoeff() < 0.0) continue;
        const double total = cand.sum();
        if (total <= 0.0) continue;
        cand /= total;
        const double m = value(cand);
        if (m > best) {
          best = m;
          bestLam = cand;
          improved = true;
        }
      }
    }
    if (!improved) step *= 0.5;
  }

  PsdCombination out;
  out.lambda = bestLam;
  out.margin = best;
  return out;
}

std::optional<PsdCombination> find_psd_combination(const SymMatrix& q1, const SymMatrix& q2,
                                                   const SymMatrix& q3, int grid) {
  const PsdCombination best = max_simplex_combination(q1, q2, q3, grid);
  const double scale = combined_scale(q1, q2, q3);
  if (best.margin >= -1e-8 * scale) return best;
  return std::nullopt;
}

bool verify_dual_witness(const SymMatrix& m1, const SymMatrix& m2, const SymMatrix& m3,
                         const SymMatrix& w) {
  if (w.order() != m1.order() || m1.order() != m2.order() || m1.order() != m3.order()) {
    return false;
  }
  if (!is_psd(w, 1e-8)) return false;
  const double tr = w.mat().trace();
  if (!(tr > 0.0) || tr > 1.0 + 1e-8) return false;
  for (const SymMatrix* m : {&m1, &m2, &m3}) {
    const double scale = std::max(1.0, m->frobenius_norm() * w.frobenius_norm());
    if (std::abs(w.inner(*m)) > 1e-8 * scale) return false;
  }
  return true;
}

std::variant<Weights, FarkasCertificate> find_excluding_aggregation(const QuadSystem& sys,
                                                                    const Vector& keep,
                                                                    const Vector& exclude) {
  if (keep.size() != sys.n || exclude.size() != sys.n) {
    throw std::invalid_argument("find_excluding_aggregation: point dimension mismatch");
  }
  const int m = sys.m();
  Vector atExclude(m), atKeep(m);
  for (int i = 0; i < m; ++i) {
    atExclude(i) = evaluate(sys.constraints[i], exclude);
    atKeep(i) = evaluate(sys.constraints[i], keep);
  }

  std::vector<LinearRow> rows;
  rows.push_back({atExclude, RowSense::Ge, 0.0});
  rows.push_back({atKeep, RowSense::Lt, 0.0});
  rows.push_back({Vector::Ones(m), RowSense::Eq, 1.0});

  const LinearFeasibility feas = solve_linear_feasibility(rows, VarBounds::nonnegative(m));
  if (feas.feasible()) {
    Vector lam = feas.point->cwiseMax(0.0);
    return Weights(lam, false);
  }
  return *feas.certificate;
}

}  // namespace quadagg
