#include "quadagg/sdprank.hpp"

#include "quadagg/rng.hpp"
#include "quadagg/spectral.hpp"

#include <algorithm>
#include <cmath>

namespace quadagg {

namespace {

Matrix clip_to_psd(const Matrix& x) {
  const Spectrum s = eigh(SymMatrix(x));
  const int n = static_cast<int>(x.rows());
  Matrix out = Matrix::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    if (s.eigenvalues(k) > 0.0) {
      out += s.eigenvalues(k) * s.eigenvectors.col(k) * s.eigenvectors.col(k).transpose();
    }
  }
  return 0.5 * (out + out.transpose());
}

// Least-squares step onto the active affine constraints.
Matrix project_affine(const Matrix& x, const AffineSdpProblem& p, int passes = 4) {
  Matrix y = x;
  const int m = static_cast<int>(p.constraints.size());
  for (int pass = 0; pass < passes; ++pass) {
    std::vector<int> active;
    for (int i = 0; i < m; ++i) {
      const double v = (p.constraints[i].Q.mat().array() * y.array()).sum();
      if (p.constraints[i].sense == SdpSense::Eq || v > p.constraints[i].target) {
        active.push_back(i);
      }
    }
    if (active.empty()) break;
    const int k = static_cast<int>(active.size());
    Matrix gram(k, k);
    Vector resid(k);
    for (int a = 0; a < k; ++a) {
      resid(a) = p.constraints[active[a]].target -
                 (p.constraints[active[a]].Q.mat().array() * y.array()).sum();
      for (int b = 0; b < k; ++b) {
        gram(a, b) = p.constraints[active[a]].Q.inner(p.constraints[active[b]].Q);
      }
    }
    const Vector mu = gram.completeOrthogonalDecomposition().solve(resid);
    for (int a = 0; a < k; ++a) y += mu(a) * p.constraints[active[a]].Q.mat();
    y = 0.5 * (y + y.transpose());
    bool equalitiesOnly = true;
    for (int i : active) equalitiesOnly &= p.constraints[i].sense == SdpSense::Eq;
    if (equalitiesOnly) break;
  }
  return y;
}

Vector residual_vector(const Matrix& x, const AffineSdpProblem& p) {
  Vector r(static_cast<int>(p.constraints.size()));
  for (size_t i = 0; i < p.constraints.size(); ++i) {
    const double v = (p.constraints[i].Q.mat().array() * x.array()).sum();
    const double gap = v - p.constraints[i].target;
    r(static_cast<int>(i)) = p.constraints[i].sense == SdpSense::Eq ? gap : std::max(0.0, gap);
  }
  return r;
}

double problem_scale(const Matrix& x, const AffineSdpProblem& p) {
  double s = std::max(1.0, x.norm());
  for (const auto& c : p.constraints) s = std::max(s, std::abs(c.target));
  return s;
}

int numerical_rank(const Spectrum& s) {
  const double top = s.eigenvalues.size() ? s.eigenvalues.cwiseAbs().maxCoeff() : 0.0;
  if (top <= 0.0) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < s.eigenvalues.size(); ++i) {
    if (s.eigenvalues(i) > 1e-7 * top) ++r;
  }
  return r;
}

PsdSolution package(const Matrix& x, const AffineSdpProblem& p) {
  PsdSolution sol;
  sol.X = SymMatrix(x);
  sol.residuals = residual_vector(x, p);
  sol.rank = numerical_rank(eigh(sol.X));
  return sol;
}

// Underdetermined Gauss-Newton for x'Q_i x = eps_i with least-norm steps.
std::optional<Vector> quadratic_newton(const std::vector<SymMatrix>& qs, const Vector& eps,
                                       Vector x, int iters = 120) {
  const int m = static_cast<int>(qs.size());
  const double scale = std::max(1.0, eps.cwiseAbs().maxCoeff());
  for (int it = 0; it < iters; ++it) {
    Vector f(m);
    for (int i = 0; i < m; ++i) f(i) = qs[i].quad(x) - eps(i);
    if (f.cwiseAbs().maxCoeff() <= 1e-10 * scale) return x;
    Matrix jac(m, x.size());
    for (int i = 0; i < m; ++i) jac.row(i) = 2.0 * (qs[i].mat() * x).transpose();
    const Matrix jjt = jac * jac.transpose();
    Eigen::FullPivLU<Matrix> lu(jjt);
    if (!lu.isInvertible()) return std::nullopt;
    const Vector d = jac.transpose() * lu.solve(-f);
    double stepSize = 1.0;
    bool moved = false;
    const double f0 = f.norm();
    for (int trial = 0; trial < 40; ++trial) {
      const Vector xn = x + stepSize * d;
      Vector fn(m);
      for (int i = 0; i < m; ++i) fn(i) = qs[i].quad(xn) - eps(i);
      if (fn.norm() < f0) {
        x = xn;
        moved = true;
        break;
      }
      stepSize *= 0.5;
    }
    if (!moved) return std::nullopt;
  }
  return std::nullopt;
}

// Rank-1 polish: when the direction search stalls (three constraints fill
// sym(2)), solve x'Q_i x = eps_i directly, seeding from rotations of the
// current two-dimensional factor.
std::optional<Vector> rank_one_polish(const Matrix& x, const AffineSdpProblem& p,
                                      std::uint64_t seed) {
  std::vector<SymMatrix> qs;
  Vector eps(static_cast<int>(p.constraints.size()));
  for (size_t i = 0; i < p.constraints.size(); ++i) {
    qs.push_back(p.constraints[i].Q);
    eps(static_cast<int>(i)) = p.constraints[i].target;
  }
  const Spectrum s = eigh(SymMatrix(x));
  const int n = static_cast<int>(x.rows());
  const Vector top = s.eigenvectors.col(0) * std::sqrt(std::max(0.0, s.eigenvalues(0)));
  Vector second = Vector::Zero(n);
  if (n > 1 && s.eigenvalues(1) > 0.0) {
    second = s.eigenvectors.col(1) * std::sqrt(s.eigenvalues(1));
  }

  std::vector<Vector> starts;
  for (int k = 0; k <= 16; ++k) {
    const double phi = M_PI * k / 16.0;
    starts.push_back(std::cos(phi) * top + std::sin(phi) * second);
  }
  CounterRng rng(seed, 0x72616e6bULL);
  for (int k = 0; k < 12; ++k) starts.push_back(rng.normal_vector(n));

  for (const Vector& x0 : starts) {
    if (x0.norm() < 1e-12) continue;
    if (auto sol = quadratic_newton(qs, eps, x0)) return sol;
  }
  return std::nullopt;
}

}  // namespace

std::optional<PsdSolution> solve_feasible_psd(const AffineSdpProblem& p, const SdpOptions& opts) {
  if (p.constraints.empty() || p.constraints.size() > 8) {
    throw std::invalid_argument("solve_feasible_psd: between 1 and 8 constraints");
  }
  for (const auto& c : p.constraints) {
    if (c.Q.order() != p.order) {
      throw std::invalid_argument("solve_feasible_psd: constraint order mismatch");
    }
  }

  CounterRng rng(opts.seed, 0x73647066ULL);
  Matrix x = Matrix::Identity(p.order, p.order);
  if (opts.seed != 0) {
    x += 0.05 * rng.random_symmetric(p.order).mat();
    x = clip_to_psd(x);
  }

  double bestGap = std::numeric_limits<double>::infinity();
  int sinceImprovement = 0;
  for (int it = 0; it < opts.max_iterations; ++it) {
    const Matrix affine = project_affine(x, p);
    const Matrix psd = clip_to_psd(affine);
    const Vector resid = residual_vector(psd, p);
    const double scale = problem_scale(psd, p);
    const double gap = resid.cwiseAbs().maxCoeff();
    if (gap <= opts.residual_tol * scale) {
      return package(psd, p);
    }
    if (gap < bestGap * (1.0 - 1e-6)) {
      bestGap = gap;
      sinceImprovement = 0;
    } else if (++sinceImprovement > 2000 && gap > 1e-6 * scale) {
      return std::nullopt;  // stalled: infeasible at tolerance
    }
    // over-relaxed alternating step
    x = psd + 0.6 * (psd - x);
  }
  return std::nullopt;
}

RankReduceResult rank_reduce(const PsdSolution& start, const AffineSdpProblem& p,
                             int target_rank, const SdpOptions& opts) {
  for (const auto& c : p.constraints) {
    if (c.sense != SdpSense::Eq) {
      throw std::invalid_argument("rank_reduce: equality constraints only");
    }
  }
  const int m = static_cast<int>(p.constraints.size());

  RankReduceResult result;
  Matrix x = start.X.mat();
  result.steps = 0;
  double previousResidual = residual_vector(x, p).cwiseAbs().maxCoeff();
  auto record_step = [&](const Matrix& moved) {
    const double now = residual_vector(moved, p).cwiseAbs().maxCoeff();
    result.max_step_drift = std::max(result.max_step_drift, now - previousResidual);
    previousResidual = now;
    ++result.steps;
  };

  for (int guard = 0; guard < 4 * p.order + 8; ++guard) {
    const Spectrum s = eigh(SymMatrix(x));
    const int r = numerical_rank(s);
    if (r <= target_rank) {
      result.solution = package(x, p);
      return result;
    }

    // Factor X = V V' over the numerically positive eigenspace.
    Matrix v(p.order, r);
    for (int k = 0; k < r; ++k) {
      v.col(k) = s.eigenvectors.col(k) * std::sqrt(s.eigenvalues(k));
    }

    // Null direction of Delta -> (<V'Q_i V, Delta>)_i over sym(r).
    const int dim = r * (r + 1) / 2;
    Matrix map(m, dim);
    std::vector<Matrix> gs(m);
    for (int i = 0; i < m; ++i) gs[i] = v.transpose() * p.constraints[i].Q.mat() * v;
    int col = 0;
    for (int a = 0; a < r; ++a) {
      for (int b = a; b < r; ++b) {
        for (int i = 0; i < m; ++i) {
          map(i, col) = a == b ? gs[i](a, a) : gs[i](a, b) + gs[i](b, a);
        }
        ++col;
      }
    }
    const Spectrum ns = eigh(SymMatrix(map.transpose() * map));
    const double sigmaTop = std::sqrt(std::max(0.0, ns.eigenvalues(0)));
    const double sigmaMin = std::sqrt(std::max(0.0, ns.eigenvalues(dim - 1)));
    std::optional<Vector> nullvec;
    if (dim > m || sigmaMin <= 1e-10 * std::max(1.0, sigmaTop)) {
      nullvec = ns.eigenvectors.col(dim - 1);
    }

    if (nullvec) {
      Matrix delta = Matrix::Zero(r, r);
      col = 0;
      for (int a = 0; a < r; ++a) {
        for (int b = a; b < r; ++b) {
          delta(a, b) = (*nullvec)(col);
          delta(b, a) = (*nullvec)(col);
          ++col;
        }
      }
      const Spectrum ds = eigh(SymMatrix(delta));
      const double dmax = ds.eigenvalues(0);
      const double dmin = ds.eigenvalues(r - 1);
      double t = 0.0;
      bool haveStep = false;
      if (dmax > 1e-12 && dmin < -1e-12) {
        // Reach the nearer boundary; ties go to the positive side.
        t = dmax >= -dmin ? -1.0 / dmax : -1.0 / dmin;
        if (std::abs(dmax + dmin) <= 1e-12 * std::max(dmax, -dmin)) t = -1.0 / dmin;
        haveStep = true;
      } else if (dmax > 1e-12) {
        t = -1.0 / dmax;
        haveStep = true;
      } else if (dmin < -1e-12) {
        t = -1.0 / dmin;
        haveStep = true;
      }
      if (haveStep) {
        const Matrix core = Matrix::Identity(r, r) + t * delta;
        x = clip_to_psd(v * core * v.transpose());
        record_step(x);
        continue;
      }
    }

    // Direction search exhausted above the target: try the rank-1 polish.
    if (target_rank <= 1) {
      if (auto point = rank_one_polish(x, p, opts.seed)) {
        x = (*point) * point->transpose();
        record_step(x);
        result.solution = package(x, p);
        return result;
      }
    }
    result.solution = package(x, p);
    result.stuck_at_rank = r;
    return result;
  }

  result.solution = package(x, p);
  result.stuck_at_rank = result.solution.rank;
  return result;
}

std::variant<Vector, PsdCombination> extract_strict_point(const SymMatrix& q1,
                                                          const SymMatrix& q2,
                                                          const SymMatrix& q3,
                                                          const SearchOptions& opts) {
  if (q1.order() != q2.order() || q1.order() != q3.order()) {
    throw std::invalid_argument("extract_strict_point: matrix orders must match");
  }
  const int n = q1.order();
  double scale = 1.0;
  for (const SymMatrix* q : {&q1, &q2, &q3}) {
    scale = std::max(scale, q->mat().cwiseAbs().maxCoeff() * n);
  }
  auto verified = [&](const Vector& x) {
    return q1.quad(x) < -1e-9 * scale && q2.quad(x) < -1e-9 * scale &&
           q3.quad(x) < -1e-9 * scale;
  };
  auto normalized = [&](Vector x) {
    const double mild = std::min({-q1.quad(x), -q2.quad(x), -q3.quad(x)});
    if (mild > 0.0) x *= std::sqrt(1.0 / mild);  // push every value to <= -1
    return x;
  };

  // Forward direction of the dichotomy: a PSD combination blocks any strict
  // point, so search the simplex first.
  const int grid = std::max(opts.grid, 64);
  const PsdCombination best = max_simplex_combination(q1, q2, q3, grid);
  if (best.margin >= -1e-8 * scale) return best;

  // SDP route: X >= 0 with <Q_i, X> <= -1, then pin the achieved values as
  // equalities and reduce the rank to one.
  AffineSdpProblem primal;
  primal.order = n;
  primal.constraints.push_back({q1, -1.0, SdpSense::Le});
  primal.constraints.push_back({q2, -1.0, SdpSense::Le});
  primal.constraints.push_back({q3, -1.0, SdpSense::Le});
  SdpOptions sopts;
  sopts.max_iterations = opts.sdp_iterations;
  sopts.seed = opts.seed;

  if (auto feasible = solve_feasible_psd(primal, sopts)) {
    AffineSdpProblem pinned;
    pinned.order = n;
    pinned.constraints.push_back({q1, feasible->X.inner(q1), SdpSense::Eq});
    pinned.constraints.push_back({q2, feasible->X.inner(q2), SdpSense::Eq});
    pinned.constraints.push_back({q3, feasible->X.inner(q3), SdpSense::Eq});
    const RankReduceResult reduced = rank_reduce(*feasible, pinned, 1, sopts);
    if (!reduced.stuck_at_rank && reduced.solution.rank <= 1) {
      const Spectrum s = eigh(reduced.solution.X);
      Vector x = s.eigenvectors.col(0) * std::sqrt(std::max(0.0, s.eigenvalues(0)));
      if (verified(x)) return normalized(x);
    }
  }

  // Minimax fallback: the simplex maximum equals the sphere minimax of the
  // three forms, so the bottom eigenvector of the optimal combination
  // satisfies every active form at the (negative) optimal value.
  {
    const SymMatrix combo(best.lambda(0) * q1.mat() + best.lambda(1) * q2.mat() +
                          best.lambda(2) * q3.mat());
    const Spectrum s = eigh(combo);
    const Vector x = s.eigenvectors.col(n - 1);
    if (verified(x)) return normalized(x);
  }

  // Last resort: seeded random descent on the worst normalized form value.
  CounterRng rng(opts.seed, 0x657874ULL);
  auto worstValue = [&](const Vector& x) {
    const double nrm = x.squaredNorm();
    return std::max({q1.quad(x), q2.quad(x), q3.quad(x)}) / nrm;
  };
  for (int attempt = 0; attempt < 64; ++attempt) {
    Vector x = rng.normal_vector(n).normalized();
    double fx = worstValue(x);
    double step = 0.5;
    for (int it = 0; it < 4000 && step > 1e-10; ++it) {
      Vector cand = (x + step * rng.normal_vector(n)).normalized();
      const double fc = worstValue(cand);
      if (fc < fx) {
        x = cand;
        fx = fc;
      } else {
        step *= 0.995;
      }
    }
    if (verified(x)) return normalized(x);
  }

  throw NumericalError(
      "extract_strict_point: no PSD combination at tolerance, yet the strict-point stages "
      "(SDP feasibility, rank reduction, minimax eigenvector, random descent) all failed");
}

}  // namespace quadagg
