#include "quadagg/linear.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace quadagg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPivotTol = 1e-11;
constexpr double kRedCostTol = 1e-10;
constexpr int kMaxPivots = 20000;

bool is_strict(RowSense s) { return s == RowSense::Lt || s == RowSense::Gt; }
bool is_upper(RowSense s) { return s == RowSense::Lt || s == RowSense::Le; }
bool is_lower(RowSense s) { return s == RowSense::Gt || s == RowSense::Ge; }

// min c'z  s.t.  A z = b, z >= 0, solved by a dense two-phase tableau simplex
// with Bland's rule. On infeasibility exposes y with y'A <= 0, y'b > 0.
struct StandardSimplex {
  Matrix a;  // m x n
  Vector b;  // m
  Vector c;  // n

  enum class Status { Optimal, Infeasible, Unbounded };
  Status status = Status::Infeasible;
  Vector z;
  double objective = 0.0;
  Vector y;  // duals (Optimal) or Farkas multipliers (Infeasible)

  void solve() {
    const int m = static_cast<int>(a.rows());
    const int n = static_cast<int>(a.cols());

    Vector sigma = Vector::Ones(m);
    for (int i = 0; i < m; ++i) {
      if (b(i) < 0.0) sigma(i) = -1.0;
    }

    // Tableau over [x columns | artificial columns | rhs].
    Matrix t(m, n + m + 1);
    for (int i = 0; i < m; ++i) {
      t.row(i).head(n) = sigma(i) * a.row(i);
      t.row(i).segment(n, m).setZero();
      t(i, n + i) = 1.0;
      t(i, n + m) = sigma(i) * b(i);
    }
    std::vector<int> basis(m);
    for (int i = 0; i < m; ++i) basis[i] = n + i;

    // Phase-1 objective row: minimize the sum of artificials.
    Vector obj = Vector::Zero(n + m);
    double objRhs = 0.0;
    auto load_objective = [&](const Vector& cost) {
      for (int j = 0; j < n + m; ++j) {
        double r = cost(j);
        for (int i = 0; i < m; ++i) r -= cost(basis[i]) * t(i, j);
        obj(j) = r;
      }
      objRhs = 0.0;
      for (int i = 0; i < m; ++i) objRhs += cost(basis[i]) * t(i, n + m);
    };

    auto pivot = [&](int row, int col) {
      t.row(row) /= t(row, col);
      for (int i = 0; i < m; ++i) {
        if (i != row && t(i, col) != 0.0) t.row(i) -= t(i, col) * t.row(row);
      }
      objRhs += obj(col) * t(row, n + m);
      obj -= obj(col) * t.row(row).head(n + m).transpose();
      basis[row] = col;
    };

    auto run = [&](bool allowArtificialEnter) -> bool {
      for (int iter = 0; iter < kMaxPivots; ++iter) {
        int enter = -1;
        const int limit = allowArtificialEnter ? n + m : n;
        for (int j = 0; j < limit; ++j) {
          if (obj(j) < -kRedCostTol) {
            enter = j;
            break;  // Bland: smallest index
          }
        }
        if (enter < 0) return true;
        int leave = -1;
        double best = kInf;
        for (int i = 0; i < m; ++i) {
          if (t(i, enter) > kPivotTol) {
            const double ratio = t(i, n + m) / t(i, enter);
            if (ratio < best - 1e-12 ||
                (ratio < best + 1e-12 && (leave < 0 || basis[i] < basis[leave]))) {
              best = ratio;
              leave = i;
            }
          }
        }
        if (leave < 0) return false;  // unbounded in the entering direction
        pivot(leave, enter);
      }
      throw NumericalError("simplex: pivot limit exceeded");
    };

    Vector phase1cost = Vector::Zero(n + m);
    phase1cost.segment(n, m).setOnes();
    load_objective(phase1cost);
    run(false);

    const double scale1 = std::max(1.0, b.cwiseAbs().maxCoeff());
    if (objRhs > 1e-9 * scale1) {
      status = Status::Infeasible;
      y = Vector(m);
      for (int i = 0; i < m; ++i) y(i) = sigma(i) * (1.0 - obj(n + i));
      return;
    }

    // Drive leftover artificials out of the basis where possible.
    for (int i = 0; i < m; ++i) {
      if (basis[i] >= n) {
        for (int j = 0; j < n; ++j) {
          if (std::abs(t(i, j)) > 1e-8) {
            pivot(i, j);
            break;
          }
        }
      }
    }

    Vector phase2cost = Vector::Zero(n + m);
    phase2cost.head(n) = c;
    load_objective(phase2cost);
    if (!run(false)) {
      status = Status::Unbounded;
      return;
    }

    status = Status::Optimal;
    z = Vector::Zero(n);
    for (int i = 0; i < m; ++i) {
      if (basis[i] < n) z(basis[i]) = t(i, n + m);
    }
    objective = c.dot(z);
    y = Vector(m);
    for (int i = 0; i < m; ++i) y(i) = sigma(i) * (0.0 - obj(n + i));
  }
};

// Translation of (rows, bounds, objective) into standard form and back.
struct Translator {
  const std::vector<LinearRow>& rows;
  VarBounds bounds;
  int nv;

  // per-variable column mapping
  enum class Kind { Shifted, Negated, Split };
  struct VarMap {
    Kind kind;
    int col;  // first column (Split uses col and col+1)
    double offset;
  };
  std::vector<VarMap> vmap;
  std::vector<int> twoSidedRows;  // extra rows z_j <= hi-lo, in order of creation
  int cols = 0;

  explicit Translator(const std::vector<LinearRow>& rows_, const VarBounds& bounds_)
      : rows(rows_), bounds(bounds_), nv(static_cast<int>(bounds_.lo.size())) {}

  StandardSimplex build(const Vector& objective) {
    const int mo = static_cast<int>(rows.size());
    vmap.clear();
    twoSidedRows.clear();

    std::vector<double> extraRowRhs;
    for (int j = 0; j < nv; ++j) {
      const double lo = bounds.lo(j), hi = bounds.hi(j);
      if (std::isfinite(lo)) {
        vmap.push_back({Kind::Shifted, cols, lo});
        cols += 1;
        if (std::isfinite(hi)) {
          twoSidedRows.push_back(j);
          extraRowRhs.push_back(hi - lo);
        }
      } else if (std::isfinite(hi)) {
        vmap.push_back({Kind::Negated, cols, hi});
        cols += 1;
      } else {
        vmap.push_back({Kind::Split, cols, 0.0});
        cols += 2;
      }
    }

    const int mb = static_cast<int>(twoSidedRows.size());
    int slacks = mb;  // each bound row takes one slack
    for (const auto& r : rows) {
      if (r.sense != RowSense::Eq) ++slacks;
    }

    StandardSimplex s;
    const int m = mo + mb;
    const int n = cols + slacks;
    s.a = Matrix::Zero(m, n);
    s.b = Vector::Zero(m);
    s.c = Vector::Zero(n);

    auto put = [&](int row, int var, double coef) {
      const VarMap& vm = vmap[var];
      switch (vm.kind) {
        case Kind::Shifted:
          s.a(row, vm.col) += coef;
          s.b(row) -= coef * vm.offset;
          break;
        case Kind::Negated:
          s.a(row, vm.col) -= coef;
          s.b(row) -= coef * vm.offset;
          break;
        case Kind::Split:
          s.a(row, vm.col) += coef;
          s.a(row, vm.col + 1) -= coef;
          break;
      }
    };

    int slack = cols;
    for (int i = 0; i < mo; ++i) {
      s.b(i) += rows[i].rhs;
      for (int j = 0; j < nv; ++j) put(i, j, rows[i].coeffs(j));
      if (is_upper(rows[i].sense)) s.a(i, slack++) = 1.0;
      if (is_lower(rows[i].sense)) s.a(i, slack++) = -1.0;
    }
    for (int k = 0; k < mb; ++k) {
      const int row = mo + k;
      const VarMap& vm = vmap[twoSidedRows[k]];
      s.a(row, vm.col) = 1.0;
      s.a(row, slack++) = 1.0;
      s.b(row) = extraRowRhs[k];
    }

    // Objective (maximize): standard form minimizes, constants from shifts are
    // reapplied when the point is mapped back.
    for (int j = 0; j < nv; ++j) {
      const VarMap& vm = vmap[j];
      switch (vm.kind) {
        case Kind::Shifted:
          s.c(vm.col) -= objective(j);
          break;
        case Kind::Negated:
          s.c(vm.col) += objective(j);
          break;
        case Kind::Split:
          s.c(vm.col) -= objective(j);
          s.c(vm.col + 1) += objective(j);
          break;
      }
    }
    return s;
  }

  Vector map_back(const Vector& z) const {
    Vector v(nv);
    for (int j = 0; j < nv; ++j) {
      const VarMap& vm = vmap[j];
      switch (vm.kind) {
        case Kind::Shifted:
          v(j) = vm.offset + z(vm.col);
          break;
        case Kind::Negated:
          v(j) = vm.offset - z(vm.col);
          break;
        case Kind::Split:
          v(j) = z(vm.col) - z(vm.col + 1);
          break;
      }
    }
    return v;
  }
};

FarkasCertificate make_certificate(const std::vector<LinearRow>& rows, const Vector& w) {
  FarkasCertificate cert;
  cert.multipliers = w;
  const int nv = static_cast<int>(rows.front().coeffs.size());
  cert.derived_coeffs = Vector::Zero(nv);
  cert.derived_rhs = 0.0;
  cert.derived_strict = false;
  for (size_t i = 0; i < rows.size(); ++i) {
    cert.derived_coeffs += w(static_cast<int>(i)) * rows[i].coeffs;
    cert.derived_rhs += w(static_cast<int>(i)) * rows[i].rhs;
    if (is_strict(rows[i].sense) && std::abs(w(static_cast<int>(i))) > 1e-12) {
      cert.derived_strict = true;
    }
  }
  return cert;
}

// Least value of the derived left-hand side over the box (-inf if unbounded).
double box_min(const Vector& coeffs, const VarBounds& box) {
  double s = 0.0;
  for (Eigen::Index j = 0; j < coeffs.size(); ++j) {
    const double d = coeffs(j);
    if (std::abs(d) <= 1e-13) continue;
    const double edge = d > 0.0 ? box.lo(j) : box.hi(j);
    if (!std::isfinite(edge)) return -kInf;
    s += d * edge;
  }
  return s;
}

bool multipliers_respect_senses(const std::vector<LinearRow>& rows, const Vector& w,
                                double tol) {
  for (size_t i = 0; i < rows.size(); ++i) {
    const double wi = w(static_cast<int>(i));
    if (is_upper(rows[i].sense) && wi < -tol) return false;
    if (is_lower(rows[i].sense) && wi > tol) return false;
  }
  return true;
}

// Canonical certificates: prefer an aggregation whose left-hand side is a
// single coordinate (forced sign violation) or vanishes (0 <= negative).
std::optional<FarkasCertificate> canonical_certificate(const std::vector<LinearRow>& rows,
                                                       const VarBounds& box);

}  // namespace

VarBounds VarBounds::free(int n) {
  VarBounds b;
  b.lo = Vector::Constant(n, -kInf);
  b.hi = Vector::Constant(n, kInf);
  return b;
}

VarBounds VarBounds::nonnegative(int n) {
  VarBounds b;
  b.lo = Vector::Zero(n);
  b.hi = Vector::Constant(n, kInf);
  return b;
}

bool verify_farkas(const std::vector<LinearRow>& rows, const std::optional<VarBounds>& box,
                   const FarkasCertificate& cert, double tol) {
  if (rows.empty() || cert.multipliers.size() != static_cast<Eigen::Index>(rows.size())) {
    return false;
  }
  const int nv = static_cast<int>(rows.front().coeffs.size());
  const VarBounds bounds = box.value_or(VarBounds::free(nv));

  double scale = 1.0;
  for (const auto& r : rows) scale = std::max(scale, r.coeffs.cwiseAbs().maxCoeff());
  scale = std::max(scale, cert.multipliers.cwiseAbs().maxCoeff());

  if (!multipliers_respect_senses(rows, cert.multipliers, tol * scale)) return false;

  Vector d = Vector::Zero(nv);
  double rhs = 0.0;
  for (size_t i = 0; i < rows.size(); ++i) {
    d += cert.multipliers(static_cast<int>(i)) * rows[i].coeffs;
    rhs += cert.multipliers(static_cast<int>(i)) * rows[i].rhs;
  }
  if ((d - cert.derived_coeffs).cwiseAbs().maxCoeff() > tol * scale) return false;
  if (std::abs(rhs - cert.derived_rhs) > tol * scale) return false;

  const double lowest = box_min(d, bounds);
  if (!std::isfinite(lowest)) return false;
  return cert.derived_strict ? lowest >= rhs - tol * scale : lowest > rhs + tol * scale;
}

LpOutcome lp_maximize(const Vector& objective, const std::vector<LinearRow>& rows,
                      const VarBounds& bounds) {
  LpOutcome out;
  const int nv = static_cast<int>(bounds.lo.size());
  if (rows.empty()) {
    // Only box constraints; optimum sits at a box corner if finite.
    out.x = Vector(nv);
    for (int j = 0; j < nv; ++j) {
      const double edge = objective(j) >= 0 ? bounds.hi(j) : bounds.lo(j);
      if (objective(j) != 0.0 && !std::isfinite(edge)) {
        out.status = LpOutcome::Status::Unbounded;
        return out;
      }
      out.x(j) = std::isfinite(edge) ? edge
                                     : (std::isfinite(bounds.lo(j)) ? bounds.lo(j)
                                                                    : std::min(bounds.hi(j), 0.0));
      if (!std::isfinite(out.x(j))) out.x(j) = 0.0;
    }
    out.status = LpOutcome::Status::Optimal;
    out.value = objective.dot(out.x);
    return out;
  }

  Translator tr(rows, bounds);
  StandardSimplex s = tr.build(objective);
  s.solve();

  switch (s.status) {
    case StandardSimplex::Status::Optimal: {
      out.status = LpOutcome::Status::Optimal;
      out.x = tr.map_back(s.z);
      out.value = objective.dot(out.x);
      break;
    }
    case StandardSimplex::Status::Unbounded:
      out.status = LpOutcome::Status::Unbounded;
      break;
    case StandardSimplex::Status::Infeasible: {
      out.status = LpOutcome::Status::Infeasible;
      // Multipliers for the caller's rows sit in the leading block; flip to
      // the aggregation convention (>=0 on upper rows).
      Vector w = -s.y.head(static_cast<int>(rows.size()));
      FarkasCertificate cert = make_certificate(rows, w);
      std::optional<VarBounds> box = bounds;
      if (auto canon = canonical_certificate(rows, bounds)) {
        out.certificate = *canon;
      } else if (verify_farkas(rows, box, cert)) {
        out.certificate = cert;
      } else {
        throw NumericalError("lp_maximize: infeasible but certificate failed verification");
      }
      break;
    }
  }
  return out;
}

namespace {

std::optional<FarkasCertificate> canonical_certificate(const std::vector<LinearRow>& rows,
                                                       const VarBounds& box) {
  const int mo = static_cast<int>(rows.size());
  const int nv = static_cast<int>(rows.front().coeffs.size());
  if (mo > 16) return std::nullopt;  // stay micro

  // Preferred presentations: a derived row supported on one sign-constrained
  // coordinate ("forced sign violation"), then the all-zero row
  // ("0 <= negative"). The scale is pinned by aggregated rhs = -1; the
  // supported coordinate keeps a free nonnegative magnitude.
  std::vector<int> targets;
  for (int j = 0; j < nv; ++j) {
    if (box.lo(j) == 0.0 && !std::isfinite(box.hi(j))) targets.push_back(j);
  }
  targets.push_back(-1);  // all-zero derived row

  for (int target : targets) {
    std::vector<LinearRow> sys;
    for (int k = 0; k < nv; ++k) {
      LinearRow r;
      r.coeffs = Vector(mo);
      for (int i = 0; i < mo; ++i) r.coeffs(i) = rows[i].coeffs(k);
      r.sense = RowSense::Eq;
      r.rhs = k == target ? 1.0 : 0.0;  // unit coefficient on the violated coordinate
      sys.push_back(r);
    }
    LinearRow rhsRow;
    rhsRow.coeffs = Vector(mo);
    for (int i = 0; i < mo; ++i) rhsRow.coeffs(i) = rows[i].rhs;
    rhsRow.sense = target >= 0 ? RowSense::Le : RowSense::Eq;
    rhsRow.rhs = target >= 0 ? 0.0 : -1.0;
    sys.push_back(rhsRow);

    VarBounds ub;
    ub.lo = Vector::Constant(mo, -kInf);
    ub.hi = Vector::Constant(mo, kInf);
    for (int i = 0; i < mo; ++i) {
      if (is_upper(rows[i].sense)) ub.lo(i) = 0.0;
      if (is_lower(rows[i].sense)) ub.hi(i) = 0.0;
    }

    Translator tr(sys, ub);
    StandardSimplex s = tr.build(Vector::Zero(mo));
    s.solve();
    if (s.status != StandardSimplex::Status::Optimal) continue;
    FarkasCertificate cert = make_certificate(rows, tr.map_back(s.z));
    if (verify_farkas(rows, box, cert)) return cert;
  }
  return std::nullopt;
}

}  // namespace

LinearFeasibility solve_linear_feasibility(const std::vector<LinearRow>& rows,
                                           const std::optional<VarBounds>& box) {
  LinearFeasibility result;
  if (rows.empty()) {
    const int nv = box ? static_cast<int>(box->lo.size()) : 0;
    Vector x = Vector::Zero(nv);
    for (int j = 0; j < nv; ++j) {
      if (std::isfinite(box->lo(j)) && x(j) < box->lo(j)) x(j) = box->lo(j);
      if (std::isfinite(box->hi(j)) && x(j) > box->hi(j)) x(j) = box->hi(j);
    }
    result.point = x;
    return result;
  }

  const int nv = static_cast<int>(rows.front().coeffs.size());
  if (nv > 16) {
    throw std::invalid_argument("solve_linear_feasibility: micro solver takes <= 16 variables");
  }
  const VarBounds bounds = box.value_or(VarBounds::free(nv));

  bool anyStrict = false;
  for (const auto& r : rows) anyStrict = anyStrict || is_strict(r.sense);

  // Embed the gap variable: strict rows must hold with slack delta in (0, 1].
  std::vector<LinearRow> wide;
  wide.reserve(rows.size());
  for (const auto& r : rows) {
    LinearRow w;
    w.coeffs = Vector(nv + 1);
    w.coeffs.head(nv) = r.coeffs;
    const double rowScale = std::max(1.0, r.coeffs.cwiseAbs().maxCoeff());
    w.coeffs(nv) = r.sense == RowSense::Lt ? rowScale : (r.sense == RowSense::Gt ? -rowScale : 0.0);
    w.rhs = r.rhs;
    w.sense = r.sense == RowSense::Lt ? RowSense::Le
            : r.sense == RowSense::Gt ? RowSense::Ge
                                      : r.sense;
    wide.push_back(w);
  }
  VarBounds wideBounds;
  wideBounds.lo = Vector(nv + 1);
  wideBounds.hi = Vector(nv + 1);
  wideBounds.lo.head(nv) = bounds.lo;
  wideBounds.hi.head(nv) = bounds.hi;
  wideBounds.lo(nv) = 0.0;
  wideBounds.hi(nv) = 1.0;

  Vector objective = Vector::Zero(nv + 1);
  objective(nv) = 1.0;

  LpOutcome lp = lp_maximize(objective, wide, wideBounds);
  if (lp.status == LpOutcome::Status::Unbounded) {
    throw NumericalError("solve_linear_feasibility: gap maximization unbounded");
  }
  if (lp.status == LpOutcome::Status::Optimal && (!anyStrict || lp.value >= 1e-9)) {
    result.point = lp.x.head(nv);
    return result;
  }

  if (lp.status == LpOutcome::Status::Infeasible) {
    // The nonstrict relaxation is already contradictory; the multipliers map
    // one-to-one onto the original rows (the gap column only gains
    // nonnegative coefficients, so dropping it keeps the contradiction).
    FarkasCertificate cert = make_certificate(rows, lp.certificate->multipliers);
    if (auto canon = canonical_certificate(rows, bounds)) cert = *canon;
    if (!verify_farkas(rows, box, cert)) {
      throw NumericalError("solve_linear_feasibility: certificate failed verification");
    }
    result.certificate = cert;
    return result;
  }

  // Relaxation feasible but the gap is numerically zero: the strict system is
  // infeasible. The duals of the gap LP aggregate to a strict contradiction.
  std::vector<LinearRow> tight = wide;
  LinearRow gapRow;  // delta >= lp.value + epsilon is impossible; derive from duals
  // Re-solve the relaxation at delta fixed slightly above the optimum to
  // obtain Farkas multipliers for the strict system.
  VarBounds pushed = wideBounds;
  pushed.lo(nv) = std::max(1e-6, 2.0 * lp.value);
  LpOutcome lp2 = lp_maximize(objective, tight, pushed);
  if (lp2.status == LpOutcome::Status::Infeasible && lp2.certificate) {
    FarkasCertificate cert = make_certificate(rows, lp2.certificate->multipliers);
    cert.derived_strict = true;
    if (auto canon = canonical_certificate(rows, bounds)) cert = *canon;
    if (verify_farkas(rows, box, cert)) {
      result.certificate = cert;
      return result;
    }
  }
  throw NumericalError(
      "solve_linear_feasibility: strict system infeasible at tolerance but no certificate "
      "survived verification");
}

}  // namespace quadagg
