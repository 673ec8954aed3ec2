#pragma once

/**
 * Exact feasibility for systems mixing equalities, weak and strict linear
 * inequalities.
 *
 * Strict constraints are handled by slack maximisation: maximise t subject to
 * a.x + t <= b for each strict row, the weak rows and equalities unchanged,
 * and 0 <= t <= 1. The open system is feasible iff the optimum t is positive,
 * and the optimal x is returned as an exact witness. Equalities are removed
 * up front by parameterising their solution set, then a dictionary simplex
 * (Chvatal's auxiliary-variable phase one, Bland's rule throughout) runs on
 * the remaining inequalities.
 */

#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "toricwedge/exactmath.hpp"

namespace toricwedge {

struct LinearConstraint {
  QVector a;
  Rational b;
};

struct StrictLinearSystem {
  std::size_t dimension = 0;
  std::vector<LinearConstraint> equalities;  ///< a.x == b
  std::vector<LinearConstraint> strict;      ///< a.x <  b
  std::vector<LinearConstraint> weak;        ///< a.x <= b

  void add_equality(QVector a, Rational b) { equalities.push_back({std::move(a), std::move(b)}); }
  void add_strict(QVector a, Rational b) { strict.push_back({std::move(a), std::move(b)}); }
  void add_weak(QVector a, Rational b) { weak.push_back({std::move(a), std::move(b)}); }
};

struct FeasibilityResult {
  bool feasible = false;
  std::optional<QVector> witness;  ///< present iff feasible
  std::optional<Rational> slack;   ///< smallest strict margin guaranteed by the witness
};

namespace detail {

/**
 * Dictionary simplex for: maximise c.z subject to A z <= b, z >= 0.
 * Variables 0..n-1 are structural, n..n+m-1 are the row slacks and n+m is
 * the phase-one auxiliary.
 */
inline int scalar_sign(const Rational& q) { return q.sign(); }
inline int scalar_sign(double v) {
  constexpr double eps = 1e-9;
  return v > eps ? 1 : (v < -eps ? -1 : 0);
}

template <typename T>
class BasicDictionarySimplex {
 public:
  using Vec = std::vector<T>;
  enum class Status { Optimal, Infeasible, Unbounded };

  BasicDictionarySimplex(std::vector<Vec> a, Vec b, Vec c)
      : m_(a.size()), n_(c.size()) {
    // Row i of the tableau: basic_i = rhs_i - sum_j coef_ij * nonbasic_j.
    tableau_.assign(m_, Vec(n_ + 1));
    rhs_ = std::move(b);
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) tableau_[i][j] = a[i][j];
    }
    basic_.resize(m_);
    for (std::size_t i = 0; i < m_; ++i) basic_[i] = n_ + i;
    nonbasic_.resize(n_ + 1);
    for (std::size_t j = 0; j < n_; ++j) nonbasic_[j] = j;
    nonbasic_[n_] = aux_id();
    objective_ = Vec(n_ + 1);
    for (std::size_t j = 0; j < n_; ++j) objective_[j] = c[j];
    target_ = std::move(c);
  }

  Status solve() {
    if (!phase_one()) return Status::Infeasible;
    // Objective in terms of the current nonbasic variables.
    objective_.assign(n_ + 1, T(0));
    objective_value_ = 0;
    for (std::size_t j = 0; j <= n_; ++j) {
      const auto var = nonbasic_[j];
      if (var < n_) objective_[j] += target_[var];
    }
    for (std::size_t i = 0; i < m_; ++i) {
      const auto var = basic_[i];
      if (var >= n_ || scalar_sign(target_[var]) == 0) continue;
      objective_value_ += target_[var] * rhs_[i];
      for (std::size_t j = 0; j <= n_; ++j)
        if (scalar_sign(tableau_[i][j]) != 0) objective_[j] -= target_[var] * tableau_[i][j];
    }
    return iterate(/*aux_frozen=*/true) ? Status::Optimal : Status::Unbounded;
  }

  Vec solution() const {
    Vec z(n_);
    for (std::size_t i = 0; i < m_; ++i)
      if (basic_[i] < n_) z[basic_[i]] = rhs_[i];
    return z;
  }

  const T& objective_value() const { return objective_value_; }

 private:
  std::size_t aux_id() const { return n_ + m_; }

  bool phase_one() {
    std::size_t worst = m_;
    for (std::size_t i = 0; i < m_; ++i)
      if (scalar_sign(rhs_[i]) < 0 && (worst == m_ || rhs_[i] < rhs_[worst])) worst = i;
    if (worst == m_) return true;
    // Auxiliary x0 enters every row with coefficient -1 (A z - x0 <= b).
    for (std::size_t i = 0; i < m_; ++i) tableau_[i][n_] = -1;
    objective_.assign(n_ + 1, T(0));
    objective_[n_] = -1;  // maximise -x0
    objective_value_ = 0;
    pivot(worst, n_);
    if (!iterate(/*aux_frozen=*/false)) return false;  // cannot happen: -x0 <= 0
    if (scalar_sign(objective_value_) < 0) return false;
    // Drive x0 out of the basis if it stayed there at level zero.
    for (std::size_t i = 0; i < m_; ++i) {
      if (basic_[i] != aux_id()) continue;
      std::size_t enter = n_ + 1;
      for (std::size_t j = 0; j <= n_; ++j)
        if (scalar_sign(tableau_[i][j]) != 0 && (enter == n_ + 1 || nonbasic_[j] < nonbasic_[enter])) enter = j;
      if (enter == n_ + 1) continue;  // redundant row, x0 is pinned at zero
      pivot(i, enter);
    }
    return true;
  }

  // Bland's rule: lowest-index improving variable, lowest-index leaving variable on ratio ties.
  bool iterate(bool aux_frozen) {
    for (;;) {
      std::size_t enter = n_ + 1;
      for (std::size_t j = 0; j <= n_; ++j) {
        if (aux_frozen && nonbasic_[j] == aux_id()) continue;
        if (scalar_sign(objective_[j]) > 0 && (enter == n_ + 1 || nonbasic_[j] < nonbasic_[enter])) enter = j;
      }
      if (enter == n_ + 1) return true;
      std::size_t leave = m_;
      T best{};
      for (std::size_t i = 0; i < m_; ++i) {
        if (scalar_sign(tableau_[i][enter]) <= 0) continue;
        T ratio = rhs_[i] / tableau_[i][enter];
        if (leave == m_ || ratio < best || (ratio == best && basic_[i] < basic_[leave])) {
          leave = i;
          best = std::move(ratio);
        }
      }
      if (leave == m_) return false;
      pivot(leave, enter);
    }
  }

  void pivot(std::size_t row, std::size_t col) {
    auto& pr = tableau_[row];
    const T inv = T(1) / pr[col];
    // Solve the pivot row for the entering variable.
    for (std::size_t j = 0; j <= n_; ++j) {
      if (j == col) pr[j] = inv;
      else if (scalar_sign(pr[j]) != 0) pr[j] *= inv;
    }
    rhs_[row] *= inv;
    nz_.clear();
    for (std::size_t j = 0; j <= n_; ++j)
      if (j != col && scalar_sign(pr[j]) != 0) nz_.push_back(j);
    auto eliminate = [&](Vec& coeffs, T& constant, bool is_objective) {
      const T f = coeffs[col];
      if (scalar_sign(f) == 0) return;
      for (auto j : nz_) coeffs[j] -= f * pr[j];
      coeffs[col] = -f * pr[col];
      if (is_objective) constant += f * rhs_[row];
      else constant -= f * rhs_[row];
    };
    for (std::size_t i = 0; i < m_; ++i)
      if (i != row) eliminate(tableau_[i], rhs_[i], false);
    eliminate(objective_, objective_value_, true);
    std::swap(basic_[row], nonbasic_[col]);
  }

  std::size_t m_, n_;
  std::vector<Vec> tableau_;
  Vec rhs_;
  std::vector<std::size_t> basic_, nonbasic_;
  Vec objective_;
  T objective_value_{};
  Vec target_;
  std::vector<std::size_t> nz_;
};

using DictionarySimplex = BasicDictionarySimplex<Rational>;

/// Continued-fraction approximation of v with denominator at most 10^9.
inline Rational rationalize(double v) {
  if (!std::isfinite(v)) return 0;
  const bool neg = v < 0;
  double x = std::fabs(v);
  BigInt p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  for (int step = 0; step < 40; ++step) {
    const double a = std::floor(x);
    if (a > 1e12) break;
    const BigInt ai = static_cast<long long>(a);
    BigInt p2 = ai * p1 + p0, q2 = ai * q1 + q0;
    if (q2 > 1000000000) break;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    const double frac = x - a;
    if (frac < 1e-12 || std::fabs(std::fabs(v) - p1.convert_to<double>() / q1.convert_to<double>()) < 1e-12) break;
    x = 1 / frac;
  }
  if (q1 == 0) return 0;
  Rational r(p1, q1);
  return neg ? Rational(-r) : r;
}

/// Solution set of the equalities as x = origin + basis * z; nullopt if inconsistent.
struct AffineParameterisation {
  QVector origin;
  std::vector<QVector> basis;  ///< one vector of length dimension per free parameter
};

inline std::optional<AffineParameterisation> solve_equalities(std::size_t dim, const std::vector<LinearConstraint>& eqs) {
  AffineParameterisation out;
  out.origin.assign(dim, Rational(0));
  if (eqs.empty()) {
    for (std::size_t j = 0; j < dim; ++j) {
      QVector e(dim);
      e[j] = 1;
      out.basis.push_back(std::move(e));
    }
    return out;
  }
  QMatrix aug(eqs.size(), dim + 1);
  for (std::size_t r = 0; r < eqs.size(); ++r) {
    for (std::size_t c = 0; c < dim; ++c) aug(r, c) = eqs[r].a[c];
    aug(r, dim) = eqs[r].b;
  }
  const auto ech = row_echelon(std::move(aug));
  if (!ech.pivot_cols.empty() && ech.pivot_cols.back() == dim) return std::nullopt;
  std::vector<bool> is_pivot(dim, false);
  for (std::size_t r = 0; r < ech.rank(); ++r) {
    is_pivot[ech.pivot_cols[r]] = true;
    out.origin[ech.pivot_cols[r]] = ech.reduced(r, dim);
  }
  for (std::size_t f = 0; f < dim; ++f) {
    if (is_pivot[f]) continue;
    QVector v(dim);
    v[f] = 1;
    for (std::size_t r = 0; r < ech.rank(); ++r)
      if (!is_zero(ech.reduced(r, f))) v[ech.pivot_cols[r]] = -ech.reduced(r, f);
    out.basis.push_back(std::move(v));
  }
  return out;
}

inline void check_dimensions(const StrictLinearSystem& sys) {
  auto check = [&](const std::vector<LinearConstraint>& rows) {
    for (const auto& row : rows)
      if (row.a.size() != sys.dimension)
        throw Error(ErrorKind::DimensionMismatch, "constraint of length " + std::to_string(row.a.size()) +
                                                      " in a system of dimension " + std::to_string(sys.dimension));
  };
  check(sys.equalities);
  check(sys.strict);
  check(sys.weak);
}

/**
 * Inequalities rewritten over the free parameters z = zp - zn of the
 * equality solution set; an extra trailing variable t is added to every
 * strict row when `with_slack` is set.
 */
struct ReducedInequalities {
  std::vector<QVector> rows;
  QVector rhs;
};

inline ReducedInequalities reduce_inequalities(const StrictLinearSystem& sys, const AffineParameterisation& par,
                                               bool with_slack) {
  const std::size_t k = par.basis.size();
  const std::size_t width = 2 * k + (with_slack ? 1 : 0);
  ReducedInequalities out;
  auto add = [&](const LinearConstraint& c, bool strict) {
    QVector row(width);
    Rational rhs = c.b;
    for (std::size_t j = 0; j < sys.dimension; ++j) {
      if (is_zero(c.a[j])) continue;
      rhs -= c.a[j] * par.origin[j];
      for (std::size_t p = 0; p < k; ++p) {
        if (is_zero(par.basis[p][j])) continue;
        const Rational v = c.a[j] * par.basis[p][j];
        row[p] += v;
        row[k + p] -= v;
      }
    }
    if (strict && with_slack) row[2 * k] = 1;
    out.rows.push_back(std::move(row));
    out.rhs.push_back(std::move(rhs));
  };
  for (const auto& c : sys.strict) add(c, true);
  for (const auto& c : sys.weak) add(c, false);
  return out;
}

inline QVector lift(const AffineParameterisation& par, const QVector& z) {
  const std::size_t k = par.basis.size();
  QVector x = par.origin;
  for (std::size_t p = 0; p < k; ++p) {
    const Rational coef = z[p] - z[k + p];
    if (is_zero(coef)) continue;
    for (std::size_t j = 0; j < x.size(); ++j)
      if (!is_zero(par.basis[p][j])) x[j] += coef * par.basis[p][j];
  }
  return x;
}

/// Smallest margin b - a.x over the strict rows, if x satisfies the whole system exactly.
inline std::optional<Rational> exact_margin(const StrictLinearSystem& sys, const QVector& x) {
  for (const auto& c : sys.equalities)
    if (dot(c.a, x) != c.b) return std::nullopt;
  for (const auto& c : sys.weak)
    if (dot(c.a, x) > c.b) return std::nullopt;
  std::optional<Rational> margin;
  for (const auto& c : sys.strict) {
    Rational gap = c.b - dot(c.a, x);
    if (gap.sign() <= 0) return std::nullopt;
    if (!margin || gap < *margin) margin = std::move(gap);
  }
  return margin ? margin : Rational(1);
}

/**
 * The slack LP solved in double precision, its optimum rounded to nearby
 * small-denominator rationals and accepted only if it satisfies the system
 * exactly. A rejected candidate says nothing about feasibility.
 */
inline std::optional<FeasibilityResult> floating_candidate(const StrictLinearSystem& sys,
                                                           const AffineParameterisation& par,
                                                           const ReducedInequalities& reduced,
                                                           const QVector& objective) {
  std::vector<std::vector<double>> a;
  a.reserve(reduced.rows.size());
  for (const auto& row : reduced.rows) {
    std::vector<double> r;
    r.reserve(row.size());
    for (const auto& q : row) r.push_back(q.convert_to<double>());
    a.push_back(std::move(r));
  }
  std::vector<double> b, c;
  for (const auto& q : reduced.rhs) b.push_back(q.convert_to<double>());
  for (const auto& q : objective) c.push_back(q.convert_to<double>());
  BasicDictionarySimplex<double> lp(std::move(a), std::move(b), std::move(c));
  if (lp.solve() != BasicDictionarySimplex<double>::Status::Optimal || lp.objective_value() <= 1e-7) return std::nullopt;
  const auto zd = lp.solution();
  QVector z;
  z.reserve(zd.size());
  for (auto v : zd) z.push_back(rationalize(v));
  auto x = lift(par, z);
  auto margin = exact_margin(sys, x);
  if (!margin) return std::nullopt;
  return FeasibilityResult{true, std::move(x), std::move(*margin)};
}

}  // namespace detail

/**
 * Decides whether some point satisfies every equality, weak and strict
 * constraint of `sys`. The witness, when present, satisfies each strict
 * constraint with margin at least `slack`.
 */
inline FeasibilityResult strict_feasible(const StrictLinearSystem& sys) {
  detail::check_dimensions(sys);
  const auto par = detail::solve_equalities(sys.dimension, sys.equalities);
  if (!par) return {};
  auto reduced = detail::reduce_inequalities(sys, *par, /*with_slack=*/true);
  const std::size_t k = par->basis.size();
  // t <= 1
  QVector cap(2 * k + 1);
  cap[2 * k] = 1;
  reduced.rows.push_back(std::move(cap));
  reduced.rhs.emplace_back(1);
  QVector objective(2 * k + 1);
  objective[2 * k] = 1;
  if (auto quick = detail::floating_candidate(sys, *par, reduced, objective)) return *quick;
  detail::DictionarySimplex lp(std::move(reduced.rows), std::move(reduced.rhs), std::move(objective));
  const auto status = lp.solve();
  if (status == detail::DictionarySimplex::Status::Infeasible) return {};
  if (status == detail::DictionarySimplex::Status::Unbounded)
    throw Error(ErrorKind::Unbounded, "auxiliary slack unbounded despite t <= 1");
  const Rational t = lp.objective_value();
  if (t.sign() <= 0) return {};
  return {true, detail::lift(*par, lp.solution()), t};
}

/**
 * Maximises `objective . x` over the closed system (equalities and weak
 * rows; `sys.strict` must be empty). Returns nullopt when infeasible and
 * throws `Unbounded` when the objective is unbounded above.
 */
inline std::optional<QVector> maximize(const StrictLinearSystem& sys, const QVector& objective) {
  detail::check_dimensions(sys);
  if (!sys.strict.empty()) throw Error(ErrorKind::PreconditionViolated, "maximize takes closed systems only");
  if (objective.size() != sys.dimension) throw Error(ErrorKind::DimensionMismatch, "objective length");
  const auto par = detail::solve_equalities(sys.dimension, sys.equalities);
  if (!par) return std::nullopt;
  auto reduced = detail::reduce_inequalities(sys, *par, /*with_slack=*/false);
  const std::size_t k = par->basis.size();
  QVector c(2 * k);
  for (std::size_t p = 0; p < k; ++p) {
    const Rational v = dot(objective, par->basis[p]);
    c[p] = v;
    c[k + p] = -v;
  }
  detail::DictionarySimplex lp(std::move(reduced.rows), std::move(reduced.rhs), std::move(c));
  const auto status = lp.solve();
  if (status == detail::DictionarySimplex::Status::Infeasible) return std::nullopt;
  if (status == detail::DictionarySimplex::Status::Unbounded)
    throw Error(ErrorKind::Unbounded, "objective unbounded");
  return detail::lift(*par, lp.solution());
}

/// True iff `x` satisfies every constraint of `sys` exactly.
inline bool satisfies(const StrictLinearSystem& sys, const QVector& x) {
  if (x.size() != sys.dimension) return false;
  for (const auto& c : sys.equalities)
    if (dot(c.a, x) != c.b) return false;
  for (const auto& c : sys.weak)
    if (dot(c.a, x) > c.b) return false;
  for (const auto& c : sys.strict)
    if (!(dot(c.a, x) < c.b)) return false;
  return true;
}

using PointFamily = std::vector<QVector>;

struct RelintResult {
  bool feasible = false;
  QVector point;                      ///< common relative-interior point
  std::vector<QVector> barycentric;   ///< one weight vector per family, all entries > 0, summing to 1
  std::optional<Rational> slack;
};

namespace detail {

/**
 * For affinely independent points p_1..p_k, the affine map x -> barycentric
 * weights on their affine hull, (x, 1) -> L (x, 1), and equalities N (x, 1) = 0
 * cutting out that hull. nullopt if the points are affinely dependent.
 */
struct BarycentricMap {
  QMatrix left_inverse;  ///< k x (dim+1)
  QMatrix hull;          ///< (dim+1-k) x (dim+1)
};

inline std::optional<BarycentricMap> barycentric_map(const PointFamily& family, std::size_t dim) {
  // Reduced echelon form of [M | I] with M = columns (p_j, 1) is [I_k L ; 0 N] when M has full column rank.
  const std::size_t k = family.size();
  QMatrix aug(dim + 1, k + dim + 1);
  for (std::size_t j = 0; j < k; ++j) {
    for (std::size_t c = 0; c < dim; ++c) aug(c, j) = family[j][c];
    aug(dim, j) = 1;
  }
  for (std::size_t r = 0; r <= dim; ++r) aug(r, k + r) = 1;
  const auto ech = row_echelon(std::move(aug));
  if (ech.rank() < k || ech.pivot_cols[k - 1] != k - 1) return std::nullopt;
  BarycentricMap out{QMatrix(k, dim + 1), QMatrix(dim + 1 - k, dim + 1)};
  for (std::size_t r = 0; r <= dim; ++r)
    for (std::size_t c = 0; c <= dim; ++c) {
      if (r < k) out.left_inverse(r, c) = ech.reduced(r, k + c);
      else out.hull(r - k, c) = ech.reduced(r, k + c);
    }
  return out;
}

}  // namespace detail

/**
 * Decides whether the relative interiors of conv(family) intersect, using
 * x in relint conv(S) iff x = sum l_j p_j with every l_j > 0 and sum l_j = 1.
 * The weights of an affinely independent family are affine functions of x
 * and are substituted directly; other families get explicit weight
 * variables after the coordinates of x.
 */
inline RelintResult relint_intersection(const std::vector<PointFamily>& families) {
  if (families.empty()) throw Error(ErrorKind::EmptyFamily, "no families given");
  std::optional<std::size_t> dim;
  for (std::size_t f = 0; f < families.size(); ++f) {
    if (families[f].empty()) throw Error(ErrorKind::EmptyFamily, "family " + std::to_string(f + 1) + " has no points");
    for (const auto& p : families[f]) {
      if (!dim) dim = p.size();
      if (p.size() != *dim) throw Error(ErrorKind::DimensionMismatch, "points of differing dimension");
    }
  }
  const std::size_t d = *dim;
  std::vector<std::optional<detail::BarycentricMap>> maps;
  std::vector<std::size_t> offsets;
  std::size_t width = d;
  for (const auto& family : families) {
    maps.push_back(detail::barycentric_map(family, d));
    offsets.push_back(width);
    if (!maps.back()) width += family.size();
  }
  StrictLinearSystem sys;
  sys.dimension = width;
  // Row (a, a0) of an affine map in (x, 1) as a constraint a.x <op> -a0.
  auto affine_row = [&](const QMatrix& mat, std::size_t r, bool negate) {
    QVector a(width);
    for (std::size_t c = 0; c < d; ++c) a[c] = negate ? Rational(-mat(r, c)) : mat(r, c);
    Rational b = negate ? mat(r, d) : Rational(-mat(r, d));
    return LinearConstraint{std::move(a), std::move(b)};
  };
  for (std::size_t f = 0; f < families.size(); ++f) {
    const auto& family = families[f];
    if (maps[f]) {
      for (std::size_t r = 0; r < maps[f]->hull.rows(); ++r) sys.equalities.push_back(affine_row(maps[f]->hull, r, false));
      for (std::size_t r = 0; r < family.size(); ++r) sys.strict.push_back(affine_row(maps[f]->left_inverse, r, true));
      continue;
    }
    const std::size_t off = offsets[f];
    for (std::size_t c = 0; c < d; ++c) {
      QVector a(width);
      for (std::size_t j = 0; j < family.size(); ++j) a[off + j] = family[j][c];
      a[c] = -1;
      sys.add_equality(std::move(a), 0);
    }
    QVector sum(width);
    for (std::size_t j = 0; j < family.size(); ++j) sum[off + j] = 1;
    sys.add_equality(std::move(sum), 1);
    for (std::size_t j = 0; j < family.size(); ++j) {
      QVector neg(width);
      neg[off + j] = -1;
      sys.add_strict(std::move(neg), 0);
    }
  }
  const auto res = strict_feasible(sys);
  RelintResult out;
  if (!res.feasible) return out;
  out.feasible = true;
  out.slack = res.slack;
  const auto& w = *res.witness;
  out.point.assign(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(d));
  QVector x1 = out.point;
  x1.emplace_back(1);
  for (std::size_t f = 0; f < families.size(); ++f) {
    if (maps[f]) {
      out.barycentric.push_back(maps[f]->left_inverse * x1);
    } else {
      out.barycentric.emplace_back(w.begin() + static_cast<std::ptrdiff_t>(offsets[f]),
                                   w.begin() + static_cast<std::ptrdiff_t>(offsets[f] + families[f].size()));
    }
  }
  return out;
}

/// Exact check that `weights` are positive barycentric coordinates of `point` in `family`.
inline bool verify_barycentric(const PointFamily& family, const QVector& weights, const QVector& point) {
  if (weights.size() != family.size()) return false;
  Rational total = 0;
  QVector combo(point.size());
  for (std::size_t j = 0; j < family.size(); ++j) {
    if (weights[j].sign() <= 0 || family[j].size() != point.size()) return false;
    total += weights[j];
    for (std::size_t c = 0; c < point.size(); ++c) combo[c] += weights[j] * family[j][c];
  }
  return total == 1 && combo == point;
}

/// Whether `point` lies in the relative interior of conv(family).
inline bool in_relint(const PointFamily& family, const QVector& point) {
  return relint_intersection({family, PointFamily{point}}).feasible;
}

}  // namespace toricwedge
