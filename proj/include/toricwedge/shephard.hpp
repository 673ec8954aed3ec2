#pragma once

/**
 * Shephard diagrams of complete fans and two independent tests of strong
 * polytopality: Shephard's criterion (the cofaces of all maximal cones have a
 * common point) and existence of a strictly convex piecewise-linear support
 * function.
 *
 * For generators u_1, ..., u_m of a complete fan in R^n and a positive
 * relation sum c_i u_i = 0, pick B with rows (w_i, 1) spanning the kernel of
 * [c_1 u_1 ... c_m u_m]. The diagram point of ray i is w_i, in R^{m-n-1}.
 */

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "toricwedge/exactmath.hpp"
#include "toricwedge/lp.hpp"
#include "toricwedge/planefan.hpp"
#include "toricwedge/puzzle.hpp"
#include "toricwedge/wedge.hpp"

namespace toricwedge {

struct PositiveRelation {
  QVector weights;
};

struct ShephardDiagram {
  std::vector<VertexLabel> labels;
  QVector weights;
  std::size_t ambient_dim = 0;
  std::vector<QVector> points;

  std::size_t size() const { return points.size(); }
  std::optional<std::size_t> find(VertexLabel label) const {
    for (std::size_t k = 0; k < labels.size(); ++k)
      if (labels[k] == label) return k;
    return std::nullopt;
  }

  /// A diagram from given points, e.g. a published one.
  static ShephardDiagram from_points(std::vector<VertexLabel> labels, std::vector<QVector> points, QVector weights = {}) {
    if (labels.size() != points.size()) throw Error(ErrorKind::DimensionMismatch, "one label per point");
    ShephardDiagram dg{std::move(labels), std::move(weights), points.empty() ? 0 : points.front().size(), std::move(points)};
    for (const auto& p : dg.points)
      if (p.size() != dg.ambient_dim) throw Error(ErrorKind::DimensionMismatch, "points of differing dimension");
    return dg;
  }
};

using Generators = std::vector<IntVector>;  ///< one integer vector per ray

inline Generators generators_of(const CharMatrix& cm) { return cm.columns; }

inline QMatrix weighted_matrix(const Generators& gens, const QVector& weights) {
  const std::size_t n = gens.empty() ? 0 : gens.front().size();
  QMatrix a(n, gens.size());
  for (std::size_t j = 0; j < gens.size(); ++j)
    for (std::size_t r = 0; r < n; ++r) a(r, j) = weights[j] * Rational(static_cast<long long>(gens[j][r]));
  return a;
}

/**
 * Weights c_i >= 1 with sum c_i u_i = 0 minimising sum c_i (Bland's rule
 * fixes the optimal vertex), rescaled to coprime integers.
 */
inline PositiveRelation positive_relation(const Generators& gens) {
  const std::size_t m = gens.size();
  if (m == 0) throw Error(ErrorKind::NotComplete, "no generators");
  const std::size_t n = gens.front().size();
  StrictLinearSystem sys;
  sys.dimension = m;
  for (std::size_t r = 0; r < n; ++r) {
    QVector a(m);
    for (std::size_t j = 0; j < m; ++j) {
      if (gens[j].size() != n) throw Error(ErrorKind::DimensionMismatch, "generators of differing length");
      a[j] = Rational(static_cast<long long>(gens[j][r]));
    }
    sys.add_equality(std::move(a), 0);
  }
  for (std::size_t j = 0; j < m; ++j) {
    QVector a(m);
    a[j] = -1;
    sys.add_weak(std::move(a), -1);
  }
  std::optional<QVector> c;
  try {
    c = maximize(sys, QVector(m, Rational(-1)));
  } catch (const Error&) {
    c.reset();
  }
  if (!c) throw Error(ErrorKind::NotComplete, "the generators admit no positive linear relation");
  return {primitive_direction(std::move(*c))};
}

inline ShephardDiagram shephard_diagram(const Generators& gens, std::vector<VertexLabel> labels, const QVector& weights) {
  if (weights.size() != gens.size() || labels.size() != gens.size())
    throw Error(ErrorKind::DimensionMismatch, "one weight and one label per generator");
  const auto b = kernel_with_ones(weighted_matrix(gens, weights));
  ShephardDiagram dg;
  dg.labels = std::move(labels);
  dg.weights = weights;
  dg.ambient_dim = b.cols() - 1;
  for (std::size_t i = 0; i < b.rows(); ++i) {
    auto row = b.row(i);
    row.pop_back();
    dg.points.push_back(std::move(row));
  }
  return dg;
}

inline ShephardDiagram shephard_diagram(const Generators& gens, std::vector<VertexLabel> labels) {
  return shephard_diagram(gens, std::move(labels), positive_relation(gens).weights);
}

inline ShephardDiagram shephard_diagram(const CharMatrix& cm) { return shephard_diagram(cm.columns, cm.labels); }

inline ShephardDiagram shephard_diagram(const PlaneFan& fan) { return shephard_diagram(to_char_matrix(fan)); }

/// Indices of the diagram points whose labels are not in the cone.
inline std::vector<std::size_t> coface_indices(const ShephardDiagram& dg, const std::vector<VertexLabel>& cone) {
  std::vector<bool> in_cone(dg.size(), false);
  for (const auto& lab : cone) {
    const auto k = dg.find(lab);
    if (!k) throw Error(ErrorKind::UnknownLabel, "no diagram point labelled " + lab.str());
    in_cone[*k] = true;
  }
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < dg.size(); ++k)
    if (!in_cone[k]) out.push_back(k);
  return out;
}

inline PointFamily coface_points(const ShephardDiagram& dg, const std::vector<VertexLabel>& cone) {
  PointFamily out;
  for (auto k : coface_indices(dg, cone)) out.push_back(dg.points[k]);
  return out;
}

/// Maximal cones of a complex as label lists.
inline std::vector<std::vector<VertexLabel>> facet_labels(const WedgeComplex& cx) {
  std::vector<std::vector<VertexLabel>> out;
  for (const auto& f : cx.facets) {
    std::vector<VertexLabel> labs;
    for (auto v : f) labs.push_back(cx.vertices[v]);
    out.push_back(std::move(labs));
  }
  return out;
}

struct PolytopalityCertificate {
  enum class Kind { InteriorPoint, SupportHeights, EmptyWitness };
  Kind kind = Kind::EmptyWitness;
  std::optional<QVector> point;      ///< common point of all cofaces
  std::vector<QVector> barycentric;  ///< weights of `point` in each coface, facet order
  std::optional<QVector> heights;    ///< support function values, one per ray
};

struct PolytopalityVerdict {
  bool polytopal = false;
  PolytopalityCertificate certificate;
};

/// Common relative-interior point of the cofaces of the given maximal cones.
inline PolytopalityCertificate s_sigma(const ShephardDiagram& dg, const std::vector<std::vector<VertexLabel>>& facets) {
  std::vector<PointFamily> families;
  for (const auto& f : facets) families.push_back(coface_points(dg, f));
  PolytopalityCertificate cert;
  if (families.empty()) return cert;
  auto res = relint_intersection(families);
  if (!res.feasible) return cert;
  cert.kind = PolytopalityCertificate::Kind::InteriorPoint;
  cert.point = std::move(res.point);
  cert.barycentric = std::move(res.barycentric);
  return cert;
}

/// Re-checks an interior-point certificate exactly against every coface.
inline bool verify_interior_point(const ShephardDiagram& dg, const std::vector<std::vector<VertexLabel>>& facets,
                                  const PolytopalityCertificate& cert) {
  if (cert.kind != PolytopalityCertificate::Kind::InteriorPoint || !cert.point) return false;
  if (cert.barycentric.size() != facets.size()) return false;
  for (std::size_t f = 0; f < facets.size(); ++f)
    if (!verify_barycentric(coface_points(dg, facets[f]), cert.barycentric[f], *cert.point)) return false;
  return true;
}

inline void require_nonsingular(const CharMatrix& cm, const WedgeComplex& cx) {
  if (!check_nonsingular(cm, cx)) throw Error(ErrorKind::NotNonSingular, "some facet minor is not +-1");
}

inline PolytopalityVerdict is_strongly_polytopal(const CharMatrix& cm, const WedgeComplex& cx) {
  require_nonsingular(cm, cx);
  const auto cert = s_sigma(shephard_diagram(cm), facet_labels(cx));
  return {cert.kind == PolytopalityCertificate::Kind::InteriorPoint, cert};
}

inline PolytopalityVerdict is_strongly_polytopal(const PlaneFan& fan) {
  const auto cm = to_char_matrix(fan);
  return is_strongly_polytopal(cm, build_complex(WedgeSignature::polygon(fan.size())));
}

namespace detail {

/// Inverse of the facet's column matrix; integral because the minor is +-1.
inline std::vector<IntVector> facet_inverse(const CharMatrix& cm, const Facet& basis) {
  const std::size_t n = cm.n;
  QMatrix aug(n, 2 * n);
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t r = 0; r < n; ++r) aug(r, c) = Rational(static_cast<long long>(cm.columns[basis[c]][r]));
  for (std::size_t r = 0; r < n; ++r) aug(r, n + r) = 1;
  const auto ech = row_echelon(std::move(aug));
  if (ech.rank() < n || ech.pivot_cols[n - 1] != n - 1)
    throw Error(ErrorKind::NotNonSingular, "facet columns do not form a basis");
  std::vector<IntVector> inv(n, IntVector(n));
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      const Rational& q = ech.reduced(r, n + c);
      if (denominator(q) != 1) throw Error(ErrorKind::NotNonSingular, "facet minor is not +-1");
      inv[r][c] = numerator(q).convert_to<std::int64_t>();
    }
  return inv;
}

/**
 * Heights h_r with h = 0 on the first facet and, across each wall between
 * sigma and sigma' = wall + r', sum_{s in sigma} coef_s h_s < h_{r'} where
 * u_{r'} = sum coef_s u_s. One side of each wall suffices: the condition
 * read from sigma' is the same inequality scaled by a negative coefficient.
 */
inline StrictLinearSystem support_function_system(const CharMatrix& cm, const WedgeComplex& cx) {
  const std::size_t d = cm.columns.size();
  StrictLinearSystem sys;
  sys.dimension = d;
  if (cx.facets.empty()) return sys;
  for (auto v : cx.facets.front()) {
    QVector a(d);
    a[v] = 1;
    sys.add_equality(std::move(a), 0);
  }
  std::vector<std::vector<IntVector>> inverses;
  for (const auto& f : cx.facets) inverses.push_back(facet_inverse(cm, f));
  for (std::size_t p = 0; p < cx.facets.size(); ++p)
    for (std::size_t q = p + 1; q < cx.facets.size(); ++q) {
      const auto& sigma = cx.facets[p];
      const auto& other = cx.facets[q];
      std::vector<std::size_t> extra;
      std::set_difference(other.begin(), other.end(), sigma.begin(), sigma.end(), std::back_inserter(extra));
      if (extra.size() != 1) continue;
      const auto& u = cm.columns[extra.front()];
      QVector a(d);
      for (std::size_t c = 0; c < sigma.size(); ++c) {
        std::int64_t coef = 0;
        for (std::size_t r = 0; r < cm.n; ++r) coef += inverses[p][c][r] * u[r];
        a[sigma[c]] = coef;
      }
      a[extra.front()] = -1;
      sys.add_strict(std::move(a), 0);
    }
  return sys;
}

}  // namespace detail

inline PolytopalityVerdict support_function_polytopal(const CharMatrix& cm, const WedgeComplex& cx) {
  require_nonsingular(cm, cx);
  const auto sys = detail::support_function_system(cm, cx);
  const auto res = strict_feasible(sys);
  PolytopalityVerdict out;
  if (!res.feasible) return out;
  out.polytopal = true;
  out.certificate.kind = PolytopalityCertificate::Kind::SupportHeights;
  out.certificate.heights = *res.witness;
  return out;
}

inline PolytopalityVerdict support_function_polytopal(const PlaneFan& fan) {
  return support_function_polytopal(to_char_matrix(fan), build_complex(WedgeSignature::polygon(fan.size())));
}

inline bool verify_heights(const CharMatrix& cm, const WedgeComplex& cx, const QVector& heights) {
  return satisfies(detail::support_function_system(cm, cx), heights);
}

// ---------------------------------------------------------------------------
// Radon point of a fan with an opposite ray pair

struct RadonData {
  std::size_t first = 0, ell = 0;       ///< diagram indices of the opposite pair
  std::vector<std::size_t> A, B;        ///< indices with positive / negative value of the functional
  QVector y;                            ///< weighted functional value per point
  Rational s;
  QVector R;
  QVector H_normal;                     ///< H = {x : H_normal . x = H_offset}
  Rational H_offset;
  std::size_t hull_dim = 0;             ///< affine dimension of the points indexed by A and B
};

/// Affine dependencies of the points: kernel of the matrix with columns (p, 1).
inline QMatrix affine_dependencies(const PointFamily& pts) {
  const std::size_t dim = pts.empty() ? 0 : pts.front().size();
  QMatrix m(dim + 1, pts.size());
  for (std::size_t j = 0; j < pts.size(); ++j) {
    for (std::size_t c = 0; c < dim; ++c) m(c, j) = pts[j][c];
    m(dim, j) = 1;
  }
  return kernel_basis(m);
}

inline std::size_t affine_dimension(const PointFamily& pts) {
  if (pts.empty()) return 0;
  return pts.size() - 1 - affine_dependencies(pts).cols();
}

/**
 * Radon data for a linear functional y on the weighted generators that
 * vanishes exactly at the opposite pair (first, ell): the relation
 * sum y_i (w_i, 1) = 0 splits into A = {y > 0} and B = {y < 0}, and
 * R = (1/s) sum_A y_a w_a = -(1/s) sum_B y_b w_b with s = sum_A y_a.
 */
inline RadonData radon_data(const ShephardDiagram& dg, const QVector& y, std::size_t first, std::size_t ell) {
  RadonData rd;
  rd.first = first;
  rd.ell = ell;
  rd.y = y;
  rd.R.assign(dg.ambient_dim, Rational(0));
  QVector from_b(dg.ambient_dim);
  for (std::size_t k = 0; k < dg.size(); ++k) {
    if (y[k].sign() > 0) {
      rd.A.push_back(k);
      rd.s += y[k];
      for (std::size_t c = 0; c < dg.ambient_dim; ++c) rd.R[c] += y[k] * dg.points[k][c];
    } else if (y[k].sign() < 0) {
      rd.B.push_back(k);
      for (std::size_t c = 0; c < dg.ambient_dim; ++c) from_b[c] -= y[k] * dg.points[k][c];
    }
  }
  if (rd.s.sign() == 0) throw Error(ErrorKind::PreconditionViolated, "functional has no positive values");
  for (std::size_t c = 0; c < dg.ambient_dim; ++c) {
    rd.R[c] /= rd.s;
    from_b[c] /= rd.s;
  }
  if (from_b != rd.R) throw std::logic_error("the two expressions for the Radon point differ");
  PointFamily hull;
  for (auto k : rd.A) hull.push_back(dg.points[k]);
  for (auto k : rd.B) hull.push_back(dg.points[k]);
  rd.hull_dim = affine_dimension(hull);
  // Normal (p, -c) to every point of the hull, when the hull is a hyperplane.
  if (rd.hull_dim + 1 == dg.ambient_dim) {
    QMatrix rows(hull.size(), dg.ambient_dim + 1);
    for (std::size_t j = 0; j < hull.size(); ++j) {
      for (std::size_t c = 0; c < dg.ambient_dim; ++c) rows(j, c) = hull[j][c];
      rows(j, dg.ambient_dim) = -1;
    }
    auto normal = kernel_basis(rows).col(0);
    const auto lead = std::find_if(normal.begin(), normal.end(), [](const Rational& q) { return !is_zero(q); });
    if (lead != normal.end() && lead->sign() < 0)
      for (auto& q : normal) q = -q;
    rd.H_offset = normal.back();
    normal.pop_back();
    rd.H_normal = std::move(normal);
  }
  return rd;
}

/// Radon data of a plane fan's diagram for the ray at 1-based `first` and its opposite ray.
inline RadonData radon_data(const ShephardDiagram& dg, const PlaneFan& fan, long first) {
  const auto ell = opposite_ray(fan, first);
  if (!ell) throw Error(ErrorKind::NoOppositeRay, "no ray opposite to ray " + std::to_string(first), first);
  const auto rays = normalized_rays(fan.rays(), static_cast<std::size_t>(first));
  QVector y(fan.size());
  for (std::size_t k = 0; k < fan.size(); ++k) y[k] = dg.weights[k] * Rational(static_cast<long long>(rays[k].y));
  return radon_data(dg, y, static_cast<std::size_t>(first - 1), static_cast<std::size_t>(*ell - 1));
}

/// Signed value of H_normal . x - H_offset.
inline Rational side_of_h(const RadonData& rd, const QVector& x) { return dot(rd.H_normal, x) - rd.H_offset; }

// ---------------------------------------------------------------------------
// Wedges and their two projections

namespace detail {

/// Facets of the complex of projection(cm, removed), relabelled back to the labels of cm.
inline std::vector<std::vector<VertexLabel>> projected_facets(const CharMatrix& cm, VertexLabel removed) {
  const auto proj = projection(cm, removed);
  std::vector<std::vector<VertexLabel>> out;
  for (auto f : facet_labels(build_complex(proj.signature()))) {
    for (auto& l : f)
      if (l.vertex == removed.vertex && l.copy >= removed.copy) ++l.copy;
    out.push_back(std::move(f));
  }
  return out;
}

/// The diagram with one point removed: a Shephard diagram of the projection at that label.
inline ShephardDiagram drop_point(const ShephardDiagram& dg, VertexLabel label) {
  ShephardDiagram out = dg;
  const auto k = dg.find(label);
  if (!k) throw Error(ErrorKind::UnknownLabel, "no diagram point labelled " + label.str());
  out.labels.erase(out.labels.begin() + static_cast<std::ptrdiff_t>(*k));
  out.points.erase(out.points.begin() + static_cast<std::ptrdiff_t>(*k));
  if (!out.weights.empty()) out.weights.erase(out.weights.begin() + static_cast<std::ptrdiff_t>(*k));
  return out;
}

/// Whether rows (w_i, 1) of the diagram are annihilated by the weighted generators of cm (same label order).
inline bool is_diagram_of(const ShephardDiagram& dg, const CharMatrix& cm) {
  if (dg.size() != cm.columns.size() || dg.weights.size() != dg.size()) return false;
  for (std::size_t r = 0; r < cm.n; ++r)
    for (std::size_t c = 0; c <= dg.ambient_dim; ++c) {
      Rational s = 0;
      for (std::size_t k = 0; k < dg.size(); ++k)
        s += dg.weights[k] * Rational(static_cast<long long>(cm.columns[k][r])) *
             (c < dg.ambient_dim ? dg.points[k][c] : Rational(1));
      if (!is_zero(s)) return false;
    }
  QMatrix rows(dg.size(), dg.ambient_dim + 1);
  for (std::size_t k = 0; k < dg.size(); ++k) {
    for (std::size_t c = 0; c < dg.ambient_dim; ++c) rows(k, c) = dg.points[k][c];
    rows(k, dg.ambient_dim) = 1;
  }
  return rank(rows) == dg.size() - cm.n;
}

}  // namespace detail

/**
 * For a wedge matrix with exactly two copies a, b of one vertex: the
 * diagram minus the point of a (resp. b) is a diagram of the projection at
 * a (resp. b); S of the wedge is non-empty iff the cofaces of both
 * projections meet; and a witness for the wedge lies in every projected
 * coface.
 */
inline bool verify_wedge_shephard(const CharMatrix& cm, VertexLabel a, VertexLabel b) {
  if (a.vertex != b.vertex || a == b) throw Error(ErrorKind::NotWedged, "expected two copies of one vertex");
  int copies = 0;
  for (const auto& l : cm.labels)
    if (l.vertex == a.vertex) ++copies;
  if (copies != 2) throw Error(ErrorKind::NotWedged, "vertex " + std::to_string(a.vertex) + " needs exactly two copies");
  const auto cx = build_complex(cm.signature());
  const auto dg = shephard_diagram(cm);
  const auto whole = s_sigma(dg, facet_labels(cx));

  std::vector<PointFamily> joint;
  for (const auto removed : {a, b}) {
    if (!detail::is_diagram_of(detail::drop_point(dg, removed), projection(cm, removed))) return false;
    for (const auto& f : detail::projected_facets(cm, removed)) {
      auto cone = f;
      cone.push_back(removed);  // the removed point is never part of a projected coface
      joint.push_back(coface_points(dg, cone));
    }
  }
  const bool joint_feasible = relint_intersection(joint).feasible;
  if (joint_feasible != (whole.kind == PolytopalityCertificate::Kind::InteriorPoint)) return false;
  if (whole.point) {
    auto with_witness = joint;
    with_witness.push_back({*whole.point});
    if (!relint_intersection(with_witness).feasible) return false;
  }
  return true;
}

}  // namespace toricwedge
