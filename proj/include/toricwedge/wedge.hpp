#pragma once

/**
 * Iterated simplicial wedges P_m(J) of the m-gon boundary and characteristic
 * matrices over them.
 *
 * Vertex copies are labelled i_k with 1 <= i <= m and 1 <= k <= j_i and are
 * stored in the order 1_1, ..., 1_{j_1}, 2_1, ..., m_{j_m}. A facet of P_m(J)
 * consists of every copy of two adjacent polygon vertices i, i+1 together
 * with all but one copy of each remaining vertex.
 */

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "toricwedge/exactmath.hpp"
#include "toricwedge/planefan.hpp"

namespace toricwedge {

struct WedgeSignature {
  std::size_t m = 0;
  std::vector<int> J;  ///< J[i-1] = number of copies of polygon vertex i

  static WedgeSignature make(std::size_t m, std::vector<int> J) {
    if (m < 3) throw Error(ErrorKind::PreconditionViolated, "polygon needs m >= 3");
    if (J.size() != m) throw Error(ErrorKind::DimensionMismatch, "J must have length m");
    for (auto j : J)
      if (j < 1) throw Error(ErrorKind::PreconditionViolated, "entries of J must be positive");
    return {m, std::move(J)};
  }
  static WedgeSignature polygon(std::size_t m) { return make(m, std::vector<int>(m, 1)); }

  /// Number of vertices d = sum j_i.
  std::size_t vertex_count() const {
    std::size_t d = 0;
    for (auto j : J) d += static_cast<std::size_t>(j);
    return d;
  }
  /// Fan dimension n = d - m + 2.
  std::size_t fan_dimension() const { return vertex_count() - m + 2; }
  int copies(std::size_t i) const { return J[i - 1]; }

  friend bool operator==(const WedgeSignature&, const WedgeSignature&) = default;
};

struct VertexLabel {
  int vertex = 1;  ///< polygon vertex i, 1-based
  int copy = 1;    ///< k, 1-based

  std::string str() const { return std::to_string(vertex) + "_" + std::to_string(copy); }
  static VertexLabel parse(const std::string& text) {
    const auto sep = text.find('_');
    try {
      if (sep == std::string::npos) return {std::stoi(text), 1};
      return {std::stoi(text.substr(0, sep)), std::stoi(text.substr(sep + 1))};
    } catch (const std::exception&) {
      throw Error(ErrorKind::Parse, "bad vertex label '" + text + "'");
    }
  }
  friend auto operator<=>(const VertexLabel&, const VertexLabel&) = default;
};

using Facet = std::vector<std::size_t>;  ///< sorted indices into WedgeComplex::vertices

struct WedgeComplex {
  WedgeSignature signature;
  std::vector<VertexLabel> vertices;
  std::vector<Facet> facets;

  std::optional<std::size_t> find(VertexLabel label) const {
    auto it = std::lower_bound(vertices.begin(), vertices.end(), label);
    if (it == vertices.end() || *it != label) return std::nullopt;
    return static_cast<std::size_t>(it - vertices.begin());
  }
  std::size_t index(VertexLabel label) const {
    auto idx = find(label);
    if (!idx) throw Error(ErrorKind::UnknownLabel, "no vertex " + label.str());
    return *idx;
  }
};

inline std::vector<VertexLabel> wedge_vertices(const WedgeSignature& sig) {
  std::vector<VertexLabel> out;
  for (std::size_t i = 1; i <= sig.m; ++i)
    for (int k = 1; k <= sig.copies(i); ++k) out.push_back({static_cast<int>(i), k});
  return out;
}

inline WedgeComplex build_complex(const WedgeSignature& sig) {
  WedgeComplex cx{sig, wedge_vertices(sig), {}};
  for (std::size_t a = 1; a <= sig.m; ++a) {
    const std::size_t b = a % sig.m + 1;
    // The omitted copy of every vertex other than a, b; odometer over the choices.
    std::vector<std::size_t> others;
    for (std::size_t i = 1; i <= sig.m; ++i)
      if (i != a && i != b) others.push_back(i);
    std::vector<int> omit(others.size(), 1);
    for (;;) {
      Facet f;
      for (std::size_t v = 0; v < cx.vertices.size(); ++v) {
        const auto& lab = cx.vertices[v];
        const auto i = static_cast<std::size_t>(lab.vertex);
        if (i == a || i == b) {
          f.push_back(v);
          continue;
        }
        const auto pos = static_cast<std::size_t>(std::find(others.begin(), others.end(), i) - others.begin());
        if (lab.copy != omit[pos]) f.push_back(v);
      }
      cx.facets.push_back(std::move(f));
      std::size_t p = 0;
      while (p < omit.size() && omit[p] == sig.copies(others[p])) omit[p++] = 1;
      if (p == omit.size()) break;
      ++omit[p];
    }
  }
  std::sort(cx.facets.begin(), cx.facets.end());
  return cx;
}

/// Integer matrix with one labelled column per vertex of a wedge complex.
struct CharMatrix {
  std::size_t n = 0;                   ///< rows
  std::vector<VertexLabel> labels;     ///< column labels, in complex order
  std::vector<IntVector> columns;      ///< columns[c].size() == n

  std::int64_t& at(std::size_t row, std::size_t col) { return columns[col][row]; }
  std::int64_t at(std::size_t row, std::size_t col) const { return columns[col][row]; }

  std::optional<std::size_t> find(VertexLabel label) const {
    for (std::size_t c = 0; c < labels.size(); ++c)
      if (labels[c] == label) return c;
    return std::nullopt;
  }

  /// Signature implied by the labels (m = largest vertex, j_i = largest copy of i).
  WedgeSignature signature() const {
    int m = 0;
    for (const auto& l : labels) m = std::max(m, l.vertex);
    std::vector<int> J(static_cast<std::size_t>(m), 0);
    for (const auto& l : labels) J[static_cast<std::size_t>(l.vertex - 1)] = std::max(J[static_cast<std::size_t>(l.vertex - 1)], l.copy);
    return WedgeSignature::make(static_cast<std::size_t>(m), std::move(J));
  }

  QMatrix to_qmatrix() const {
    QMatrix q(n, columns.size());
    for (std::size_t c = 0; c < columns.size(); ++c)
      for (std::size_t r = 0; r < n; ++r) q(r, c) = Rational(static_cast<long long>(columns[c][r]));
    return q;
  }

  friend bool operator==(const CharMatrix&, const CharMatrix&) = default;
};

inline CharMatrix to_char_matrix(const PlaneFan& fan) {
  CharMatrix cm;
  cm.n = 2;
  for (std::size_t i = 0; i < fan.size(); ++i) {
    cm.labels.push_back({static_cast<int>(i + 1), 1});
    cm.columns.push_back({fan.rays()[i].x, fan.rays()[i].y});
  }
  return cm;
}

/// Columns of a 2-row matrix as a ray list.
inline RayList as_rays(const CharMatrix& cm) {
  if (cm.n != 2) throw Error(ErrorKind::DimensionMismatch, "expected a 2-row matrix");
  RayList rays;
  for (const auto& c : cm.columns) rays.push_back({c[0], c[1]});
  return rays;
}

inline void check_labels(const CharMatrix& cm, const WedgeComplex& cx) {
  if (cm.labels != cx.vertices) throw Error(ErrorKind::LabelMismatch, "matrix columns do not match complex vertices");
  for (const auto& c : cm.columns)
    if (c.size() != cm.n) throw Error(ErrorKind::DimensionMismatch, "column length differs from row count");
}

inline std::int64_t facet_minor(const CharMatrix& cm, const Facet& f) {
  if (f.size() != cm.n) throw Error(ErrorKind::NotSquare, "facet size differs from the number of rows");
  std::vector<IntVector> sub(cm.n, IntVector(cm.n));
  for (std::size_t c = 0; c < f.size(); ++c)
    for (std::size_t r = 0; r < cm.n; ++r) sub[r][c] = cm.columns[f[c]][r];
  return integer_det(std::move(sub));
}

/// Every facet minor equals +-1.
inline bool check_nonsingular(const CharMatrix& cm, const WedgeComplex& cx) {
  check_labels(cm, cx);
  for (const auto& f : cx.facets) {
    const auto d = facet_minor(cm, f);
    if (d != 1 && d != -1) return false;
  }
  return true;
}

namespace detail {

/**
 * Quotient of Z^n by the primitive column `col`: integer row operations
 * reduce that column to a single +-1 entry, then its row and the column are
 * removed. Returns false if the column is not primitive.
 */
inline bool quotient_by_column(CharMatrix& cm, std::size_t col) {
  auto& cols = cm.columns;
  for (;;) {
    std::size_t pivot = cm.n;
    for (std::size_t r = 0; r < cm.n; ++r) {
      const auto v = cols[col][r];
      if (v != 0 && (pivot == cm.n || std::llabs(v) < std::llabs(cols[col][pivot]))) pivot = r;
    }
    if (pivot == cm.n) return false;
    bool reduced = true;
    const auto p = cols[col][pivot];
    for (std::size_t r = 0; r < cm.n; ++r) {
      if (r == pivot || cols[col][r] == 0) continue;
      const auto q = cols[col][r] / p;
      for (auto& c : cols) c[r] -= q * c[pivot];
      if (cols[col][r] != 0) reduced = false;
    }
    if (!reduced) continue;
    if (p != 1 && p != -1) return false;
    for (auto& c : cols) c.erase(c.begin() + static_cast<std::ptrdiff_t>(pivot));
    cols.erase(cols.begin() + static_cast<std::ptrdiff_t>(col));
    cm.labels.erase(cm.labels.begin() + static_cast<std::ptrdiff_t>(col));
    --cm.n;
    return true;
  }
}

}  // namespace detail

/**
 * Characteristic matrix over the complex with copy `label` deleted: the
 * quotient of the lattice by that column. Remaining copies of the same
 * vertex are renumbered consecutively.
 */
inline CharMatrix projection(const CharMatrix& cm, VertexLabel label) {
  const auto col = cm.find(label);
  if (!col) throw Error(ErrorKind::UnknownLabel, "no column " + label.str());
  int copies = 0;
  for (const auto& l : cm.labels)
    if (l.vertex == label.vertex) ++copies;
  if (copies < 2) throw Error(ErrorKind::NotWedged, "vertex " + std::to_string(label.vertex) + " has a single copy");
  CharMatrix out = cm;
  if (!detail::quotient_by_column(out, *col))
    throw Error(ErrorKind::NotNonSingular, "column " + label.str() + " is not primitive");
  for (auto& l : out.labels)
    if (l.vertex == label.vertex && l.copy > label.copy) --l.copy;
  return out;
}

/// A vertex of G(J): one chosen copy alpha_i per polygon vertex.
using GridVertex = std::vector<int>;

/**
 * Projection onto the polygon keeping copy alpha_i of each vertex i: the
 * quotient by every other copy. Result is the 2 x m matrix labelled 1..m,
 * or nullopt when some quotient column fails to be primitive.
 */
inline std::optional<RayList> project_to_polygon(const CharMatrix& cm, const GridVertex& alpha) {
  CharMatrix work = cm;
  for (std::size_t c = work.labels.size(); c-- > 0;) {
    const auto& l = work.labels[c];
    if (l.copy != alpha[static_cast<std::size_t>(l.vertex - 1)])
      if (!detail::quotient_by_column(work, c)) return std::nullopt;
  }
  if (work.n != 2) return std::nullopt;
  return as_rays(work);
}

/// The ray list with the orientation and basis fixed by sending v_1, v_2 to (1,0), (0,1).
inline std::optional<PlaneFan> as_plane_fan(const RayList& rays) {
  if (rays.size() < 3 || std::abs(det(rays[0], rays[1])) != 1) return std::nullopt;
  try {
    return validate(normalized_rays(rays, 1));
  } catch (const Error&) {
    return std::nullopt;
  }
}

}  // namespace toricwedge
