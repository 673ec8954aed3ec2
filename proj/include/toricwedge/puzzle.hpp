#pragma once

/**
 * Shifts between plane fans, the wedge graph G(J), puzzles, and their
 * characteristic matrices in standard form.
 *
 * G(J) is the 1-skeleton of the product of simplices with j_i vertices each;
 * its vertices are tuples alpha with 1 <= alpha_i <= j_i and an edge of
 * color i joins tuples differing only in coordinate i.
 *
 * Standard form over P_m(J) (n = d - m + 2 rows): rows 1-2 hold the base fan
 * in the columns i_1 and zeros in every other copy. Each extra copy i_k adds
 * a row with -1 at i_1, +1 at i_k and -det(v_i, v_j) * e at j_1 for every ray
 * j strictly between the opposite ray of v_i and v_i (counterclockwise from
 * the opposite ray), e being the shift from the base fan to the fan at the
 * grid vertex whose only non-1 coordinate is alpha_i = k.
 */

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <vector>

#include "toricwedge/parallel.hpp"
#include "toricwedge/planefan.hpp"
#include "toricwedge/wedge.hpp"

namespace toricwedge {

/// 1-based position of the ray -v_i, if present.
inline std::optional<long> opposite_ray(const PlaneFan& fan, long i) {
  const auto target = -fan.ray(i);
  for (long p = 1; p <= static_cast<long>(fan.size()); ++p)
    if (fan.ray(p) == target) return p;
  return std::nullopt;
}

/// Positions strictly between the opposite ray ell and i, counterclockwise from ell.
inline std::vector<long> lower_block(const PlaneFan& fan, long i, long ell) {
  const long m = static_cast<long>(fan.size());
  std::vector<long> out;
  for (long p = ell % m + 1; p != i; p = p % m + 1) out.push_back(p);
  return out;
}

inline PlaneFan shift(const PlaneFan& fan, long color, std::int64_t e) {
  if (e == 0) return fan;
  const auto ell = opposite_ray(fan, color);
  if (!ell)
    throw Error(ErrorKind::NoOppositeRay, "no ray opposite to ray " + std::to_string(color), color);
  const auto vi = fan.ray(color);
  RayList rays = fan.rays();
  for (auto p : lower_block(fan, color, *ell)) {
    auto& v = rays[static_cast<std::size_t>(p - 1)];
    v = v - (det(vi, v) * e) * vi;
  }
  return validate(std::move(rays));
}

inline bool same_up_to_basis(const PlaneFan& a, const PlaneFan& b) {
  return a.size() == b.size() && normalized_rays(a.rays(), 1) == normalized_rays(b.rays(), 1);
}

/// The shift parameter carrying f1 to f2 along color i, if any (0 when equal).
inline std::optional<std::int64_t> is_edge(const PlaneFan& f1, const PlaneFan& f2, long color) {
  if (f1.size() != f2.size()) return std::nullopt;
  const auto a = validate(normalized_rays(f1.rays(), static_cast<std::size_t>(color)));
  const auto b = normalized_rays(f2.rays(), static_cast<std::size_t>(color));
  if (a.rays() == b) return 0;
  const auto ell = opposite_ray(a, color);
  if (!ell) return std::nullopt;
  // In this basis v_i = (1,0), v_ell = (-1,0) and the next ray has y = -1.
  const auto next = static_cast<std::size_t>(*ell % static_cast<long>(a.size()));
  const std::int64_t e = b[next].x - a.rays()[next].x;
  if (shift(a, color, e).rays() != b) return std::nullopt;
  return e;
}

// ---------------------------------------------------------------------------
// The grid G(J)

inline std::vector<GridVertex> grid_vertices(const WedgeSignature& sig) {
  std::vector<GridVertex> out;
  GridVertex alpha(sig.m, 1);
  for (;;) {
    out.push_back(alpha);
    std::size_t p = sig.m;
    while (p > 0 && alpha[p - 1] == sig.J[p - 1]) alpha[--p] = 1;
    if (p == 0) break;
    ++alpha[p - 1];
  }
  return out;
}

struct GridEdge {
  int color = 1;
  GridVertex from, to;  ///< from[color-1] < to[color-1]
  friend auto operator<=>(const GridEdge&, const GridEdge&) = default;
};

inline std::vector<GridEdge> grid_edges(const WedgeSignature& sig) {
  std::vector<GridEdge> out;
  for (const auto& alpha : grid_vertices(sig))
    for (std::size_t i = 0; i < sig.m; ++i)
      for (int k = alpha[i] + 1; k <= sig.J[i]; ++k) {
        auto beta = alpha;
        beta[i] = k;
        out.push_back({static_cast<int>(i + 1), alpha, beta});
      }
  return out;
}

/// A 2-face of G(J) with two colors: corners c00, c10 (color i moved), c01 (color j moved), c11.
struct GridSquare {
  int color_i = 1, color_j = 2;
  std::array<GridVertex, 4> corners;
};

inline std::vector<GridSquare> grid_squares(const WedgeSignature& sig) {
  std::vector<GridSquare> out;
  for (const auto& alpha : grid_vertices(sig))
    for (std::size_t i = 0; i < sig.m; ++i)
      for (std::size_t j = i + 1; j < sig.m; ++j)
        for (int a = alpha[i] + 1; a <= sig.J[i]; ++a)
          for (int b = alpha[j] + 1; b <= sig.J[j]; ++b) {
            GridSquare sq{static_cast<int>(i + 1), static_cast<int>(j + 1), {alpha, alpha, alpha, alpha}};
            sq.corners[1][i] = a;
            sq.corners[2][j] = b;
            sq.corners[3][i] = a;
            sq.corners[3][j] = b;
            out.push_back(std::move(sq));
          }
  return out;
}

// ---------------------------------------------------------------------------
// Standard forms

/// shifts[i-1][k-1]: shift parameter of copy i_k relative to the base fan (entry k = 1 ignored).
using ShiftTable = std::vector<std::vector<std::int64_t>>;

inline ShiftTable zero_shifts(const WedgeSignature& sig) {
  ShiftTable t;
  for (auto j : sig.J) t.emplace_back(static_cast<std::size_t>(j), 0);
  return t;
}

inline CharMatrix standard_form(const WedgeSignature& sig, const PlaneFan& base, const ShiftTable& shifts) {
  if (base.size() != sig.m) throw Error(ErrorKind::DimensionMismatch, "base fan has the wrong number of rays");
  CharMatrix cm;
  cm.n = sig.fan_dimension();
  cm.labels = wedge_vertices(sig);
  cm.columns.assign(cm.labels.size(), IntVector(cm.n, 0));
  std::vector<std::size_t> first_copy(sig.m + 1);
  for (std::size_t c = 0; c < cm.labels.size(); ++c)
    if (cm.labels[c].copy == 1) first_copy[static_cast<std::size_t>(cm.labels[c].vertex)] = c;
  for (std::size_t i = 1; i <= sig.m; ++i) {
    const auto v = base.ray(static_cast<long>(i));
    cm.columns[first_copy[i]][0] = v.x;
    cm.columns[first_copy[i]][1] = v.y;
  }
  std::size_t row = 2;
  for (std::size_t c = 0; c < cm.labels.size(); ++c) {
    const auto lab = cm.labels[c];
    if (lab.copy == 1) continue;
    const auto i = static_cast<long>(lab.vertex);
    cm.columns[first_copy[static_cast<std::size_t>(i)]][row] = -1;
    cm.columns[c][row] = 1;
    const auto e = shifts[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(lab.copy - 1)];
    if (e != 0) {
      const auto ell = opposite_ray(base, i);
      if (!ell) throw Error(ErrorKind::NoOppositeRay, "no ray opposite to ray " + std::to_string(i), i);
      for (auto p : lower_block(base, i, *ell))
        cm.columns[first_copy[static_cast<std::size_t>(p)]][row] = -det(base.ray(i), base.ray(p)) * e;
    }
    ++row;
  }
  return cm;
}

/// Projection onto a grid vertex as a fan in the basis v_1 = (1,0), v_2 = (0,1), if it is one.
inline std::optional<PlaneFan> vertex_fan(const CharMatrix& cm, const GridVertex& alpha) {
  const auto rays = project_to_polygon(cm, alpha);
  if (!rays) return std::nullopt;
  return as_plane_fan(*rays);
}

// ---------------------------------------------------------------------------
// Puzzles

struct PuzzleEdge {
  int color = 1;
  GridVertex from, to;
  std::int64_t e = 0;
  friend bool operator==(const PuzzleEdge&, const PuzzleEdge&) = default;
};

struct Puzzle {
  WedgeSignature signature;
  std::map<GridVertex, PlaneFan> assignment;
  std::vector<PuzzleEdge> edges;  ///< in grid_edges order

  const PlaneFan& base() const { return assignment.at(GridVertex(signature.m, 1)); }
  const PlaneFan& at(const GridVertex& alpha) const {
    auto it = assignment.find(alpha);
    if (it == assignment.end()) throw Error(ErrorKind::InvalidPuzzle, "grid vertex without a fan");
    return it->second;
  }
};

/// Fans at every grid vertex of the matrix and the shift on each grid edge, if these exist.
inline std::optional<Puzzle> puzzle_from_matrix(const CharMatrix& cm) {
  Puzzle p{cm.signature(), {}, {}};
  for (const auto& alpha : grid_vertices(p.signature)) {
    auto fan = vertex_fan(cm, alpha);
    if (!fan) return std::nullopt;
    p.assignment.emplace(alpha, std::move(*fan));
  }
  for (const auto& ge : grid_edges(p.signature)) {
    const auto e = is_edge(p.assignment.at(ge.from), p.assignment.at(ge.to), ge.color);
    if (!e) return std::nullopt;
    p.edges.push_back({ge.color, ge.from, ge.to, *e});
  }
  return p;
}

/// Rebuilds the assignment from the base fan by following edges outward from the all-ones vertex.
inline Puzzle puzzle_from_edges(const WedgeSignature& sig, const PlaneFan& base, std::vector<PuzzleEdge> edges) {
  Puzzle p{sig, {}, {}};
  p.assignment.emplace(GridVertex(sig.m, 1), base);
  bool grew = true;
  while (grew) {
    grew = false;
    for (const auto& pe : edges) {
      const bool has_from = p.assignment.count(pe.from) > 0, has_to = p.assignment.count(pe.to) > 0;
      if (has_from == has_to) continue;
      try {
        if (has_from) p.assignment.emplace(pe.to, shift(p.assignment.at(pe.from), pe.color, pe.e));
        else p.assignment.emplace(pe.from, shift(p.assignment.at(pe.to), pe.color, -pe.e));
      } catch (const Error& err) {
        throw Error(ErrorKind::InvalidPuzzle, std::string("edge does not define a shift: ") + err.what());
      }
      grew = true;
    }
  }
  // Canonical edge order; a missing edge is left for validate_puzzle to report.
  std::vector<PuzzleEdge> ordered;
  for (const auto& ge : grid_edges(sig))
    for (const auto& pe : edges)
      if (pe.color == ge.color && pe.from == ge.from && pe.to == ge.to) {
        ordered.push_back(pe);
        break;
      } else if (pe.color == ge.color && pe.from == ge.to && pe.to == ge.from) {
        ordered.push_back({ge.color, ge.from, ge.to, -pe.e});
        break;
      }
  p.edges = std::move(ordered);
  return p;
}

/// The 4-row standard form over wed_{i,j} P_m of a square with base lambda and shifts e (color i), f (color j).
inline CharMatrix square_standard_form(const PlaneFan& lambda, int i, std::int64_t e, int j, std::int64_t f) {
  std::vector<int> J(lambda.size(), 1);
  J[static_cast<std::size_t>(i - 1)] = 2;
  J[static_cast<std::size_t>(j - 1)] = 2;
  const auto sig = WedgeSignature::make(lambda.size(), std::move(J));
  auto shifts = zero_shifts(sig);
  shifts[static_cast<std::size_t>(i - 1)][1] = e;
  shifts[static_cast<std::size_t>(j - 1)][1] = f;
  return standard_form(sig, lambda, shifts);
}

/**
 * fans = (lambda at 00, 10 along color i, 01 along color j, 11). True iff
 * the standard form built from the three corners around lambda is
 * non-singular and projects onto the fourth corner.
 */
inline bool realizable_square(const std::array<PlaneFan, 4>& fans, int i, int j) {
  if (i == j) throw Error(ErrorKind::NotASquare, "a square needs two distinct colors");
  const auto e = is_edge(fans[0], fans[1], i);
  const auto f = is_edge(fans[0], fans[2], j);
  if (!e || !f || !is_edge(fans[1], fans[3], j) || !is_edge(fans[2], fans[3], i))
    throw Error(ErrorKind::NotASquare, "the four fans are not joined by shifts of the given colors");
  const auto cm = square_standard_form(fans[0], i, *e, j, *f);
  if (!check_nonsingular(cm, build_complex(cm.signature()))) return false;
  GridVertex alpha(fans[0].size(), 1);
  alpha[static_cast<std::size_t>(i - 1)] = 2;
  alpha[static_cast<std::size_t>(j - 1)] = 2;
  const auto corner = vertex_fan(cm, alpha);
  return corner && same_up_to_basis(*corner, fans[3]);
}

inline bool validate_puzzle(const Puzzle& p) {
  const auto& sig = p.signature;
  const auto vertices = grid_vertices(sig);
  if (p.assignment.size() != vertices.size()) return false;
  for (const auto& alpha : vertices) {
    auto it = p.assignment.find(alpha);
    if (it == p.assignment.end() || it->second.size() != sig.m) return false;
  }
  const auto ges = grid_edges(sig);
  if (p.edges.size() != ges.size()) return false;
  for (std::size_t k = 0; k < ges.size(); ++k) {
    const auto& pe = p.edges[k];
    if (pe.color != ges[k].color || pe.from != ges[k].from || pe.to != ges[k].to) return false;
    const auto e = is_edge(p.at(pe.from), p.at(pe.to), pe.color);
    if (!e || *e != pe.e) return false;
  }
  for (const auto& sq : grid_squares(sig)) {
    const std::array<PlaneFan, 4> fans{p.at(sq.corners[0]), p.at(sq.corners[1]), p.at(sq.corners[2]),
                                       p.at(sq.corners[3])};
    if (!realizable_square(fans, sq.color_i, sq.color_j)) return false;
  }
  return true;
}

inline bool is_irreducible(const Puzzle& p) {
  return std::all_of(p.edges.begin(), p.edges.end(), [](const PuzzleEdge& pe) { return pe.e != 0; });
}

/// Shift table read off the edges leaving the all-ones vertex.
inline ShiftTable shifts_of(const Puzzle& p) {
  auto table = zero_shifts(p.signature);
  const GridVertex ones(p.signature.m, 1);
  for (const auto& pe : p.edges)
    if (pe.from == ones) table[static_cast<std::size_t>(pe.color - 1)][static_cast<std::size_t>(pe.to[static_cast<std::size_t>(pe.color - 1)] - 1)] = pe.e;
  return table;
}

inline CharMatrix assemble_matrix(const Puzzle& p) {
  if (!validate_puzzle(p)) throw Error(ErrorKind::InvalidPuzzle, "puzzle fails edge or square conditions");
  return standard_form(p.signature, p.base(), shifts_of(p));
}

// ---------------------------------------------------------------------------
// Canonical keys and enumeration

namespace detail {

/// Dihedral relabeling of the polygon: new position p comes from old_vertex(p).
struct Relabel {
  bool reflect = false;
  long start = 1;
  std::size_t m = 0;

  std::size_t old_vertex(std::size_t p) const {
    const long mm = static_cast<long>(m), pp = static_cast<long>(p);
    const long q = reflect ? (start - 1) - (pp - 1) : (pp - 1) + (start - 1);
    return static_cast<std::size_t>(((q % mm) + mm) % mm + 1);
  }
  RayList apply(const RayList& rays) const { return reflect ? reflect_labels(rays, start) : rotate_labels(rays, start); }
};

inline std::vector<Relabel> dihedral_group(std::size_t m) {
  std::vector<Relabel> out;
  for (long s = 1; s <= static_cast<long>(m); ++s) {
    out.push_back({false, s, m});
    out.push_back({true, s, m});
  }
  return out;
}

using PuzzleKey = std::vector<RayList>;

inline void for_each_permutation_tuple(const std::vector<int>& sizes, std::size_t at, std::vector<std::vector<int>>& cur,
                                       const std::function<void(const std::vector<std::vector<int>>&)>& fn) {
  if (at == sizes.size()) {
    fn(cur);
    return;
  }
  std::vector<int> perm(static_cast<std::size_t>(sizes[at]));
  std::iota(perm.begin(), perm.end(), 1);
  do {
    cur[at] = perm;
    for_each_permutation_tuple(sizes, at + 1, cur, fn);
  } while (std::next_permutation(perm.begin(), perm.end()));
}

/// Least key over J-preserving dihedral relabelings and permutations of the copies within each color.
inline PuzzleKey canonical_key(const Puzzle& p) {
  const auto& sig = p.signature;
  const auto vertices = grid_vertices(sig);
  PuzzleKey best;
  for (const auto& g : dihedral_group(sig.m)) {
    bool preserves = true;
    for (std::size_t q = 1; q <= sig.m; ++q)
      if (sig.J[q - 1] != sig.J[g.old_vertex(q) - 1]) preserves = false;
    if (!preserves) continue;
    std::map<GridVertex, RayList> relabeled;
    for (const auto& [alpha, fan] : p.assignment) {
      GridVertex beta(sig.m);
      for (std::size_t q = 1; q <= sig.m; ++q) beta[q - 1] = alpha[g.old_vertex(q) - 1];
      relabeled.emplace(beta, g.apply(fan.rays()));
    }
    std::vector<std::vector<int>> cur(sig.m);
    for_each_permutation_tuple(sig.J, 0, cur, [&](const std::vector<std::vector<int>>& perms) {
      PuzzleKey key;
      key.reserve(vertices.size());
      for (const auto& beta : vertices) {
        GridVertex src(sig.m);
        for (std::size_t q = 0; q < sig.m; ++q) src[q] = perms[q][static_cast<std::size_t>(beta[q] - 1)];
        key.push_back(normalized_rays(relabeled.at(src), 1));
        if (!best.empty() && key.size() <= best.size()) {
          const auto k = key.size() - 1;
          if (key[k] > best[k] && std::equal(key.begin(), key.begin() + static_cast<std::ptrdiff_t>(k), best.begin()))
            return;
        }
      }
      if (best.empty() || key < best) best = std::move(key);
    });
  }
  return best;
}

inline Puzzle puzzle_from_key(const WedgeSignature& sig, const PuzzleKey& key) {
  Puzzle p{sig, {}, {}};
  const auto vertices = grid_vertices(sig);
  for (std::size_t k = 0; k < vertices.size(); ++k) p.assignment.emplace(vertices[k], validate(key[k]));
  for (const auto& ge : grid_edges(sig)) {
    const auto e = is_edge(p.assignment.at(ge.from), p.assignment.at(ge.to), ge.color);
    if (!e) throw std::logic_error("canonical relabeling broke a grid edge");
    p.edges.push_back({ge.color, ge.from, ge.to, *e});
  }
  return p;
}

/// Every dihedral relabeling of every fan class, normalized, without repeats.
inline std::vector<PlaneFan> labeled_bases(std::size_t m, std::int64_t depth) {
  std::set<PlaneFan> out;
  for (const auto& fan : enumerate_fans(m, depth))
    for (const auto& g : dihedral_group(m)) out.insert(validate(normalized_rays(g.apply(fan.rays()), 1)));
  return {out.begin(), out.end()};
}

inline bool matrix_gives_puzzle(const CharMatrix& cm, const WedgeComplex& cx) {
  if (!check_nonsingular(cm, cx)) return false;
  const auto p = puzzle_from_matrix(cm);
  return p && validate_puzzle(*p);
}

}  // namespace detail

/**
 * All valid puzzles over the signature with base fans from
 * enumerate_fans(m, base_depth) and shift parameters in [-e_bound, e_bound],
 * one per class, sorted by canonical key.
 */
inline std::vector<Puzzle> enumerate_puzzles(const WedgeSignature& sig, std::int64_t base_depth, std::int64_t e_bound,
                                             std::size_t workers = default_workers()) {
  const auto bases = detail::labeled_bases(sig.m, base_depth);
  const auto cx = build_complex(sig);

  struct Slot {
    std::size_t color;  // 0-based
    std::size_t copy;   // 0-based, >= 1
  };
  std::vector<Slot> slots;
  for (std::size_t i = 0; i < sig.m; ++i)
    for (int k = 1; k < sig.J[i]; ++k) slots.push_back({i, static_cast<std::size_t>(k)});

  auto per_base = [&](const PlaneFan& base) {
    std::vector<detail::PuzzleKey> keys;
    std::vector<std::vector<std::int64_t>> range(sig.m);
    for (std::size_t i = 0; i < sig.m; ++i) {
      if (opposite_ray(base, static_cast<long>(i + 1)))
        for (std::int64_t e = -e_bound; e <= e_bound; ++e) range[i].push_back(e);
      else
        range[i].push_back(0);
    }
    std::map<std::array<std::int64_t, 4>, bool> square_ok;
    auto pair_ok = [&](std::size_t i, std::int64_t e, std::size_t j, std::int64_t f) {
      if (e == 0 || f == 0) return true;
      const std::array<std::int64_t, 4> key{static_cast<std::int64_t>(i), e, static_cast<std::int64_t>(j), f};
      auto it = square_ok.find(key);
      if (it != square_ok.end()) return it->second;
      const auto cm = square_standard_form(base, static_cast<int>(i + 1), e, static_cast<int>(j + 1), f);
      const bool ok = detail::matrix_gives_puzzle(cm, build_complex(cm.signature()));
      square_ok.emplace(key, ok);
      return ok;
    };
    auto shifts = zero_shifts(sig);
    std::function<void(std::size_t)> dfs = [&](std::size_t at) {
      if (at == slots.size()) {
        const auto cm = standard_form(sig, base, shifts);
        if (!check_nonsingular(cm, cx)) return;
        const auto p = puzzle_from_matrix(cm);
        if (!p || !validate_puzzle(*p)) return;
        keys.push_back(detail::canonical_key(*p));
        return;
      }
      const auto s = slots[at];
      for (auto e : range[s.color]) {
        bool ok = true;
        for (std::size_t b = 0; b < at && ok; ++b)
          if (slots[b].color != s.color)
            ok = pair_ok(slots[b].color, shifts[slots[b].color][slots[b].copy], s.color, e);
        if (!ok) continue;
        shifts[s.color][s.copy] = e;
        dfs(at + 1);
      }
      shifts[s.color][s.copy] = 0;
    };
    dfs(0);
    return keys;
  };

  const auto results = parallel_map(bases, per_base, workers);
  std::set<detail::PuzzleKey> unique;
  for (const auto& keys : results) unique.insert(keys.begin(), keys.end());
  std::vector<Puzzle> out;
  out.reserve(unique.size());
  for (const auto& key : unique) out.push_back(detail::puzzle_from_key(sig, key));
  return out;
}

}  // namespace toricwedge
