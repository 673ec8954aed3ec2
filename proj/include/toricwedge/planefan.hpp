#pragma once

/**
 * Complete non-singular fans in the plane.
 *
 * A fan is stored as its primitive ray generators in counterclockwise order.
 * Validity is checked with integer arithmetic only: every ray primitive, no
 * ray repeated, every consecutive determinant (wrap-around included) equal to
 * +1, and the rays winding exactly once around the origin.
 *
 * Positions are 1-based throughout the public interface, matching the usual
 * labelling v_1, ..., v_m of the rays.
 */

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "toricwedge/error.hpp"

namespace toricwedge {

struct LatticeVector2 {
  std::int64_t x = 0;
  std::int64_t y = 0;

  friend auto operator<=>(const LatticeVector2&, const LatticeVector2&) = default;
  friend LatticeVector2 operator+(LatticeVector2 a, LatticeVector2 b) { return {a.x + b.x, a.y + b.y}; }
  friend LatticeVector2 operator-(LatticeVector2 a, LatticeVector2 b) { return {a.x - b.x, a.y - b.y}; }
  friend LatticeVector2 operator-(LatticeVector2 a) { return {-a.x, -a.y}; }
  friend LatticeVector2 operator*(std::int64_t k, LatticeVector2 a) { return {k * a.x, k * a.y}; }
};

using RayList = std::vector<LatticeVector2>;

inline std::int64_t det(LatticeVector2 a, LatticeVector2 b) { return a.x * b.y - a.y * b.x; }

inline bool is_primitive(LatticeVector2 v) { return std::gcd(v.x, v.y) == 1; }

/// 2x2 integer matrix acting on column vectors.
struct Unimodular2 {
  std::int64_t a = 1, b = 0, c = 0, d = 1;
  LatticeVector2 operator()(LatticeVector2 v) const { return {a * v.x + b * v.y, c * v.x + d * v.y}; }
  std::int64_t determinant() const { return a * d - b * c; }
};

/**
 * The unique integer matrix sending `u` to (1,0) and `w` to (0,1). Requires
 * det(u, w) = +-1.
 */
inline Unimodular2 basis_to_standard(LatticeVector2 u, LatticeVector2 w) {
  const auto dt = det(u, w);
  if (dt != 1 && dt != -1) throw Error(ErrorKind::NotUnimodular, "basis vectors do not span the lattice", 0, dt);
  // inverse of [[u.x, w.x], [u.y, w.y]]
  return {dt * w.y, -dt * w.x, -dt * u.y, dt * u.x};
}

inline RayList transform(const RayList& rays, const Unimodular2& g) {
  RayList out;
  out.reserve(rays.size());
  for (auto v : rays) out.push_back(g(v));
  return out;
}

/// Rays re-expressed in the basis sending the rays at `first` and `first+1` to (1,0), (0,1).
inline RayList normalized_rays(const RayList& rays, std::size_t first = 1) {
  const std::size_t m = rays.size();
  const auto u = rays[(first - 1) % m], w = rays[first % m];
  return transform(rays, basis_to_standard(u, w));
}

class PlaneFan {
 public:
  /// Checks every invariant and throws on the first violation.
  static PlaneFan validate(RayList rays) {
    const std::size_t m = rays.size();
    if (m < 3) throw Error(ErrorKind::TooFewRays, "a complete fan needs at least 3 rays, got " + std::to_string(m));
    for (std::size_t i = 0; i < m; ++i)
      if (!is_primitive(rays[i]))
        throw Error(ErrorKind::NotPrimitive, "ray " + std::to_string(i + 1) + " is not primitive",
                    static_cast<long>(i + 1));
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i + 1; j < m; ++j)
        if (rays[i] == rays[j])
          throw Error(ErrorKind::DuplicateRay, "rays " + std::to_string(i + 1) + " and " + std::to_string(j + 1) +
                                                   " coincide", static_cast<long>(j + 1));
    for (std::size_t i = 0; i < m; ++i) {
      const auto d = det(rays[i], rays[(i + 1) % m]);
      if (d != 1)
        throw Error(ErrorKind::NotUnimodular,
                    "det(v" + std::to_string(i + 1) + ", v" + std::to_string((i + 1) % m + 1) + ") = " +
                        std::to_string(d), static_cast<long>(i + 1), static_cast<long>(d));
    }
    const auto turns = winding_number(rays);
    if (turns != 1)
      throw Error(ErrorKind::BadWinding, "rays wind " + std::to_string(turns) + " times around the origin", 0,
                  static_cast<long>(turns));
    return PlaneFan(std::move(rays));
  }

  std::size_t size() const noexcept { return rays_.size(); }
  const RayList& rays() const noexcept { return rays_; }
  /// 1-based, cyclic.
  LatticeVector2 ray(long position) const {
    const long m = static_cast<long>(rays_.size());
    return rays_[static_cast<std::size_t>(((position - 1) % m + m) % m)];
  }

  friend bool operator==(const PlaneFan&, const PlaneFan&) = default;
  friend bool operator<(const PlaneFan& a, const PlaneFan& b) { return a.rays_ < b.rays_; }

  /// Number of counterclockwise turns, assuming consecutive determinants are positive.
  static long winding_number(const RayList& rays) {
    auto half = [](LatticeVector2 v) { return (v.y > 0 || (v.y == 0 && v.x > 0)) ? 0 : 1; };
    auto before = [&](LatticeVector2 a, LatticeVector2 b) {
      return half(a) != half(b) ? half(a) < half(b) : det(a, b) > 0;
    };
    long wraps = 0;
    for (std::size_t i = 0; i < rays.size(); ++i)
      if (!before(rays[i], rays[(i + 1) % rays.size()])) ++wraps;
    return wraps;
  }

 private:
  explicit PlaneFan(RayList rays) : rays_(std::move(rays)) {}
  RayList rays_;
};

inline PlaneFan validate(RayList rays) { return PlaneFan::validate(std::move(rays)); }

inline PlaneFan cp2_fan() { return validate({{1, 0}, {0, 1}, {-1, -1}}); }

inline PlaneFan hirzebruch_fan(std::int64_t d) { return validate({{1, 0}, {0, 1}, {-1, d}, {0, -1}}); }

struct RotationNumbers {
  std::vector<std::int64_t> a;
  friend bool operator==(const RotationNumbers&, const RotationNumbers&) = default;
};

/// The integers a_i with v_{i-1} + v_{i+1} = a_i v_i.
inline RotationNumbers rotation_numbers(const PlaneFan& fan) {
  const long m = static_cast<long>(fan.size());
  RotationNumbers out;
  out.a.reserve(fan.size());
  for (long i = 1; i <= m; ++i) {
    // det(v_{i-1}, v_{i+1}) = a_i det(v_{i-1}, v_i) = a_i
    const auto a = det(fan.ray(i - 1), fan.ray(i + 1));
    const auto sum = fan.ray(i - 1) + fan.ray(i + 1);
    if (sum != a * fan.ray(i)) throw std::logic_error("rotation identity fails on a validated fan");
    out.a.push_back(a);
  }
  return out;
}

/// Inserts v_i + v_{i+1} between positions i and i+1 (after the last ray when i = m).
inline PlaneFan blow_up(const PlaneFan& fan, long i) {
  const long m = static_cast<long>(fan.size());
  if (i < 1 || i > m) throw Error(ErrorKind::PreconditionViolated, "blow-up position out of range", i);
  RayList rays = fan.rays();
  rays.insert(rays.begin() + i, fan.ray(i) + fan.ray(i + 1));
  return validate(std::move(rays));
}

inline std::vector<long> blow_down_positions(const PlaneFan& fan) {
  const auto rn = rotation_numbers(fan);
  std::vector<long> out;
  for (std::size_t i = 0; i < rn.a.size(); ++i)
    if (rn.a[i] == 1) out.push_back(static_cast<long>(i + 1));
  return out;
}

inline PlaneFan blow_down(const PlaneFan& fan, long i) {
  const long m = static_cast<long>(fan.size());
  if (i < 1 || i > m) throw Error(ErrorKind::PreconditionViolated, "blow-down position out of range", i);
  const auto a = det(fan.ray(i - 1), fan.ray(i + 1));
  if (a != 1 || m <= 3)
    throw Error(ErrorKind::NotBlowDownable, "rotation number at position " + std::to_string(i) + " is " +
                                                std::to_string(a), i, static_cast<long>(a));
  RayList rays = fan.rays();
  rays.erase(rays.begin() + (i - 1));
  return validate(std::move(rays));
}

struct Reduction {
  PlaneFan base;
  std::vector<long> trace;  ///< removed position at each step, in the fan current at that step
};

/// Blows down at the lowest admissible position until at most four rays remain.
inline Reduction reduce_to_base(const PlaneFan& fan) {
  PlaneFan current = fan;
  std::vector<long> trace;
  while (current.size() >= 5) {
    const auto positions = blow_down_positions(current);
    if (positions.empty()) throw std::logic_error("fan with at least 5 rays admits no blow-down");
    current = blow_down(current, positions.front());
    trace.push_back(positions.front());
  }
  return {current, trace};
}

struct BaseSurface {
  bool is_cp2 = false;
  std::int64_t hirzebruch_d = 0;  ///< meaningful when !is_cp2; non-negative
  friend bool operator==(const BaseSurface&, const BaseSurface&) = default;
};

/// Identifies a 3- or 4-ray fan as CP^2 or the Hirzebruch surface of parameter |d|.
inline BaseSurface identify_base(const PlaneFan& fan) {
  if (fan.size() == 3) return {true, 0};
  if (fan.size() != 4) throw Error(ErrorKind::PreconditionViolated, "only 3- and 4-ray fans are bases");
  const auto rn = rotation_numbers(fan);
  std::int64_t d = 0;
  for (auto a : rn.a) d = std::max<std::int64_t>(d, a < 0 ? -a : a);
  return {false, d};
}

/// Basis change sending v_1 to (1,0) and v_2 to (0,1).
inline PlaneFan normalize_basis(const PlaneFan& fan) { return validate(normalized_rays(fan.rays(), 1)); }

/// Relabels so that the ray at 1-based position `start` comes first.
inline RayList rotate_labels(const RayList& rays, long start) {
  const long m = static_cast<long>(rays.size());
  RayList out(rays.size());
  for (long p = 0; p < m; ++p) out[static_cast<std::size_t>(p)] = rays[static_cast<std::size_t>(((p + start - 1) % m + m) % m)];
  return out;
}

/**
 * Reverses the cyclic order so that old position `start` becomes position 1
 * and old position start-1 becomes position 2, then reflects y so the list
 * is counterclockwise again.
 */
inline RayList reflect_labels(const RayList& rays, long start) {
  const long m = static_cast<long>(rays.size());
  RayList out(rays.size());
  for (long p = 0; p < m; ++p) {
    const auto v = rays[static_cast<std::size_t>((((start - 1) - p) % m + m) % m)];
    out[static_cast<std::size_t>(p)] = {v.x, -v.y};
  }
  return out;
}

/// Lexicographically least normalized ray list over all rotations and reflections of the labels.
inline PlaneFan canonical_form(const PlaneFan& fan) {
  const long m = static_cast<long>(fan.size());
  RayList best;
  for (long start = 1; start <= m; ++start) {
    for (const auto& candidate : {rotate_labels(fan.rays(), start), reflect_labels(fan.rays(), start)}) {
      auto norm = normalized_rays(candidate, 1);
      if (best.empty() || norm < best) best = std::move(norm);
    }
  }
  return validate(std::move(best));
}

inline bool is_equivalent(const PlaneFan& a, const PlaneFan& b) {
  return a.size() == b.size() && canonical_form(a) == canonical_form(b);
}

/**
 * Every fan class with exactly m rays reachable by blow-ups from CP^2 or
 * from a Hirzebruch surface with 0 <= d <= depth, one canonical
 * representative per class, sorted.
 */
inline std::vector<PlaneFan> enumerate_fans(std::size_t m, std::int64_t depth) {
  if (m < 3) throw Error(ErrorKind::TooFewRays, "fans need at least 3 rays");
  std::set<PlaneFan> level{canonical_form(cp2_fan())};
  for (std::size_t size = 3; size < m; ++size) {
    std::set<PlaneFan> next;
    if (size + 1 == 4)
      for (std::int64_t d = 0; d <= depth; ++d) next.insert(canonical_form(hirzebruch_fan(d)));
    for (const auto& fan : level)
      for (long i = 1; i <= static_cast<long>(size); ++i) next.insert(canonical_form(blow_up(fan, i)));
    level = std::move(next);
  }
  return {level.begin(), level.end()};
}

}  // namespace toricwedge
