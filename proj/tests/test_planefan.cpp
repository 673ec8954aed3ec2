#include <map>
#include <random>

#include <catch_amalgamated.hpp>

#include "oracles.hpp"
#include "toricwedge/planefan.hpp"

using namespace toricwedge;

namespace {

ErrorKind kind_of(const RayList& rays) {
  try {
    validate(rays);
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected a validation error");
  return ErrorKind::PreconditionViolated;
}

using Seq = std::vector<std::int64_t>;

Seq dihedral_min(const Seq& s) {
  Seq best = s;
  const std::size_t m = s.size();
  for (std::size_t r = 0; r < m; ++r)
    for (int flip = 0; flip < 2; ++flip) {
      Seq t(m);
      for (std::size_t k = 0; k < m; ++k) t[k] = flip ? s[(r + m - k) % m] : s[(r + k) % m];
      best = std::min(best, t);
    }
  return best;
}

Seq seq_of(const RayList& rays) {
  const std::size_t m = rays.size();
  Seq a(m);
  for (std::size_t i = 0; i < m; ++i) {
    const auto p = rays[(i + m - 1) % m], q = rays[(i + 1) % m];
    a[i] = p.x * q.y - p.y * q.x;
  }
  return a;
}

// Reachable from CP^2 or a Hirzebruch surface with parameter at most depth, by blowing down on sequences.
bool reachable(const Seq& s, std::int64_t depth, std::map<Seq, bool>& memo) {
  if (s.size() == 3) return true;
  if (s.size() == 4) {
    std::int64_t d = 0;
    for (auto x : s) d = std::max<std::int64_t>(d, std::abs(x));
    if (d <= depth) return true;
  }
  if (auto it = memo.find(s); it != memo.end()) return it->second;
  bool ok = false;
  const std::size_t m = s.size();
  for (std::size_t i = 0; i < m && !ok; ++i) {
    if (s[i] != 1) continue;
    Seq t = s;
    t[(i + m - 1) % m] -= 1;
    t[(i + 1) % m] -= 1;
    t.erase(t.begin() + static_cast<long>(i));
    ok = reachable(t, depth, memo);
  }
  return memo[s] = ok;
}

// Classes of m-ray fans found by walking v_{k+1} = a_k v_k - v_{k-1} from the standard basis.
std::set<Seq> brute_force_classes(std::size_t m, std::int64_t depth, std::int64_t range) {
  std::set<Seq> out;
  std::map<Seq, bool> memo;
  RayList rays{{1, 0}, {0, 1}};
  std::function<void()> walk = [&] {
    if (rays.size() == m) {
      if (oracle::brute_force_fan_valid(rays)) {
        const auto s = seq_of(rays);
        if (reachable(s, depth, memo)) out.insert(dihedral_min(s));
      }
      return;
    }
    const auto prev = rays[rays.size() - 2], cur = rays.back();
    for (std::int64_t a = -range; a <= range; ++a) {
      rays.push_back({a * cur.x - prev.x, a * cur.y - prev.y});
      walk();
      rays.pop_back();
    }
  };
  walk();
  return out;
}

}  // namespace

TEST_CASE("validate accepts the standard examples") {
  CHECK(cp2_fan().size() == 3);
  CHECK(hirzebruch_fan(3).size() == 4);
  const auto pentagon = validate({{1, 0}, {1, 1}, {0, 1}, {-1, 0}, {0, -1}});
  CHECK(pentagon.size() == 5);
  CHECK(pentagon.ray(6) == pentagon.ray(1));
  CHECK(pentagon.ray(0) == pentagon.ray(5));
}

TEST_CASE("validate reports the first violation") {
  CHECK(kind_of({{1, 0}, {0, 1}}) == ErrorKind::TooFewRays);
  CHECK(kind_of({{2, 0}, {0, 1}, {-1, -1}}) == ErrorKind::NotPrimitive);
  CHECK(kind_of({{1, 0}, {0, 1}, {1, 0}, {-1, -1}}) == ErrorKind::DuplicateRay);
  CHECK(kind_of({{1, 0}, {0, 1}, {-1, -2}}) == ErrorKind::NotUnimodular);
  CHECK(kind_of({{1, 0}, {-1, -1}, {0, 1}}) == ErrorKind::NotUnimodular);
  // Winds twice: every consecutive determinant is 1.
  CHECK(kind_of({{1, 0}, {0, 1}, {-1, -1}, {1, 0}, {0, 1}, {-1, -1}}) == ErrorKind::DuplicateRay);
  CHECK(kind_of({{1, 0}, {1, 1}, {0, 1}, {-1, 0}, {-1, -1}, {0, -1}, {1, 0}, {1, 1}, {0, 1}, {-1, 0}, {-1, -1}, {0, -1}}) ==
        ErrorKind::DuplicateRay);
  try {
    validate({{1, 0}, {0, 1}, {-1, -3}});
  } catch (const Error& e) {
    CHECK(e.index() == 3);
    CHECK(e.value() == 3);
  }
}

TEST_CASE("winding number on lists with positive determinants") {
  CHECK(PlaneFan::winding_number({{1, 0}, {0, 1}, {-1, -1}}) == 1);
  CHECK(PlaneFan::winding_number({{1, 0}, {0, 1}, {-1, -1}, {1, 0}, {0, 1}, {-1, -1}}) == 2);
}

TEST_CASE("validate agrees with the brute-force validator") {
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> coord(-2, 2), len(3, 6);
  int accepted = 0;
  for (int trial = 0; trial < 20000; ++trial) {
    RayList rays(static_cast<std::size_t>(len(rng)));
    for (auto& v : rays) v = {coord(rng), coord(rng)};
    bool ok = true;
    try {
      validate(rays);
    } catch (const Error&) {
      ok = false;
    }
    accepted += ok;
    REQUIRE(ok == oracle::brute_force_fan_valid(rays));
  }
  CHECK(accepted > 0);
}

TEST_CASE("rotation numbers") {
  CHECK(rotation_numbers(cp2_fan()).a == Seq{-1, -1, -1});
  CHECK(rotation_numbers(hirzebruch_fan(2)).a == Seq{0, 2, 0, -2});
  const auto f = blow_up(hirzebruch_fan(1), 2);
  const auto a = rotation_numbers(f).a;
  CHECK(std::accumulate(a.begin(), a.end(), std::int64_t{0}) == 3 * 5 - 12);
}

TEST_CASE("blow up and blow down are inverse") {
  const auto base = hirzebruch_fan(3);
  for (long i = 1; i <= 4; ++i) {
    const auto up = blow_up(base, i);
    CHECK(up.size() == 5);
    CHECK(up.ray(i + 1) == base.ray(i) + base.ray(i + 1));
    CHECK(rotation_numbers(up).a[static_cast<std::size_t>(i)] == 1);
    CHECK(blow_down(up, i + 1) == base);
  }
  CHECK_THROWS_AS(blow_up(base, 0), Error);
  CHECK_THROWS_AS(blow_down(hirzebruch_fan(0), 1), Error);
  CHECK_THROWS_AS(blow_down(cp2_fan(), 1), Error);
}

TEST_CASE("reduce_to_base") {
  const auto pentagon = validate({{1, 0}, {1, 1}, {0, 1}, {-1, 0}, {0, -1}});
  const auto r = reduce_to_base(pentagon);
  CHECK(r.base.size() == 4);
  CHECK(r.trace == std::vector<long>{1});
  CHECK(identify_base(r.base) == BaseSurface{false, 1});
  CHECK(identify_base(cp2_fan()).is_cp2);
  CHECK(identify_base(hirzebruch_fan(-4)).hirzebruch_d == 4);
  CHECK(reduce_to_base(hirzebruch_fan(2)).trace.empty());
}

TEST_CASE("canonical form is a class invariant") {
  std::mt19937 rng(9);
  const auto base = blow_up(blow_up(hirzebruch_fan(2), 1), 3);
  const auto c = canonical_form(base);
  for (long s = 1; s <= 6; ++s) {
    CHECK(canonical_form(validate(rotate_labels(base.rays(), s))) == c);
    CHECK(canonical_form(validate(reflect_labels(base.rays(), s))) == c);
  }
  const Unimodular2 g{2, 1, 1, 1};
  CHECK(is_equivalent(validate(transform(base.rays(), g)), base));
  CHECK_FALSE(is_equivalent(hirzebruch_fan(1), hirzebruch_fan(2)));
  CHECK(is_equivalent(hirzebruch_fan(3), hirzebruch_fan(-3)));
  CHECK(normalize_basis(base).ray(1) == LatticeVector2{1, 0});
  CHECK(normalize_basis(base).ray(2) == LatticeVector2{0, 1});
}

TEST_CASE("enumerate_fans matches a brute-force walk over rotation sequences") {
  CHECK(enumerate_fans(3, 0).size() == 1);
  CHECK(enumerate_fans(4, 2).size() == 3);
  for (auto [m, depth] : std::vector<std::pair<std::size_t, std::int64_t>>{{4, 5}, {5, 2}, {5, 5}, {6, 2}, {7, 1}}) {
    std::set<Seq> mine;
    for (const auto& f : enumerate_fans(m, depth)) mine.insert(dihedral_min(rotation_numbers(f).a));
    CHECK(mine.size() == enumerate_fans(m, depth).size());
    CHECK(mine == brute_force_classes(m, depth, 8));
  }
}

TEST_CASE("rotation sums over random blow-ups") {
  std::mt19937 rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    PlaneFan f = trial % 2 ? cp2_fan() : hirzebruch_fan(trial % 7);
    const int steps = trial % 6;
    for (int s = 0; s < steps; ++s) {
      std::uniform_int_distribution<long> pos(1, static_cast<long>(f.size()));
      f = blow_up(f, pos(rng));
    }
    const auto a = rotation_numbers(f).a;
    CHECK(std::accumulate(a.begin(), a.end(), std::int64_t{0}) == 3 * static_cast<std::int64_t>(f.size()) - 12);
    CHECK(oracle::brute_force_fan_valid(f.rays()));
  }
}
