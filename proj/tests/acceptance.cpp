// Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "toricwedge/puzzle.hpp"
#include "toricwedge/shephard.hpp"

using namespace toricwedge;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool ok = true;
  std::string detail;
  void fail(const std::string& why) {
    if (ok) detail = why;
    ok = false;
  }
};

int failures = 0;

void report(int id, const std::string& name, const Outcome& o, double secs, double budget) {
  Outcome out = o;
  if (budget > 0 && secs > budget) {
    std::ostringstream s;
    s << "over budget (" << budget << " s)";
    out.fail(s.str());
  }
  std::printf("%s criterion %d: %s [%.2f s]%s%s\n", out.ok ? "PASS" : "FAIL", id, name.c_str(), secs,
              out.detail.empty() ? "" : " : ", out.detail.c_str());
  std::fflush(stdout);
  failures += !out.ok;
}

std::vector<VertexLabel> polygon_labels(std::size_t m) {
  std::vector<VertexLabel> out;
  for (std::size_t i = 1; i <= m; ++i) out.push_back({static_cast<int>(i), 1});
  return out;
}

// ---------------------------------------------------------------------------

Outcome worked_example() {
  Outcome o;
  const auto facets = facet_labels(build_complex(WedgeSignature::polygon(5)));
  for (std::int64_t d = 0; d <= 10; ++d) {
    const auto a = QMatrix::from_int_rows(std::vector<std::vector<std::int64_t>>{{2, 0, -1, -2 * d - 1, 2 * d}, {0, 1, 1, 0, -2}});
    const auto b = QMatrix::from_int_rows(std::vector<std::vector<std::int64_t>>{{1, -d, 1}, {-2, 2, 1}, {2, 0, 1}, {0, 0, 1}, {0, 1, 1}});
    if (!(a * b).is_zero_matrix()) o.fail("A*B != 0 at d = " + std::to_string(d));
    std::vector<QVector> pts;
    for (std::size_t r = 0; r < 5; ++r) pts.push_back({b(r, 0), b(r, 1)});
    const auto dg = ShephardDiagram::from_points(polygon_labels(5), pts);
    const auto cert = s_sigma(dg, facets);
    if (cert.kind != PolytopalityCertificate::Kind::InteriorPoint || !verify_interior_point(dg, facets, cert))
      o.fail("S empty or witness rejected at d = " + std::to_string(d));
  }
  return o;
}

std::vector<PlaneFan> fan_corpus() {
  std::set<PlaneFan> all;
  for (std::size_t m = 5; m <= 8; ++m)
    for (std::int64_t depth = 0; depth <= 5; ++depth)
      for (const auto& f : enumerate_fans(m, depth)) all.insert(f);
  return {all.begin(), all.end()};
}

Outcome blow_down_theorem(const std::vector<PlaneFan>& corpus) {
  Outcome o;
  for (const auto& f : corpus) {
    if (blow_down_positions(f).empty()) o.fail("fan with no blow-down position");
    const auto r = reduce_to_base(f);
    if (r.base.size() > 4) o.fail("reduction stopped above 4 rays");
    if (r.trace.size() + r.base.size() != f.size()) o.fail("trace length mismatch");
  }
  if (corpus.empty()) o.fail("empty corpus");
  return o;
}

Outcome rotation_sums(const std::vector<PlaneFan>& corpus) {
  Outcome o;
  auto check = [&](const PlaneFan& f) {
    const auto a = rotation_numbers(f).a;
    if (std::accumulate(a.begin(), a.end(), std::int64_t{0}) != 3 * static_cast<std::int64_t>(f.size()) - 12)
      o.fail("rotation sum off");
  };
  for (const auto& f : corpus) check(f);
  std::mt19937 rng(1234);
  std::uniform_int_distribution<int> base(-1, 6), steps(0, 8);
  for (int t = 0; t < 1000; ++t) {
    const int b = base(rng);
    PlaneFan f = b < 0 ? cp2_fan() : hirzebruch_fan(b);
    for (int s = steps(rng); s > 0; --s) {
      std::uniform_int_distribution<long> pos(1, static_cast<long>(f.size()));
      f = blow_up(f, pos(rng));
    }
    check(f);
  }
  return o;
}

// ---------------------------------------------------------------------------
// Bounded sweep over P_m(J)

std::vector<WedgeSignature> sweep_signatures() {
  std::vector<WedgeSignature> out;
  for (std::size_t m = 4; m <= 6; ++m) {
    std::vector<int> J(m, 1);
    std::function<void(std::size_t, int)> fill = [&](std::size_t at, int spare) {
      if (at == m) {
        out.push_back(WedgeSignature::make(m, J));
        return;
      }
      for (int extra = 0; extra <= spare; ++extra) {
        J[at] = 1 + extra;
        fill(at + 1, spare - extra);
      }
      J[at] = 1;
    };
    fill(0, 3);
  }
  return out;
}

struct InstanceReport {
  bool nonsingular = true, shephard = true, support = true, certificates = true;
  bool wedge_checked = false, wedge_ok = true;
  bool squares_ok = true, cubes_ok = true;
  std::size_t irreducible_squares = 0, cubes = 0;
  bool projections_ok = true;
  double t_certify = 0, t_wedge = 0, t_structure = 0, t_projection = 0;
};

std::int64_t edge_value(const Puzzle& p, int color, const GridVertex& a, const GridVertex& b) {
  const auto& from = a[static_cast<std::size_t>(color - 1)] < b[static_cast<std::size_t>(color - 1)] ? a : b;
  const auto& to = &from == &a ? b : a;
  for (const auto& e : p.edges)
    if (e.color == color && e.from == from && e.to == to) return e.e;
  throw std::logic_error("missing grid edge");
}

/// Iterated single-copy projections down to the polygon keeping copy alpha_i of each vertex.
std::optional<RayList> project_by_copies(CharMatrix cm, const GridVertex& alpha) {
  GridVertex keep = alpha;
  for (;;) {
    std::optional<VertexLabel> drop;
    for (const auto& l : cm.labels)
      if (l.copy != keep[static_cast<std::size_t>(l.vertex - 1)] && (!drop || l.copy > drop->copy)) drop = l;
    if (!drop) break;
    try {
      cm = projection(cm, *drop);
    } catch (const Error&) {
      return std::nullopt;
    }
    auto& k = keep[static_cast<std::size_t>(drop->vertex - 1)];
    if (drop->copy < k) --k;
  }
  return as_rays(cm);
}

InstanceReport examine(const Puzzle& p) {
  InstanceReport r;
  const auto& sig = p.signature;
  const auto cx = build_complex(sig);
  const auto cm = assemble_matrix(p);

  auto t0 = Clock::now();
  r.nonsingular = check_nonsingular(cm, cx);
  if (r.nonsingular) {
    const auto facets = facet_labels(cx);
    const auto dg = shephard_diagram(cm);
    const auto sh = s_sigma(dg, facets);
    r.shephard = sh.kind == PolytopalityCertificate::Kind::InteriorPoint;
    const auto sf = support_function_polytopal(cm, cx);
    r.support = sf.polytopal;
    r.certificates = (!r.shephard || verify_interior_point(dg, facets, sh)) &&
                     (!r.support || verify_heights(cm, cx, *sf.certificate.heights));
    r.t_certify = seconds_since(t0);

    if (sig.J[0] == 2) {
      t0 = Clock::now();
      r.wedge_checked = true;
      r.wedge_ok = verify_wedge_shephard(cm, {1, 1}, {1, 2});
      if (r.wedge_ok && sh.point) {
        for (const auto removed : {VertexLabel{1, 1}, VertexLabel{1, 2}}) {
          std::vector<PointFamily> fams;
          for (auto f : detail::projected_facets(cm, removed)) {
            f.push_back(removed);
            fams.push_back(coface_points(dg, f));
          }
          fams.push_back({*sh.point});
          if (!relint_intersection(fams).feasible) r.wedge_ok = false;
        }
      }
      r.t_wedge = seconds_since(t0);
    }
  }

  t0 = Clock::now();
  for (const auto& sq : grid_squares(sig)) {
    const int i = sq.color_i, j = sq.color_j;
    const bool irreducible = edge_value(p, i, sq.corners[0], sq.corners[1]) != 0 &&
                             edge_value(p, j, sq.corners[0], sq.corners[2]) != 0 &&
                             edge_value(p, j, sq.corners[1], sq.corners[3]) != 0 &&
                             edge_value(p, i, sq.corners[2], sq.corners[3]) != 0;
    if (!irreducible) continue;
    ++r.irreducible_squares;
    const auto& fan = p.at(sq.corners[0]);
    if (fan.ray(i) != -fan.ray(j)) r.squares_ok = false;
  }
  const auto vertices = grid_vertices(sig);
  for (const auto& alpha : vertices)
    for (std::size_t i = 0; i < sig.m; ++i)
      for (std::size_t j = i + 1; j < sig.m; ++j)
        for (std::size_t k = j + 1; k < sig.m; ++k)
          for (int a = alpha[i] + 1; a <= sig.J[i]; ++a)
            for (int b = alpha[j] + 1; b <= sig.J[j]; ++b)
              for (int c = alpha[k] + 1; c <= sig.J[k]; ++c) {
                ++r.cubes;
                bool reducible = false;
                const std::array<std::size_t, 3> axes{i, j, k};
                const std::array<int, 3> tops{a, b, c};
                for (int mask = 0; mask < 8 && !reducible; ++mask)
                  for (std::size_t ax = 0; ax < 3 && !reducible; ++ax) {
                    if (mask >> ax & 1) continue;
                    GridVertex lo = alpha;
                    for (std::size_t q = 0; q < 3; ++q)
                      if (mask >> q & 1) lo[axes[q]] = tops[q];
                    GridVertex hi = lo;
                    hi[axes[ax]] = tops[ax];
                    if (edge_value(p, static_cast<int>(axes[ax] + 1), lo, hi) == 0) reducible = true;
                  }
                if (!reducible) r.cubes_ok = false;
              }
  r.t_structure = seconds_since(t0);

  t0 = Clock::now();
  for (const auto& alpha : vertices) {
    const auto rays = project_by_copies(cm, alpha);
    if (!rays || std::abs(det((*rays)[0], (*rays)[1])) != 1 ||
        normalized_rays(*rays, 1) != normalized_rays(p.at(alpha).rays(), 1))
      r.projections_ok = false;
  }
  r.t_projection = seconds_since(t0);
  return r;
}

// ---------------------------------------------------------------------------

Outcome lp_soundness() {
  Outcome o;
  std::mt19937 rng(777);
  std::uniform_int_distribution<int> coef(-4, 4), kind(0, 5), dims(1, 5), count(1, 10);
  int feasible = 0;
  for (int t = 0; t < 500; ++t) {
    StrictLinearSystem sys;
    sys.dimension = static_cast<std::size_t>(dims(rng));
    const int c = count(rng);
    for (int k = 0; k < c; ++k) {
      QVector a(sys.dimension);
      for (auto& q : a) q = coef(rng);
      const Rational b = coef(rng);
      const int kk = kind(rng);
      if (kk == 0) sys.add_equality(std::move(a), b);
      else if (kk <= 2) sys.add_weak(std::move(a), b);
      else sys.add_strict(std::move(a), b);
    }
    const auto res = strict_feasible(sys);
    if (res.feasible != oracle::fourier_motzkin_feasible(sys)) o.fail("disagreement on system " + std::to_string(t));
    if (res.feasible) {
      ++feasible;
      if (!satisfies(sys, *res.witness)) o.fail("witness does not re-substitute");
    }
  }
  o.detail = o.ok ? std::to_string(feasible) + " of 500 feasible" : o.detail;
  return o;
}

Outcome radon_suite(const std::vector<PlaneFan>& corpus) {
  Outcome o;
  std::size_t pairs = 0;
  for (const auto& fan : corpus) {
    const auto dg = shephard_diagram(fan);
    const std::size_t m = fan.size();
    for (long i = 1; i <= static_cast<long>(m); ++i) {
      if (!opposite_ray(fan, i)) continue;
      ++pairs;
      const auto rd = radon_data(dg, fan, i);
      PointFamily a, b;
      for (auto k : rd.A) a.push_back(dg.points[k]);
      for (auto k : rd.B) b.push_back(dg.points[k]);
      PointFamily ab = a;
      ab.insert(ab.end(), b.begin(), b.end());
      const auto meet = relint_intersection({a, b});
      if (!meet.feasible || meet.point != rd.R || !in_relint(a, rd.R) || !in_relint(b, rd.R)) o.fail("R not in both relints");
      if (affine_dependencies(ab).cols() != 1 || affine_dependencies(a).cols() != 0 || affine_dependencies(b).cols() != 0)
        o.fail("relint intersection is not a single point");
      if (rd.hull_dim != m - 4) o.fail("H has the wrong dimension");
      for (const auto& p : ab)
        if (!is_zero(side_of_h(rd, p))) o.fail("hull point off H");
      const int s1 = side_of_h(rd, dg.points[rd.first]).sign(), s2 = side_of_h(rd, dg.points[rd.ell]).sign();
      if (s1 == 0 || s1 != s2) o.fail("1 and ell not strictly on one side of H");
    }
  }
  if (pairs == 0) o.fail("no opposite pairs in the corpus");
  if (o.ok) o.detail = std::to_string(pairs) + " opposite pairs";
  return o;
}

}  // namespace

int main() {
  auto t0 = Clock::now();
  report(1, "worked example A*B = 0 and S nonempty for d = 0..10", worked_example(), seconds_since(t0), 1.0);

  t0 = Clock::now();
  const auto corpus = fan_corpus();
  report(2, "blow-down exists and reduction ends at <= 4 rays (" + std::to_string(corpus.size()) + " fans, m = 5..8)",
         blow_down_theorem(corpus), seconds_since(t0), 30.0);

  t0 = Clock::now();
  report(3, "rotation sums equal 3m - 12", rotation_sums(corpus), seconds_since(t0), 0);

  // Criteria 4-7 share one sweep.
  t0 = Clock::now();
  Outcome c4, c5, c6, c7;
  std::size_t puzzles = 0, projective = 0, disagreements = 0, wedge_instances = 0, irreducible_squares = 0, cubes = 0;
  double t_enum = 0, t_cert = 0, t_wedge = 0, t_struct = 0, t_proj = 0;
  for (const auto& sig : sweep_signatures()) {
    const auto te = Clock::now();
    const auto found = enumerate_puzzles(sig, 3, 3);
    t_enum += seconds_since(te);
    const auto reports = parallel_map(found, examine, default_workers());
    for (std::size_t k = 0; k < found.size(); ++k) {
      const auto& r = reports[k];
      ++puzzles;
      t_cert += r.t_certify;
      t_wedge += r.t_wedge;
      t_struct += r.t_structure;
      t_proj += r.t_projection;
      if (!r.nonsingular) c4.fail("singular assembled matrix");
      if (r.shephard && r.support) ++projective;
      else c4.fail("an oracle returned not projective");
      if (r.shephard != r.support) ++disagreements;
      if (!r.certificates) c4.fail("certificate failed re-verification");
      if (r.wedge_checked) {
        ++wedge_instances;
        if (!r.wedge_ok) c5.fail("wedge-Shephard check failed");
      }
      irreducible_squares += r.irreducible_squares;
      cubes += r.cubes;
      if (!r.squares_ok) c6.fail("irreducible square on non-opposite colors");
      if (!r.cubes_ok) c6.fail("irreducible 3-cube");
      if (!r.projections_ok) c7.fail("projection differs from the assigned fan");
    }
  }
  if (disagreements) c4.fail(std::to_string(disagreements) + " oracle disagreements");
  {
    std::ostringstream s;
    s << puzzles << " puzzles, fraction projective " << projective << "/" << puzzles << ", " << disagreements
      << " disagreements (enumerate " << t_enum << " s, certify " << t_cert << " s)";
    if (c4.ok) c4.detail = s.str();
    else c4.detail += "; " + s.str();
  }
  if (c5.ok) c5.detail = std::to_string(wedge_instances) + " instances with j_1 = 2";
  if (c6.ok) c6.detail = std::to_string(irreducible_squares) + " irreducible squares, " + std::to_string(cubes) + " cubes";
  if (wedge_instances == 0) c5.fail("no instances");
  report(4, "bounded sweep m in {4,5,6}, sum J <= m + 3, depth 3, |e| <= 3: all projective", c4,
         t_enum + t_cert, 600.0);
  report(5, "wedge-Shephard proposition on j_1 = 2 instances", c5, t_wedge, 0);
  report(6, "irreducible squares use opposite colors; every 3-cube is reducible", c6, t_struct, 0);
  report(7, "projections reproduce the assigned fans", c7, t_proj, 0);
  std::printf("      sweep wall time %.2f s\n", seconds_since(t0));

  t0 = Clock::now();
  report(8, "strict_feasible agrees with Fourier-Motzkin on 500 systems", lp_soundness(), seconds_since(t0), 60.0);

  t0 = Clock::now();
  report(9, "Radon point, dim H = m - 4, 1 and ell on one side", radon_suite(corpus), seconds_since(t0), 0);

  std::printf("%s: %d of 9 criteria failed\n", failures ? "FAILED" : "ALL PASSED", failures);
  return failures ? 1 : 0;
}
