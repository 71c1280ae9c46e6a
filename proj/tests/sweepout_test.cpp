#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "hsphere/generators.hpp"
#include "hsphere/sweepout.hpp"

using namespace hsphere;

namespace {

const TriSurface& icosphere4() {
  static const TriSurface s = icosphere(4).surface;
  return s;
}

std::vector<double> coordinate(const TriSurface& s, int axis) {
  std::vector<double> f(s.num_vertices());
  for (int v = 0; v < s.num_vertices(); ++v) f[v] = s.positions()[v][axis];
  return f;
}

CurveState section(const TriSurface& s, int axis, double value) {
  auto f = coordinate(s, axis);
  auto loops = detail::level_loops_at(s, f, value);
  EXPECT_EQ(loops.size(), 1u);
  return detail::loop_curve(s, f, loops.front(), value);
}

void expect_monotone(const std::vector<double>& history) {
  for (std::size_t i = 1; i < history.size(); ++i) EXPECT_LE(history[i], history[i - 1] * (1.0 + 1e-12)) << i;
}

}  // namespace

TEST(SteinerGraph, PathsBracketFlatDistance) {
  const int n = 12;
  TriSurface s = flat_torus(1.0, 1.0, n).surface;
  detail::SteinerGraph g(s, 3);
  detail::LocalPaths paths(g);
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> pick(0, s.num_vertices() - 1);
  auto field = [&](int a) { return distance_field(s, a, Metric::Skeleton).dist; };
  double worst = 1.0;
  for (int trial = 0; trial < 40; ++trial) {
    int a = pick(rng), b = pick(rng);
    if (a == b) continue;
    double dx = std::abs(a / n - b / n) / static_cast<double>(n), dy = std::abs(a % n - b % n) / static_cast<double>(n);
    dx = std::min(dx, 1.0 - dx);
    dy = std::min(dy, 1.0 - dy);
    double flat = std::hypot(dx, dy);
    auto p = paths.path(a, b, std::numeric_limits<double>::infinity());
    ASSERT_TRUE(p);
    double len = 0.0;
    for (std::size_t i = 0; i + 1 < p->size(); ++i) len += g.weight((*p)[i], (*p)[i + 1]);
    EXPECT_GE(len, flat * (1.0 - 1e-12));
    EXPECT_LE(len, field(a)[b] * (1.0 + 1e-12));
    worst = std::max(worst, len / flat);
  }
  EXPECT_LT(worst, 1.03);
}

TEST(SteinerGraph, CutoffAndSnap) {
  const TriSurface& s = icosphere4();
  detail::SteinerGraph g(s, 3);
  detail::LocalPaths paths(g);
  EXPECT_FALSE(paths.path(0, s.num_vertices() - 1, 0.1));
  int e = 5;
  int u = g.snap({e, 0.3});
  EXPECT_EQ(g.point(u).edge, e);
  EXPECT_EQ(g.snap(vertex_point(s, 7)), 7);
}

TEST(ShortenCurve, GreatCircleConverges) {
  const TriSurface& s = icosphere4();
  CurveState c = section(s, 2, 1e-7);
  ShortenResult r = shorten_curve(s, c);
  EXPECT_EQ(r.outcome, CurveOutcome::ConvergedGeodesic);
  EXPECT_NEAR(r.curve.length, 2.0 * std::numbers::pi, 0.05 * 2.0 * std::numbers::pi);
  EXPECT_TRUE(r.stationary) << r.min_side_angle;
  EXPECT_NEAR(curve_length(s, r.curve.points), r.curve.length, 1e-12);
  expect_monotone(r.history);
}

TEST(ShortenCurve, SmallLoopCollapses) {
  const TriSurface& s = icosphere4();
  std::vector<int> ring;
  auto [nb, ne] = s.neighbors(0);
  int w = nb->vertex;
  for (int i = 0; i < s.degree(0); ++i) {
    ring.push_back(w);
    int t = s.left_triangle(0, w);
    const Tri& tri = s.triangle(t);
    w = tri[(detail::corner_of(tri, 0) + 2) % 3];
  }
  ShortenResult r = shorten_curve(s, vertex_curve(s, ring));
  EXPECT_EQ(r.outcome, CurveOutcome::CollapsedPoint);
}

TEST(ShortenCurve, LatitudeNearPoleCollapsesMonotonically) {
  const TriSurface& s = icosphere4();
  ShortenResult r = shorten_curve(s, section(s, 2, 0.8));
  EXPECT_EQ(r.outcome, CurveOutcome::CollapsedPoint);
  ASSERT_GE(r.history.size(), 3u);
  expect_monotone(r.history);
  EXPECT_LT(r.history.back(), 0.5 * r.history.front());
}

TEST(ShortenCurve, RejectsDegenerateInput) {
  const TriSurface& s = icosphere4();
  EXPECT_THROW(shorten_curve(s, vertex_curve(s, {0, 1})), PreconditionError);
  CurveState bad;
  bad.points = {{0, 0.5}, {1, 0.5}, {2, 1.5}};
  EXPECT_THROW(shorten_curve(s, bad), PreconditionError);
}

TEST(SideAngle, StraightAndBent) {
  TriSurface s = flat_torus(1.0, 1.0, 8).surface;
  // A straight lattice row turns by exactly pi at every vertex.
  std::vector<int> row;
  for (int i = 0; i < 8; ++i) row.push_back(i * 8);
  EXPECT_NEAR(min_side_angle(s, vertex_curve(s, row).points), std::numbers::pi, 1e-9);
  EXPECT_NEAR(min_side_angle(s, vertex_curve(s, {0, 1, 9, 8}).points), std::numbers::pi / 2, 1e-9);
}

TEST(Sweepout, RoundSphere) {
  const TriSurface& s = icosphere4();
  SweepoutParams p;
  p.jobs = 4;
  SweepoutResult r = sweepout_search(s, distance_field(s, default_basepoint(s), Metric::Skeleton), p);
  ASSERT_TRUE(r.best) << r.status;
  EXPECT_NEAR(r.best->length, 2.0 * std::numbers::pi, 0.05 * 2.0 * std::numbers::pi);
  EXPECT_FALSE(r.table.empty());
  EXPECT_EQ(r.table[r.best_seed].outcome, CurveOutcome::ConvergedGeodesic);
  for (const auto& o : r.table) {
    if (o.outcome == CurveOutcome::ConvergedGeodesic) EXPECT_LE(o.final_length, o.seed_length * (1.0 + 1e-12));
  }
}

TEST(Sweepout, EllipsoidFindsMeridian) {
  GeneratedSurface g = ellipsoid(1, 1, 0.5, 3);
  TriSurface s = refine_surface(g.surface, 1);
  SweepoutParams p;
  p.jobs = 4;
  SweepoutResult r = sweepout_search(s, distance_field(s, default_basepoint(s), Metric::Skeleton), p);
  ASSERT_TRUE(r.best) << r.status;
  const double meridian = g.reference.at("shortest_principal_ellipse");
  EXPECT_NEAR(meridian, 4.8442, 1e-3);
  EXPECT_NEAR(r.best->length, meridian, 0.05 * meridian);
}

TEST(Sweepout, ScalesLinearly) {
  TriSurface s = icosphere(3).surface;
  TriSurface big = scale_metric(s, 2.5);
  int p = default_basepoint(s);
  SweepoutResult a = sweepout_search(s, distance_field(s, p, Metric::Skeleton));
  SweepoutResult b = sweepout_search(big, distance_field(big, p, Metric::Skeleton));
  ASSERT_TRUE(a.best && b.best);
  EXPECT_NEAR(b.best->length, 2.5 * a.best->length, 1e-9 * b.best->length);
}

TEST(Sweepout, PolylineExport) {
  const TriSurface& s = icosphere4();
  CurveState c = section(s, 2, 1e-7);
  std::ostringstream os;
  write_polyline_obj(os, s, {c});
  std::istringstream in(os.str());
  std::string line;
  int verts = 0, lines = 0;
  while (std::getline(in, line)) {
    if (line.rfind("v ", 0) == 0) {
      ++verts;
      std::istringstream ls(line.substr(2));
      double x, y, z;
      ls >> x >> y >> z;
      EXPECT_NEAR(z, 0.0, 1e-6);
    }
    if (line.rfind("l ", 0) == 0) ++lines;
  }
  EXPECT_EQ(verts, static_cast<int>(c.points.size()));
  EXPECT_EQ(lines, 1);
}
