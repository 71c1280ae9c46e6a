#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "hsphere/generators.hpp"
#include "hsphere/geodesic.hpp"

using namespace hsphere;

namespace {

// Flat torus distance between grid vertices, straight from the lattice.
double torus_distance(int n, double L, int a, int b) {
  int di = std::abs(a / n - b / n), dj = std::abs(a % n - b % n);
  di = std::min(di, n - di);
  dj = std::min(dj, n - dj);
  return std::hypot(di * L / n, dj * L / n);
}

}  // namespace

TEST(Geodesic, SymmetricAndTriangleInequality) {
  TriSurface s = refine_surface(ellipsoid(1, 1, 0.5, 1).surface, 1);
  for (Metric m : {Metric::Skeleton, Metric::Unfolded}) {
    DistanceGraph g = build_distance_graph(s, m);
    std::vector<std::vector<double>> d;
    for (int v : {0, 5, 17, 40, 99}) d.push_back(distance_field(g, s, v).dist);
    const int ids[] = {0, 5, 17, 40, 99};
    for (int i = 0; i < 5; ++i) {
      for (int j = 0; j < 5; ++j) {
        EXPECT_NEAR(d[i][ids[j]], d[j][ids[i]], 1e-9 * std::max(1.0, d[i][ids[j]]));
        for (int k = 0; k < 5; ++k) EXPECT_LE(d[i][ids[k]], d[i][ids[j]] + d[j][ids[k]] + 1e-12);
      }
    }
  }
}

TEST(Geodesic, OneLipschitzAlongEdges) {
  TriSurface s = refine_surface(fingered_sphere(3, 2).surface, 1);
  for (Metric m : {Metric::Skeleton, Metric::Unfolded}) {
    DistanceField f = distance_field(s, 3, m);
    for (int e = 0; e < s.num_edges(); ++e) {
      EXPECT_LE(std::abs(f.dist[s.edge(e).a] - f.dist[s.edge(e).b]), s.length(e) + 1e-12);
    }
  }
}

TEST(Geodesic, UnfoldedNeverExceedsSkeleton) {
  TriSurface s = icosphere(3).surface;
  DistanceField a = distance_field(s, 0, Metric::Skeleton);
  DistanceField b = distance_field(s, 0, Metric::Unfolded);
  for (int v = 0; v < s.num_vertices(); ++v) EXPECT_LE(b.dist[v], a.dist[v] + 1e-12);
}

TEST(Geodesic, FlatTorusAxisDistancesAreExact) {
  const int n = 12;
  TriSurface s = flat_torus(1, 1, n).surface;
  for (Metric m : {Metric::Skeleton, Metric::Unfolded}) {
    DistanceField f = distance_field(s, 0, m);
    for (int k = 0; k <= n / 2; ++k) {
      EXPECT_NEAR(f.dist[k * n], k / double(n), 1e-12);
      EXPECT_NEAR(f.dist[k], k / double(n), 1e-12);
    }
  }
}

TEST(Geodesic, UnfoldedIsRealisableAndClose) {
  // Every unfolded distance is the length of a surface path, so it cannot
  // undershoot the flat distance, and shortcuts keep it within a few percent.
  const int n = 16;
  TriSurface s = flat_torus(1, 1, n).surface;
  DistanceField f = distance_field(s, 0, Metric::Unfolded);
  DistanceField g = distance_field(s, 0, Metric::Skeleton);
  double worst_unfolded = 1.0, worst_skeleton = 1.0;
  for (int v = 1; v < s.num_vertices(); ++v) {
    double exact = torus_distance(n, 1.0, 0, v);
    EXPECT_GE(f.dist[v], exact - 1e-12);
    worst_unfolded = std::max(worst_unfolded, f.dist[v] / exact);
    worst_skeleton = std::max(worst_skeleton, g.dist[v] / exact);
  }
  EXPECT_LT(worst_unfolded, 1.1);
  EXPECT_GT(worst_skeleton, worst_unfolded);
}

TEST(Geodesic, SkeletonRefinementIsMonotone) {
  TriSurface s = ellipsoid(1, 1, 0.5, 1).surface;
  TriSurface r = refine_surface(s, 1);
  DistanceField a = distance_field(s, 2, Metric::Skeleton);
  DistanceField b = distance_field(r, 2, Metric::Skeleton);
  for (int v = 0; v < s.num_vertices(); ++v) EXPECT_LE(b.dist[v], a.dist[v] + 1e-12);
}

TEST(Geodesic, ScalingIsHomogeneous) {
  TriSurface s = refine_surface(dumbbell(0.2, 1).surface, 1);
  for (double lambda : {1.0 / 3.0, 2.0, 10.0}) {
    TriSurface t = scale_metric(s, lambda);
    DistanceField a = distance_field(s, 7);
    DistanceField b = distance_field(t, 7);
    for (int v = 0; v < s.num_vertices(); ++v) EXPECT_NEAR(b.dist[v], lambda * a.dist[v], 1e-9 * lambda * a.dist[v] + 1e-15);
  }
}

TEST(Geodesic, TreePathLengthMatchesDistance) {
  TriSurface s = icosphere(2).surface;
  DistanceField f = distance_field(s, 4, Metric::Skeleton);
  for (int v = 0; v < s.num_vertices(); v += 7) {
    auto path = tree_path(f, v);
    ASSERT_EQ(path.front(), 4);
    ASSERT_EQ(path.back(), v);
    double len = 0;
    for (std::size_t i = 1; i < path.size(); ++i) len += s.length(s.edge_between(path[i - 1], path[i]));
    EXPECT_NEAR(len, f.dist[v], 1e-12);
  }
}

TEST(Geodesic, PointDistanceOnEdges) {
  TriSurface s = icosphere(1).surface;
  DistanceOracle oracle(s);
  const Edge& e = s.edge(0);
  const double l = s.length(0);
  EXPECT_NEAR(oracle.point_distance({0, 0.25}, {0, 0.75}), 0.5 * l, 1e-15);
  EXPECT_NEAR(oracle.point_distance({0, 0.0}, vertex_point(s, e.a)), 0.0, 1e-15);
  EXPECT_NEAR(oracle.point_distance(vertex_point(s, e.a), vertex_point(s, 30)), oracle.vertex_distance(e.a, 30), 1e-15);
  // Through an endpoint: a point at t on edge 0 to a far vertex.
  double t = 0.3;
  double expect = std::min(t * l + oracle.vertex_distance(e.a, 30), (1 - t) * l + oracle.vertex_distance(e.b, 30));
  EXPECT_NEAR(oracle.point_distance({0, t}, vertex_point(s, 30)), expect, 1e-15);
}

TEST(Geodesic, SubsetDiameterMatchesBruteForce) {
  TriSurface s = icosphere(2).surface;
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> edge(0, s.num_edges() - 1);
  std::uniform_real_distribution<double> t(0, 1);
  std::vector<SurfacePoint> pts;
  for (int i = 0; i < 25; ++i) pts.push_back({edge(rng), t(rng)});
  DistanceOracle oracle(s, Metric::Unfolded, 4);
  DiameterResult r = subset_diameter(oracle, pts);
  double brute = 0;
  for (auto& a : pts)
    for (auto& b : pts) brute = std::max(brute, oracle.point_distance(a, b));
  EXPECT_DOUBLE_EQ(r.diameter, brute);
  EXPECT_DOUBLE_EQ(oracle.point_distance(pts[r.witness_a], pts[r.witness_b]), brute);
  EXPECT_THROW(subset_diameter(oracle, {}), PreconditionError);
}

TEST(Geodesic, EccentricityTiesGoToLowestId) {
  // All twelve icosahedron vertices are equivalent.
  TriSurface s = icosphere(0).surface;
  EccentricityResult r = eccentricity_scan(s, {11, 7, 3, 7});
  EXPECT_EQ(r.vertex, 3);
  EXPECT_THROW(eccentricity_scan(s, {}), PreconditionError);
}

TEST(Geodesic, BadSourceRejected) {
  TriSurface s = icosphere(0).surface;
  EXPECT_THROW(distance_field(s, -1), PreconditionError);
  EXPECT_THROW(distance_field(s, 12), PreconditionError);
}
