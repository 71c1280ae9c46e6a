#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "hsphere/generators.hpp"
#include "hsphere/spheremap.hpp"

using namespace hsphere;

namespace {

SphereMap identity_map(const TriSurface& s) {
  SphereMap m;
  for (const Vec3& x : s.positions()) m.image.push_back((1.0 / norm(x)) * x);
  m.region.assign(s.num_triangles(), 1);
  return m;
}

const Degree1Construction& icosphere_construction() {
  static const Degree1Construction c = [] {
    TriSurface s = icosphere(3).surface;
    return construct_degree1_map(s, default_basepoint(s));
  }();
  return c;
}

const TriSurface& icosphere3() {
  static const TriSurface s = icosphere(3).surface;
  return s;
}

}  // namespace

TEST(PlanarMap, EndpointsAndLipschitz) {
  const TriSurface& s = icosphere3();
  PlanarMap m = build_planar_map(s, 0, 100);
  double d = distance_field(s, 0).dist[100];
  EXPECT_EQ(m.value[0][0], 0.0);
  EXPECT_EQ(m.value[0][1], d);
  EXPECT_EQ(m.value[100][0], d);
  EXPECT_EQ(m.value[100][1], 0.0);
  EXPECT_LE(m.lipschitz, std::numbers::sqrt2 + 1e-12);
  EXPECT_LE(m.lipschitz, 1.415);
  EXPECT_THROW(build_planar_map(s, 3, 3), PreconditionError);
}

TEST(VerifyMap, IdentityHasDegreeOne) {
  const TriSurface& s = icosphere3();
  MapCertificate c = verify_map(s, identity_map(s), 1.01);
  EXPECT_EQ(c.degree, 1);
  EXPECT_TRUE(c.degrees_agree);
  EXPECT_LT(c.residual, 1e-9);
  // Arc over chord for the shortest edges.
  EXPECT_GE(c.discrete_lipschitz, 1.0);
  EXPECT_LE(c.discrete_lipschitz, 1.01);
}

TEST(VerifyMap, ConstantMapHasDegreeZero) {
  const TriSurface& s = icosphere3();
  SphereMap m;
  m.image.assign(s.num_vertices(), Vec3{0, 0, 1});
  MapCertificate c = verify_map(s, m, 0.0);
  EXPECT_EQ(c.degree, 0);
  EXPECT_EQ(c.regular_value_degree, 0);
  EXPECT_EQ(c.discrete_lipschitz, 0.0);
}

TEST(VerifyMap, ReflectionHasDegreeMinusOne) {
  const TriSurface& s = icosphere3();
  SphereMap m = identity_map(s);
  for (Vec3& x : m.image) x[2] = -x[2];
  MapCertificate c = verify_map(s, m, 1.01);
  EXPECT_EQ(c.degree, -1);
  EXPECT_EQ(c.regular_value_degree, -1);
}

TEST(VerifyMap, RegularValueMatchesAreaOnRefinedTetrahedron) {
  std::vector<Vec3> pos = {{1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}};
  std::vector<Tri> tris = {{0, 1, 2}, {0, 3, 1}, {0, 2, 3}, {1, 3, 2}};
  TriSurface s = refine_surface(TriSurface::from_positions(pos, tris), 1);
  // Orientation of the tetrahedron decides the sign; both methods must agree.
  SphereMap m = identity_map(s);
  int area = static_cast<int>(std::lround(degree_by_area(s, m.image)));
  EXPECT_EQ(std::abs(area), 1);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n01;
  for (int i = 0; i < 20; ++i) {
    Vec3 y{n01(rng), n01(rng), n01(rng)};
    y = (1.0 / norm(y)) * y;
    auto d = degree_at(s, m.image, y);
    if (d) EXPECT_EQ(*d, area);
  }
}

TEST(VerifyMap, DegreesAgreeOnWildPerturbations) {
  // Large perturbations give image triangles with sides past a right angle.
  TriSurface s = icosphere(1).surface;
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g;
  for (int i = 0; i < 30; ++i) {
    std::vector<Vec3> image;
    for (const Vec3& x : s.positions()) image.push_back(normalized(x + 1.5 * Vec3{g(rng), g(rng), g(rng)}));
    double area = degree_by_area(s, image);
    EXPECT_NEAR(area, std::round(area), 1e-9);
    EXPECT_EQ(degree_by_regular_value(s, image, i), std::lround(area)) << i;
  }
}

TEST(Degree1Map, IcosphereCertificate) {
  const TriSurface& s = icosphere3();
  const auto& c = icosphere_construction();
  EXPECT_EQ(c.certificate.degree, 1);
  EXPECT_TRUE(c.certificate.degrees_agree);
  EXPECT_TRUE(c.certificate.within_bound);
  EXPECT_LE(c.certificate.discrete_lipschitz, 1.05 * kDegree1LipschitzFactor / c.estimate.D);
  for (const Vec3& x : c.map.image) EXPECT_NEAR(norm(x), 1.0, 1e-12);
  (void)s;
}

TEST(Degree1Map, SplitCurveVerticesOnEquator) {
  const auto& c = icosphere_construction();
  for (int v : c.split.cycle) EXPECT_EQ(c.map.image[v][2], 0.0) << "vertex " << v;
}

TEST(Degree1Map, RegionsPartitionTriangles) {
  const TriSurface& s = icosphere3();
  const auto& c = icosphere_construction();
  int n1 = 0, n2 = 0;
  for (int r : c.split.region) (r == 1 ? n1 : n2)++;
  EXPECT_GT(n1, 0);
  EXPECT_GT(n2, 0);
  EXPECT_EQ(n1 + n2, s.num_triangles());
  // Region 1 goes north, region 2 south.
  for (int t = 0; t < s.num_triangles(); ++t) {
    for (int v : s.triangle(t)) {
      if (c.split.region[t] == 1) EXPECT_GE(c.map.image[v][2], 0.0);
      if (c.split.region[t] == 2) EXPECT_LE(c.map.image[v][2], 0.0);
    }
  }
}

TEST(Degree1Map, SplitCurveStructure) {
  const TriSurface& s = icosphere3();
  const auto& c = icosphere_construction();
  const auto& sp = c.split;
  EXPECT_EQ(sp.g_pq.front(), sp.p);
  EXPECT_EQ(sp.g_pq.back(), sp.q);
  EXPECT_EQ(sp.g_pr.back(), sp.r);
  EXPECT_EQ(sp.gamma_qr.front(), sp.q);
  EXPECT_EQ(sp.gamma_qr.back(), sp.r);
  DistanceField fp = distance_field(s, sp.p);
  for (int v : sp.gamma_qr) EXPECT_LE(std::abs(fp.dist[v] - sp.level), sp.delta);
  // Simple closed edge cycle.
  std::set<int> seen(sp.cycle.begin(), sp.cycle.end());
  EXPECT_EQ(seen.size(), sp.cycle.size());
  for (std::size_t i = 0; i < sp.cycle.size(); ++i) {
    EXPECT_GE(s.find_edge(sp.cycle[i], sp.cycle[(i + 1) % sp.cycle.size()]), 0);
  }
  // Every cycle vertex stays outside the open disk.
  PlaneDisk disk = triangle_incircle(sp.R, sp.y0, sp.D);
  for (int v : sp.cycle) {
    const Point2& z = c.planar.value[v];
    EXPECT_GE(std::hypot(z[0] - disk.center[0], z[1] - disk.center[1]), disk.radius);
  }
}

TEST(Degree1Map, HemisphereComponentLipschitz) {
  const TriSurface& s = icosphere3();
  const auto& c = icosphere_construction();
  // Within one region the map is the disk stretch after a sqrt 2 planar map,
  // so relative to planar distance it is at most (sqrt 2 + 1) pi / D'.
  const double stretch = (std::numbers::sqrt2 + 1.0) * std::numbers::pi / c.split.D;
  for (int t = 0; t < s.num_triangles(); ++t) {
    const Tri& tr = s.triangle(t);
    for (int k = 0; k < 3; ++k) {
      int a = tr[k], b = tr[(k + 1) % 3];
      const Vec3 &x = c.map.image[a], &y = c.map.image[b];
      double ang = std::atan2(norm(cross(x, y)), dot(x, y));
      double plane = std::hypot(c.planar.value[a][0] - c.planar.value[b][0], c.planar.value[a][1] - c.planar.value[b][1]);
      EXPECT_LE(ang, stretch * plane + 1e-12);
    }
  }
}

TEST(Degree1Map, ScalingKeepsImagesAndDegree) {
  const TriSurface& s = icosphere3();
  const auto& c = icosphere_construction();
  TriSurface t = scale_metric(s, 2.0);
  Degree1Construction d = construct_degree1_map(t, c.estimate.basepoint);
  EXPECT_EQ(d.certificate.degree, c.certificate.degree);
  EXPECT_NEAR(d.certificate.discrete_lipschitz, c.certificate.discrete_lipschitz / 2.0,
              1e-9 * c.certificate.discrete_lipschitz);
  for (int v = 0; v < s.num_vertices(); ++v) {
    for (int k = 0; k < 3; ++k) EXPECT_NEAR(d.map.image[v][k], c.map.image[v][k], 1e-9);
  }
}

TEST(HypersphericityBounds, RoundSphereIntervalContainsOne) {
  const TriSurface& s = icosphere3();
  HypersphericityBounds b = hypersphericity_bounds(s, default_basepoint(s));
  EXPECT_LE(b.lower, 1.0);
  EXPECT_GE(b.upper, 1.0);
  EXPECT_LE(b.lower, b.upper);
  EXPECT_LE(b.upper / b.certificate.estimate.hs_lower, 2 * (2 + std::numbers::sqrt2) * (1 + 1e-12));
}

TEST(SystolicMap, FlatTorusConstruction) {
  // L/4 must land on a vertex of gamma for the disk to fit.
  const int n = 52;
  TriSurface s = flat_torus(13, 13, n).surface;
  std::vector<int> gamma, tau;
  for (int i = 0; i < n; ++i) {
    gamma.push_back(i * n);
    tau.push_back(i * n + n / 2);
  }
  SystolicMapResult r = assemble_systolic_map(s, gamma, tau);
  ASSERT_TRUE(r.constructed) << r.status;
  EXPECT_DOUBLE_EQ(r.L, 13.0);
  MapCertificate c = verify_map(s, *r.map, 1.0);
  EXPECT_EQ(c.degree, 1);
  EXPECT_TRUE(c.degrees_agree);
  EXPECT_LE(c.discrete_lipschitz, 1.0 + 1e-9);
  bool some_odd = false;
  for (double w : r.component_winding) {
    EXPECT_NEAR(w, std::round(w), 1e-9);
    some_odd |= std::lround(w) % 2 != 0;
  }
  EXPECT_TRUE(some_odd);
}

TEST(SystolicMap, ShortCycleHitsHypothesisGate) {
  const int n = 8;
  TriSurface s = flat_torus(1, 1, n).surface;
  std::vector<int> gamma, tau;
  for (int i = 0; i < n; ++i) {
    gamma.push_back(i * n);
    tau.push_back(i * n + 4);
  }
  SystolicMapResult r = assemble_systolic_map(s, gamma, tau);
  EXPECT_FALSE(r.constructed);
  EXPECT_NE(r.status.find("hypothesis gate"), std::string::npos);
}

TEST(SystolicMap, TauTooCloseIsReported) {
  const int n = 26;
  TriSurface s = flat_torus(13, 13, n).surface;
  std::vector<int> gamma, tau;
  for (int i = 0; i < n; ++i) {
    gamma.push_back(i * n);
    tau.push_back(i * n + 5);
  }
  SystolicMapResult r = assemble_systolic_map(s, gamma, tau);
  EXPECT_FALSE(r.constructed);
  EXPECT_NE(r.status.find("within 2 pi"), std::string::npos);
}
