#include <gtest/gtest.h>

#include <functional>
#include <random>

#include "hsphere/generators.hpp"
#include "hsphere/homology.hpp"

using namespace hsphere;

namespace {

// A simple cycle on a closed surface is Z2-nontrivial iff it does not separate.
bool separates(const TriSurface& s, const std::vector<int>& cyc) {
  std::vector<char> cut(s.num_edges(), 0);
  for (std::size_t i = 0; i < cyc.size(); ++i) cut[s.edge_between(cyc[i], cyc[(i + 1) % cyc.size()])] = 1;
  std::vector<char> seen(s.num_triangles(), 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int count = 1;
  while (!stack.empty()) {
    int t = stack.back();
    stack.pop_back();
    for (int e : s.triangle_edges(t)) {
      if (cut[e]) continue;
      for (int u : s.edge_triangles(e)) {
        if (!seen[u]) {
          seen[u] = 1;
          ++count;
          stack.push_back(u);
        }
      }
    }
  }
  return count < s.num_triangles();
}

// Shortest non-separating simple cycle by exhaustive DFS over simple cycles
// with at most `max_edges` edges, each rooted at its smallest vertex.
double brute_force_systole(const TriSurface& s, int max_edges) {
  double best = kInf;
  std::vector<int> path;
  std::vector<char> on(s.num_vertices(), 0);
  std::function<void(int, double)> dfs = [&](int v, double len) {
    if (len >= best) return;
    auto [b, e] = s.neighbors(v);
    for (const Neighbor* nb = b; nb != e; ++nb) {
      int u = nb->vertex;
      double l = len + s.length(nb->edge);
      if (u == path[0] && path.size() >= 3) {
        if (l < best && !separates(s, path)) best = l;
        continue;
      }
      if (u < path[0] || on[u] || static_cast<int>(path.size()) >= max_edges) continue;
      on[u] = 1;
      path.push_back(u);
      dfs(u, l);
      path.pop_back();
      on[u] = 0;
    }
  };
  for (int v = 0; v < s.num_vertices(); ++v) {
    path = {v};
    on[v] = 1;
    dfs(v, 0.0);
    on[v] = 0;
  }
  return best;
}

// Edge chain as a bit vector; boundary space spanned by triangle boundaries.
bool is_boundary(const TriSurface& s, std::vector<char> chain) {
  std::vector<std::vector<char>> rows;
  for (int t = 0; t < s.num_triangles(); ++t) {
    std::vector<char> r(s.num_edges(), 0);
    for (int e : s.triangle_edges(t)) r[e] = 1;
    rows.push_back(r);
  }
  // Gaussian elimination with pivots.
  std::vector<int> pivot;
  std::vector<std::vector<char>> basis;
  for (auto& r : rows) {
    for (std::size_t i = 0; i < basis.size(); ++i) {
      if (r[pivot[i]]) {
        for (int e = 0; e < s.num_edges(); ++e) r[e] ^= basis[i][e];
      }
    }
    auto it = std::find(r.begin(), r.end(), 1);
    if (it == r.end()) continue;
    pivot.push_back(static_cast<int>(it - r.begin()));
    basis.push_back(r);
  }
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (chain[pivot[i]]) {
      for (int e = 0; e < s.num_edges(); ++e) chain[e] ^= basis[i][e];
    }
  }
  return std::find(chain.begin(), chain.end(), 1) == chain.end();
}

std::vector<int> vertex_link(const TriSurface& s, int v) {
  std::vector<int> out;
  auto [b, e] = s.neighbors(v);
  for (const Neighbor* nb = b; nb != e; ++nb) out.push_back(nb->vertex);
  return out;
}

}  // namespace

TEST(Homology, FlatTorusBasis) {
  CycleBasis b = homology_basis(flat_torus(1, 1, 6).surface);
  ASSERT_EQ(b.cycles.size(), 2u);
  EXPECT_EQ(b.intersection, (std::vector<std::vector<int>>{{0, 1}, {1, 0}}));
}

TEST(Homology, GenusTwoBasisHasRankFour) {
  TriSurface s = genus_g(2, 0.5, 1).surface;
  CycleBasis b = homology_basis(s);
  ASSERT_EQ(b.cycles.size(), 4u);
  Z2Span span;
  for (const auto& c : b.cycles) EXPECT_TRUE(span.insert(c.signature));
  EXPECT_EQ(span.rank(), 4);
  for (const auto& c : b.cycles) EXPECT_NEAR(c.length, cycle_length(s, c.vertices), 1e-12);
}

TEST(Homology, SphereHasEmptyBasis) {
  CycleBasis b = homology_basis(icosphere(1).surface);
  EXPECT_TRUE(b.empty_genus_zero);
  EXPECT_TRUE(b.cycles.empty());
  EXPECT_THROW(systole(icosphere(1).surface), PreconditionError);
}

TEST(Homology, SignatureMatchesBoundarySpace) {
  for (const TriSurface& s : {flat_torus(1, 1, 4).surface, genus_g(1, 0.5, 1).surface}) {
    ASSERT_LE(s.num_edges(), 200);
    HomologySignatures h(s);
    std::mt19937 rng(17);
    std::vector<std::vector<int>> cycles;
    for (const auto& c : greedy_minimal_basis(s).cycles) cycles.push_back(c.vertices);
    for (int v = 0; v < s.num_vertices(); v += 3) cycles.push_back(vertex_link(s, v));
    for (int trial = 0; trial < 40; ++trial) {
      std::vector<char> chain(s.num_edges(), 0);
      Signature sig = h.zero();
      for (const auto& c : cycles) {
        if (rng() % 2) continue;
        for (std::size_t i = 0; i < c.size(); ++i) chain[s.edge_between(c[i], c[(i + 1) % c.size()])] ^= 1;
        sig ^= h.of_cycle(c);
      }
      EXPECT_EQ(sig.is_zero(), is_boundary(s, chain));
    }
  }
}

TEST(Systole, FlatTorusSixMatchesBruteForce) {
  TriSurface s = flat_torus(1, 1, 6).surface;
  Cycle c = systole(s);
  double brute = brute_force_systole(s, 6);
  EXPECT_NEAR(c.length, brute, 1e-12);
  EXPECT_NEAR(c.length, 1.0, 1e-12);
  EXPECT_FALSE(c.signature.is_zero());
  EXPECT_FALSE(separates(s, c.vertices));
}

TEST(Systole, FlatTorusSixteen) {
  Cycle c = systole(flat_torus(1, 1, 16).surface, 2);
  EXPECT_NEAR(c.length, 1.0, 1e-9);
}

TEST(Systole, RectangularTorusPicksShortSide) {
  Cycle c = systole(flat_torus(0.5, 1.5, 8).surface);
  EXPECT_NEAR(c.length, 0.5, 1e-12);
}

TEST(Systole, ThinHandleGirth) {
  auto g = genus_g(2, 0.2, 2);
  Cycle c = systole(g.surface);
  EXPECT_NEAR(c.length, g.reference.at("thin_handle_girth"), 1e-12);
}

TEST(Systole, ScalesLinearly) {
  TriSurface s = genus_g(1, 0.5, 1).surface;
  double base = systole(s).length;
  for (double lambda : {1.0 / 3.0, 2.0, 10.0}) {
    EXPECT_NEAR(systole(scale_metric(s, lambda)).length, lambda * base, 1e-9 * lambda * base);
  }
}

TEST(GreedyBasis, FlatTorusTwoUnitCycles) {
  CycleBasis b = greedy_minimal_basis(flat_torus(1, 1, 6).surface);
  ASSERT_EQ(b.cycles.size(), 2u);
  EXPECT_NEAR(b.cycles[0].length, 1.0, 1e-12);
  EXPECT_NEAR(b.cycles[1].length, 1.0, 1e-12);
  EXPECT_EQ(b.intersection[0][1], 1);
}

TEST(GreedyBasis, NondecreasingAndBoundedBelowBySystole) {
  for (int G = 1; G <= 3; ++G) {
    TriSurface s = genus_g(G, 0.4, 1).surface;
    CycleBasis b = greedy_minimal_basis(s, 2);
    ASSERT_EQ(static_cast<int>(b.cycles.size()), 2 * G);
    double sys = systole(s).length;
    Z2Span span;
    for (std::size_t k = 0; k < b.cycles.size(); ++k) {
      EXPECT_TRUE(span.insert(b.cycles[k].signature));
      EXPECT_GE(b.cycles[k].length, sys - 1e-12);
      if (k > 0) EXPECT_GE(b.cycles[k].length, b.cycles[k - 1].length - 1e-12);
    }
  }
}

TEST(Intersection, MeridianLongitude) {
  const int n = 6;
  TriSurface s = flat_torus(1, 1, n).surface;
  std::vector<int> meridian, longitude;
  for (int i = 0; i < n; ++i) {
    meridian.push_back(i * n);
    longitude.push_back(i);
  }
  EXPECT_EQ(intersection_mod2(s, meridian, longitude), 1);
  EXPECT_EQ(intersection_mod2(s, longitude, meridian), 1);
  EXPECT_EQ(intersection_mod2(s, meridian, meridian), 0);
  std::vector<int> parallel;
  for (int i = 0; i < n; ++i) parallel.push_back(i * n + 2);
  EXPECT_EQ(intersection_mod2(s, meridian, parallel), 0);
}

TEST(Intersection, MatchesSignaturePairing) {
  TriSurface s = genus_g(2, 0.5, 1).surface;
  HomologySignatures h(s);
  // Pairing matrix on signature coordinates from the tree-cotree basis.
  CycleBasis basis = homology_basis(s);
  const int r = h.rank();
  std::vector<std::vector<int>> M(r, std::vector<int>(r, 0));
  for (std::size_t i = 0; i < basis.cycles.size(); ++i) {
    for (std::size_t j = 0; j < basis.cycles.size(); ++j) {
      M[basis.cycles[i].signature.top_bit()][basis.cycles[j].signature.top_bit()] = basis.intersection[i][j];
    }
  }
  std::mt19937 rng(23);
  std::uniform_int_distribution<int> vert(0, s.num_vertices() - 1);
  int checked = 0;
  for (int trial = 0; trial < 30; ++trial) {
    auto ca = detail::root_candidates(s, h, vert(rng));
    auto cb = detail::root_candidates(s, h, vert(rng));
    Cycle a = detail::candidate_cycle(s, h, ca[rng() % ca.size()]);
    Cycle b = detail::candidate_cycle(s, h, cb[rng() % cb.size()]);
    int expect = 0;
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j) expect ^= a.signature.bit(i) & b.signature.bit(j) & M[i][j];
    EXPECT_EQ(intersection_mod2(s, a.vertices, b.vertices), expect);
    ++checked;
  }
  EXPECT_EQ(checked, 30);
}

TEST(Planarity, SphereIsPlanarAtEveryRadius) {
  PlanarityReport r = planarity_radius(icosphere(2).surface);
  EXPECT_EQ(r.radius, kInf);
  EXPECT_GT(r.diameter_bound, 3.0);
}

TEST(Planarity, FlatTorusThresholdNearHalf) {
  PlanarityReport r = planarity_radius(flat_torus(1, 1, 16).surface, Metric::Unfolded, 2);
  EXPECT_GE(r.radius, 0.5 - 1e-12);
  EXPECT_LE(r.radius, 0.6);
  EXPECT_EQ(r.witness_genus, 1);
}

TEST(Planarity, BallGenusOfWholeSurface) {
  TriSurface s = genus_g(3, 0.5, 1).surface;
  std::vector<double> d(s.num_vertices(), 0.0);
  EXPECT_EQ(ball_genus(s, d, 1.0), 3);
  std::vector<double> far(s.num_vertices(), 2.0);
  far[0] = 0.0;
  EXPECT_EQ(ball_genus(s, far, 1.0), 0);
}

TEST(Straightness, TorusSystolePasses) {
  TriSurface s = flat_torus(1, 1, 8).surface;
  Cycle c = systole(s);
  StraightnessAudit a = strict_straightness_audit(s, c, 1e-12);
  EXPECT_TRUE(a.pass);
  EXPECT_GT(a.pairs_checked, 0);
}

TEST(CycleInClass, StaysInAllowedRegion) {
  const int n = 16;
  TriSurface s = flat_torus(1, 1, n).surface;
  std::vector<int> gamma;
  for (int i = 0; i < n; ++i) gamma.push_back(i * n);
  HomologySignatures h(s);
  Signature target = h.of_cycle(gamma);
  DistanceField fq = distance_field(s, 0, Metric::Skeleton);
  Cycle tau = cycle_in_class(s, target, [&](int v) { return fq.dist[v] >= 0.4; });
  ASSERT_FALSE(tau.vertices.empty());
  EXPECT_EQ(tau.signature, target);
  for (int v : tau.vertices) EXPECT_GE(fq.dist[v], 0.4);
  EXPECT_NEAR(tau.length, 1.0, 1e-12);
}
