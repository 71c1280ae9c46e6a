#pragma once

// Deterministic test surfaces with known analytic properties, plus the
// degree-2 branched cover of the round sphere over an epsilon-dense set.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <random>
#include <string>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "hsphere/errors.hpp"
#include "hsphere/geodesic.hpp"
#include "hsphere/surface.hpp"

namespace hsphere {

struct GeneratedSurface {
  std::string kind;
  TriSurface surface;
  /// Analytic reference values (e.g. "D" for the round sphere, "systole" for flat tori).
  std::map<std::string, double> reference;
};

namespace detail {

inline std::pair<std::vector<Vec3>, std::vector<Tri>> unit_icosphere(int subdiv) {
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Vec3> pos = {{-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0}, {0, -1, t}, {0, 1, t},
                           {0, -1, -t}, {0, 1, -t}, {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
  for (auto& p : pos) p = normalized(p);
  std::vector<Tri> tris = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
                           {11, 10, 2}, {10, 7, 6}, {7, 1, 8},   {3, 9, 4},  {3, 4, 2},   {3, 2, 6}, {3, 6, 8},
                           {3, 8, 9},  {4, 9, 5},  {2, 4, 11},  {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};
  for (int level = 0; level < subdiv; ++level) {
    std::map<std::pair<int, int>, int> mid;
    auto midpoint = [&](int a, int b) {
      auto k = std::minmax(a, b);
      auto it = mid.find(k);
      if (it != mid.end()) return it->second;
      pos.push_back(normalized(0.5 * (pos[a] + pos[b])));
      int id = static_cast<int>(pos.size()) - 1;
      mid.emplace(k, id);
      return id;
    };
    std::vector<Tri> next;
    next.reserve(tris.size() * 4);
    for (const Tri& tr : tris) {
      int ab = midpoint(tr[0], tr[1]), bc = midpoint(tr[1], tr[2]), ca = midpoint(tr[2], tr[0]);
      next.push_back({tr[0], ab, ca});
      next.push_back({ab, tr[1], bc});
      next.push_back({ca, bc, tr[2]});
      next.push_back({ab, bc, ca});
    }
    tris = std::move(next);
  }
  return {pos, tris};
}

inline void require(bool ok, const std::string& what) {
  if (!ok) throw PreconditionError("invalid generator parameters: " + what);
}

}  // namespace detail

inline GeneratedSurface icosphere(int subdiv, double radius = 1.0) {
  detail::require(subdiv >= 0 && subdiv <= 7, "icosphere subdiv must be in [0, 7]");
  detail::require(radius > 0, "icosphere radius must be positive");
  auto [pos, tris] = detail::unit_icosphere(subdiv);
  for (auto& p : pos) p = radius * p;
  GeneratedSurface g{"icosphere", TriSurface::from_positions(std::move(pos), std::move(tris)), {}};
  g.reference["D"] = std::numbers::pi * radius;
  g.reference["hypersphericity"] = radius;
  g.reference["shortest_closed_geodesic"] = 2.0 * std::numbers::pi * radius;
  return g;
}

/// Axis-aligned ellipsoid with semi-axes (a, b, c) sampled on icosphere(n).
inline GeneratedSurface ellipsoid(double a, double b, double c, int n) {
  detail::require(a > 0 && b > 0 && c > 0, "ellipsoid semi-axes must be positive");
  detail::require(n >= 0 && n <= 7, "ellipsoid subdiv must be in [0, 7]");
  auto [pos, tris] = detail::unit_icosphere(n);
  for (auto& p : pos) p = {a * p[0], b * p[1], c * p[2]};
  GeneratedSurface g{"ellipsoid", TriSurface::from_positions(std::move(pos), std::move(tris)), {}};
  // Shortest principal ellipse (Ramanujan's second approximation).
  auto perimeter = [](double x, double y) {
    double h = (x - y) * (x - y) / ((x + y) * (x + y));
    return std::numbers::pi * (x + y) * (1.0 + 3.0 * h / (10.0 + std::sqrt(4.0 - 3.0 * h)));
  };
  g.reference["shortest_principal_ellipse"] = std::min({perimeter(a, b), perimeter(b, c), perimeter(a, c)});
  return g;
}

/// Two unit lobes along the x axis joined by a neck of radius `neck_radius`.
inline GeneratedSurface dumbbell(double neck_radius, int n) {
  detail::require(neck_radius > 0 && neck_radius <= 1, "dumbbell neck radius must be in (0, 1]");
  detail::require(n >= 0 && n <= 7, "dumbbell subdiv must be in [0, 7]");
  auto [pos, tris] = detail::unit_icosphere(n);
  for (auto& p : pos) {
    double g = neck_radius + (1.0 - neck_radius) * (1.0 - std::exp(-(p[0] * p[0]) / (0.3 * 0.3)));
    p = {2.0 * p[0], g * p[1], g * p[2]};
  }
  GeneratedSurface s{"dumbbell", TriSurface::from_positions(std::move(pos), std::move(tris)), {}};
  s.reference["neck_circumference"] = 2.0 * std::numbers::pi * neck_radius;
  return s;
}

/// Unit sphere with `fingers` long protrusions in fixed directions.
inline GeneratedSurface fingered_sphere(int fingers, int n) {
  detail::require(fingers >= 0 && fingers <= 6, "fingered_sphere supports 0..6 fingers");
  detail::require(n >= 0 && n <= 7, "fingered_sphere subdiv must be in [0, 7]");
  static const Vec3 dirs[6] = {{1, 0, 0}, {0, 1, 0}, {-1, 0, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
  auto [pos, tris] = detail::unit_icosphere(n);
  for (auto& p : pos) {
    double r = 1.0;
    for (int i = 0; i < fingers; ++i) {
      double ang = std::acos(std::clamp(dot(p, dirs[i]), -1.0, 1.0));
      r += 1.5 * std::exp(-(ang / 0.35) * (ang / 0.35));
    }
    p = r * p;
  }
  GeneratedSurface g{"fingered_sphere", TriSurface::from_positions(std::move(pos), std::move(tris)), {}};
  g.reference["fingers"] = fingers;
  return g;
}

/// Flat torus R^2 / (L1 Z x L2 Z) on an n x n grid with one diagonal per cell.
inline GeneratedSurface flat_torus(double L1, double L2, int n) {
  detail::require(L1 > 0 && L2 > 0, "flat torus side lengths must be positive");
  detail::require(n >= 3, "flat torus needs n >= 3");
  auto id = [n](int i, int j) { return ((i % n + n) % n) * n + ((j % n + n) % n); };
  std::vector<Tri> tris;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      tris.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      tris.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }
  const double hx = L1 / n, hy = L2 / n, hd = std::hypot(hx, hy);
  auto len = [&](int a, int b) {
    int di = std::abs(a / n - b / n), dj = std::abs(a % n - b % n);
    di = std::min(di, n - di);
    dj = std::min(dj, n - dj);
    if (di == 1 && dj == 1) return hd;
    return di == 1 ? hx : hy;
  };
  GeneratedSurface g{"flat_torus", TriSurface::from_edge_lengths(n * n, std::move(tris), len), {}};
  g.reference["systole"] = std::min(L1, L2);
  g.reference["area"] = L1 * L2;
  return g;
}

/// Closed genus-G surface: the boundary of a slab (thickness 0.5) made of G
/// square rings of side 3 with unit holes, placed side by side along x. The
/// outermost left bar of the first ring has width `handle_scale`, so the loop
/// around it has length 2 * (handle_scale + 0.5). Each coarse cell is split
/// into n x n quads.
inline GeneratedSurface genus_g(int G, double handle_scale, int n) {
  detail::require(G >= 1 && G <= 8, "genus_g supports 1 <= G <= 8");
  detail::require(handle_scale > 0 && handle_scale <= 1, "handle_scale must be in (0, 1]");
  detail::require(n >= 1 && n <= 8, "genus_g resolution must be in [1, 8]");
  const double thickness = 0.5;
  // Coarse grid lines.
  std::vector<double> xs{1.0 - handle_scale};
  for (int i = 0; i < 3 * G; ++i) xs.push_back(1.0 + i);
  std::vector<double> ys{0, 1, 2, 3};
  const int cx = static_cast<int>(xs.size()) - 1, cy = 3;
  auto solid = [&](int i, int j) {
    if (i < 0 || j < 0 || i >= cx || j >= cy) return false;
    // Cell i spans [xs[i], xs[i+1]]; holes sit at coarse cells 3k+1 (k = ring), row 1.
    return !(j == 1 && i % 3 == 1);
  };
  // Fine lattice coordinates.
  auto fine = [n](const std::vector<double>& c) {
    std::vector<double> f;
    for (std::size_t i = 0; i + 1 < c.size(); ++i) {
      for (int k = 0; k < n; ++k) f.push_back(c[i] + (c[i + 1] - c[i]) * k / n);
    }
    f.push_back(c.back());
    return f;
  };
  const std::vector<double> fx = fine(xs), fy = fine(ys);
  const int nz = std::max(1, n / 2);
  std::vector<double> fz;
  for (int k = 0; k <= nz; ++k) fz.push_back(thickness * k / nz);

  std::map<std::tuple<int, int, int>, int> vid;
  std::vector<Vec3> pos;
  auto vertex = [&](int i, int j, int k) {
    auto key = std::make_tuple(i, j, k);
    auto it = vid.find(key);
    if (it != vid.end()) return it->second;
    pos.push_back({fx[i], fy[j], fz[k]});
    vid.emplace(key, static_cast<int>(pos.size()) - 1);
    return static_cast<int>(pos.size()) - 1;
  };
  std::vector<Tri> tris;
  // Quad a,b,c,d in counter-clockwise order seen from outside.
  auto quad = [&](int a, int b, int c, int d) {
    tris.push_back({a, b, c});
    tris.push_back({a, c, d});
  };
  for (int i = 0; i < cx; ++i) {
    for (int j = 0; j < cy; ++j) {
      if (!solid(i, j)) continue;
      for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
          int x0 = i * n + a, y0 = j * n + b;
          quad(vertex(x0, y0, nz), vertex(x0 + 1, y0, nz), vertex(x0 + 1, y0 + 1, nz), vertex(x0, y0 + 1, nz));
          quad(vertex(x0, y0, 0), vertex(x0, y0 + 1, 0), vertex(x0 + 1, y0 + 1, 0), vertex(x0 + 1, y0, 0));
        }
      }
      for (int a = 0; a < n; ++a) {
        for (int k = 0; k < nz; ++k) {
          if (!solid(i + 1, j)) {  // +x wall
            int x = (i + 1) * n, y0 = j * n + a;
            quad(vertex(x, y0, k), vertex(x, y0 + 1, k), vertex(x, y0 + 1, k + 1), vertex(x, y0, k + 1));
          }
          if (!solid(i - 1, j)) {  // -x wall
            int x = i * n, y0 = j * n + a;
            quad(vertex(x, y0, k), vertex(x, y0, k + 1), vertex(x, y0 + 1, k + 1), vertex(x, y0 + 1, k));
          }
          if (!solid(i, j + 1)) {  // +y wall
            int y = (j + 1) * n, x0 = i * n + a;
            quad(vertex(x0, y, k), vertex(x0, y, k + 1), vertex(x0 + 1, y, k + 1), vertex(x0 + 1, y, k));
          }
          if (!solid(i, j - 1)) {  // -y wall
            int y = j * n, x0 = i * n + a;
            quad(vertex(x0, y, k), vertex(x0 + 1, y, k), vertex(x0 + 1, y, k + 1), vertex(x0, y, k + 1));
          }
        }
      }
    }
  }
  GeneratedSurface g{"genus_g", TriSurface::from_positions(std::move(pos), std::move(tris)), {}};
  g.reference["genus"] = G;
  g.reference["thin_handle_girth"] = 2.0 * (handle_scale + thickness);
  return g;
}

/// Generic entry point used by the CLI: kind name plus a flat parameter map.
inline GeneratedSurface generate(const std::string& kind, const std::map<std::string, double>& params,
                                 std::uint64_t /*seed*/ = 0) {
  auto get = [&](const char* key, double dflt) {
    auto it = params.find(key);
    return it == params.end() ? dflt : it->second;
  };
  auto geti = [&](const char* key, int dflt) { return static_cast<int>(std::lround(get(key, dflt))); };
  if (kind == "icosphere") return icosphere(geti("subdiv", 3), get("radius", 1.0));
  if (kind == "ellipsoid") return ellipsoid(get("a", 1.0), get("b", 1.0), get("c", 0.5), geti("n", 3));
  if (kind == "dumbbell") return dumbbell(get("neck_radius", 0.2), geti("n", 3));
  if (kind == "fingered_sphere") return fingered_sphere(geti("fingers", 3), geti("n", 3));
  if (kind == "flat_torus") return flat_torus(get("L1", 1.0), get("L2", 1.0), geti("n", 16));
  if (kind == "genus_g") return genus_g(geti("G", 2), get("handle_scale", 1.0), geti("n", 2));
  throw PreconditionError("unknown generator kind '" + kind + "'");
}

// ---------------------------------------------------------------------------

struct BranchedCover {
  TriSurface cover;
  TriSurface base;
  /// Cover vertex -> base vertex (simplicial covering projection).
  std::vector<int> vertex_map;
  std::vector<int> branch_points;
  /// Base edges across which the sheets are exchanged.
  std::vector<int> cut_edges;
  double epsilon = 0.0;
  int base_subdiv = 0;
};

/// Degree-2 cover of the unit icosphere branched over a greedy epsilon-net.
///
/// The branch set is grown by farthest-point sampling (start vertex from
/// `seed`) until every base vertex is within epsilon, padded to even size,
/// paired greedily by distance, and the mod-2 sum of shortest paths between
/// paired points is used as the cut. The cover metric is the pullback.
inline BranchedCover branched_double_cover(double epsilon, std::uint64_t seed, int max_subdiv = 6) {
  if (!(epsilon > 0 && epsilon < 1)) throw PreconditionError("branched cover epsilon must be in (0, 1)");
  int subdiv = 0;
  GeneratedSurface base = icosphere(0);
  while (base.surface.max_edge_length() > epsilon / 3.0) {
    if (++subdiv > max_subdiv) throw PreconditionError("epsilon too small for the refinement budget");
    base = icosphere(subdiv);
  }
  const TriSurface& S = base.surface;
  const int nv = S.num_vertices();

  std::mt19937_64 rng(seed);
  std::vector<int> net{static_cast<int>(rng() % static_cast<std::uint64_t>(nv))};
  std::vector<double> near;
  std::vector<std::pair<int, double>> seeds{{net[0], 0.0}};
  detail::dijkstra(S, seeds, near, nullptr);
  auto farthest = [&] {
    return static_cast<int>(std::max_element(near.begin(), near.end()) - near.begin());
  };
  auto add = [&](int v) {
    net.push_back(v);
    std::vector<double> dv;
    detail::dijkstra(S, {{v, 0.0}}, dv, nullptr);
    for (int i = 0; i < nv; ++i) near[i] = std::min(near[i], dv[i]);
  };
  while (near[farthest()] > epsilon) add(farthest());
  if (net.size() % 2 == 1) add(farthest());
  if (net.size() < 2) add(farthest());

  // Greedy pairing by distance.
  std::vector<std::vector<double>> nd;
  std::vector<std::vector<int>> parents;
  for (int b : net) {
    DistanceField f = distance_field(S, b, Metric::Skeleton);
    nd.push_back(f.dist);
    parents.push_back(f.parent);
  }
  std::vector<std::tuple<double, int, int>> pairs;
  for (std::size_t i = 0; i < net.size(); ++i) {
    for (std::size_t j = i + 1; j < net.size(); ++j) pairs.emplace_back(nd[i][net[j]], i, j);
  }
  std::sort(pairs.begin(), pairs.end());
  std::vector<char> used(net.size(), 0);
  std::vector<char> cut(S.num_edges(), 0);
  for (auto [d, i, j] : pairs) {
    if (used[i] || used[j]) continue;
    used[i] = used[j] = 1;
    for (int v = net[j]; parents[i][v] != -1; v = parents[i][v]) cut[S.edge_between(v, parents[i][v])] ^= 1;
  }

  // Triangle copy (t, g) is glued across base edge e to (t', g ^ cut[e]).
  // Around a vertex, corner (t_k, g) lies in the orbit of (t_0, g ^ flips[k]);
  // an odd number of cut edges in the star makes it a branch point.
  std::vector<int> first_id(nv);
  std::vector<int> cover_to_base;
  std::vector<char> is_branch(nv, 0);
  // corner_id[t][k][sheet]
  std::vector<std::array<std::array<int, 2>, 3>> corner(S.num_triangles());
  for (int v = 0; v < nv; ++v) {
    auto [nb, ne] = S.neighbors(v);
    const int d = static_cast<int>(ne - nb);
    auto star = S.vertex_triangles(v);
    int parity = 0;
    std::vector<int> flips(d, 0);
    for (int k = 0; k < d; ++k) {
      flips[k] = parity;
      // Triangle k and k+1 share the edge to neighbor k+1.
      parity ^= cut[nb[(k + 1) % d].edge];
    }
    first_id[v] = static_cast<int>(cover_to_base.size());
    cover_to_base.push_back(v);
    if (parity == 0) {
      cover_to_base.push_back(v);
    } else {
      is_branch[v] = 1;
    }
    for (int k = 0; k < d; ++k) {
      int t = star[k];
      int slot = S.triangle(t)[0] == v ? 0 : (S.triangle(t)[1] == v ? 1 : 2);
      for (int sh = 0; sh < 2; ++sh) corner[t][slot][sh] = first_id[v] + (parity ? 0 : (sh ^ flips[k]));
    }
  }
  std::vector<Tri> tris;
  for (int t = 0; t < S.num_triangles(); ++t) {
    for (int g = 0; g < 2; ++g) {
      tris.push_back({corner[t][0][g], corner[t][1][g], corner[t][2][g]});
    }
  }
  TriSurface cover = TriSurface::from_edge_lengths(
      static_cast<int>(cover_to_base.size()), std::move(tris),
      [&](int a, int b) { return S.length(S.edge_between(cover_to_base[a], cover_to_base[b])); });

  BranchedCover out{std::move(cover), S, std::move(cover_to_base), net, {}, epsilon, subdiv};
  for (int e = 0; e < S.num_edges(); ++e) {
    if (cut[e]) out.cut_edges.push_back(e);
  }
  return out;
}

}  // namespace hsphere
