#pragma once

// Lipschitz maps to the unit sphere built from a pair of distance functions.
//
// F0(x) = (dist(p,x), dist(q,x)) sends a closed curve of the surface around a
// disk in the plane. Clamping to the disk and wrapping it onto the northern
// hemisphere on one side of the curve and the southern hemisphere on the
// other gives a map whose degree is the winding number of the curve.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "hsphere/errors.hpp"
#include "hsphere/geodesic.hpp"
#include "hsphere/levelset.hpp"
#include "hsphere/surface.hpp"

namespace hsphere {

using Point2 = std::array<double, 2>;

struct PlanarMap {
  int p = -1;
  int q = -1;
  Metric metric = Metric::Unfolded;
  std::vector<Point2> value;
  /// Max over edges of plane distance / edge length.
  double lipschitz = 0.0;
};

inline PlanarMap build_planar_map(const TriSurface& s, int p, int q, Metric metric = Metric::Unfolded) {
  if (p == q) throw PreconditionError("planar map needs two distinct sources");
  DistanceGraph g = build_distance_graph(s, metric);
  DistanceField fp = distance_field(g, s, p), fq = distance_field(g, s, q);
  PlanarMap m{p, q, metric, std::vector<Point2>(s.num_vertices()), 0.0};
  for (int v = 0; v < s.num_vertices(); ++v) m.value[v] = {fp.dist[v], fq.dist[v]};
  for (int e = 0; e < s.num_edges(); ++e) {
    const Edge& ed = s.edge(e);
    double dx = m.value[ed.a][0] - m.value[ed.b][0], dy = m.value[ed.a][1] - m.value[ed.b][1];
    m.lipschitz = std::max(m.lipschitz, std::hypot(dx, dy) / s.length(e));
  }
  return m;
}

/// Disk in the plane that the split curve's image goes around.
struct PlaneDisk {
  Point2 center{};
  double radius = 0.0;
};

/// Right isosceles triangle with hypotenuse on x = R from (R, y0) to (R, y0 + D)
/// and apex to the left; its incircle.
inline PlaneDisk triangle_incircle(double R, double y0, double D) {
  const double r = D / (2.0 * std::numbers::sqrt2 + 2.0);
  return {{R - r, y0 + 0.5 * D}, r};
}

namespace detail {

inline double winding_number(const std::vector<Point2>& poly, const Point2& c) {
  double total = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Point2& a = poly[i];
    const Point2& b = poly[(i + 1) % poly.size()];
    double ang = std::atan2(b[1] - c[1], b[0] - c[0]) - std::atan2(a[1] - c[1], a[0] - c[0]);
    while (ang > std::numbers::pi) ang -= 2 * std::numbers::pi;
    while (ang < -std::numbers::pi) ang += 2 * std::numbers::pi;
    total += ang;
  }
  return total / (2 * std::numbers::pi);
}

/// Mesh neighbours shared by u and v.
inline std::vector<int> common_neighbors(const TriSurface& s, int u, int v) {
  std::vector<int> out;
  auto [b, e] = s.neighbors(u);
  for (const Neighbor* nb = b; nb != e; ++nb) {
    if (s.find_edge(nb->vertex, v) >= 0) out.push_back(nb->vertex);
  }
  return out;
}

/// Replaces every shortcut step of a graph path by two mesh edges through the
/// shared neighbour with the smallest `cost`.
template <class Cost>
std::vector<int> expand_to_mesh_path(const TriSurface& s, const std::vector<int>& path, Cost&& cost) {
  std::vector<int> out;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i > 0 && s.find_edge(path[i - 1], path[i]) < 0) {
      auto mids = common_neighbors(s, path[i - 1], path[i]);
      if (mids.empty()) throw ConstructionError("graph path step is neither an edge nor a shortcut");
      out.push_back(*std::min_element(mids.begin(), mids.end(), [&](int a, int b) { return cost(a) < cost(b); }));
    }
    out.push_back(path[i]);
  }
  return out;
}

/// Loop erasure of the closed walk w[0] -> ... -> w.back() -> w[0].
inline std::vector<int> loop_erase_closed(const std::vector<int>& walk) {
  std::vector<int> stack;
  std::map<int, int> pos;
  for (int v : walk) {
    auto it = pos.find(v);
    if (it != pos.end()) {
      while (static_cast<int>(stack.size()) > it->second + 1) {
        pos.erase(stack.back());
        stack.pop_back();
      }
      continue;
    }
    pos[v] = static_cast<int>(stack.size());
    stack.push_back(v);
  }
  return stack;
}

/// Labels triangles by the components of the complement of `barrier` edges.
inline std::vector<int> triangle_components(const TriSurface& s, const std::vector<char>& barrier, int& count) {
  std::vector<int> comp(s.num_triangles(), -1);
  count = 0;
  std::vector<int> stack;
  for (int t0 = 0; t0 < s.num_triangles(); ++t0) {
    if (comp[t0] >= 0) continue;
    comp[t0] = count;
    stack.push_back(t0);
    while (!stack.empty()) {
      int t = stack.back();
      stack.pop_back();
      for (int e : s.triangle_edges(t)) {
        if (barrier[e]) continue;
        for (int u : s.edge_triangles(e)) {
          if (comp[u] < 0) {
            comp[u] = count;
            stack.push_back(u);
          }
        }
      }
    }
    ++count;
  }
  return comp;
}

}  // namespace detail

struct SplitCurve {
  int p = -1;
  int q = -1;
  int r = -1;
  /// Vertex paths p -> q, q -> r and p -> r; consecutive vertices share an edge.
  std::vector<int> g_pq;
  std::vector<int> gamma_qr;
  std::vector<int> g_pr;
  /// The simple cycle made from the three arcs, oriented so that region 1 lies on its left.
  std::vector<int> cycle;
  /// 1 or 2 per triangle.
  std::vector<int> region;
  /// Avoided triangle: hypotenuse x = R from (R, y0) to (R, y0 + D). Every
  /// cycle vertex's F0 image lies outside its interior.
  double R = 0.0;
  double y0 = 0.0;
  double D = 0.0;
  /// Half-width of the band around the level set that gamma_qr is confined to.
  double delta = 0.0;
  double level = 0.0;
};

namespace detail {

struct SplitAttempt {
  SplitCurve curve;
  bool ok = false;
  std::string why;
};

inline SplitAttempt try_split(const TriSurface& s, const DistanceField& fp, const std::vector<double>& dq, int q, int r,
                              double level, double delta) {
  SplitAttempt out;
  SplitCurve& c = out.curve;
  c.p = fp.source;
  c.q = q;
  c.r = r;
  c.level = level;
  c.delta = delta;
  const auto& dp = fp.dist;
  const double hi = level + delta;
  if (dp[q] > hi || dp[r] > hi) {
    out.why = "endpoints outside the band";
    return out;
  }
  // Prefer a band whose floor is the lower endpoint; fall back to the level.
  std::vector<double> band;
  std::vector<int> parent;
  for (double lo : {std::min(dp[q], dp[r]), level}) {
    dijkstra(s, {{q, 0.0}}, band, &parent, [&](int v) { return dp[v] >= lo && dp[v] <= hi; });
    if (std::isfinite(band[r])) break;
  }
  if (!std::isfinite(band[r])) {
    out.why = "band does not connect q and r";
    return out;
  }
  for (int v = r; v != -1; v = parent[v]) c.gamma_qr.push_back(v);
  std::reverse(c.gamma_qr.begin(), c.gamma_qr.end());

  c.g_pq = expand_to_mesh_path(s, tree_path(fp, q), [&](int v) { return dp[v] + dq[v]; });
  c.g_pr = expand_to_mesh_path(s, tree_path(fp, r), [&](int v) { return dp[v] - dq[v]; });

  c.R = kInf;
  for (int v : c.gamma_qr) c.R = std::min(c.R, dp[v]);
  double top = -kInf, bottom = kInf;
  for (int v : c.g_pq) top = std::max(top, dp[v] + dq[v]);
  for (int v : c.g_pr) bottom = std::min(bottom, dq[v] - dp[v]);
  c.y0 = top - c.R;
  c.D = (c.R + bottom) - c.y0;
  if (!(c.D > 0)) {
    out.why = "no room for the avoided triangle";
    return out;
  }

  // Closed walk branch -> q -> r -> branch.
  std::size_t k = 0;
  while (k + 1 < c.g_pq.size() && k + 1 < c.g_pr.size() && c.g_pq[k + 1] == c.g_pr[k + 1]) ++k;
  std::vector<int> walk(c.g_pq.begin() + static_cast<std::ptrdiff_t>(k), c.g_pq.end());
  walk.insert(walk.end(), c.gamma_qr.begin() + 1, c.gamma_qr.end());
  for (std::size_t i = c.g_pr.size() - 1; i > k + 1; --i) walk.push_back(c.g_pr[i - 1]);
  std::vector<int> cyc = loop_erase_closed(walk);
  if (cyc.size() < 3 || s.find_edge(cyc.front(), cyc.back()) < 0) {
    out.why = "split walk does not close into a cycle";
    return out;
  }

  PlaneDisk disk = triangle_incircle(c.R, c.y0, c.D);
  std::vector<Point2> img;
  for (int v : cyc) img.push_back({dp[v], dq[v]});
  double w = winding_number(img, disk.center);
  if (std::abs(std::abs(w) - 1.0) > 1e-6) {
    out.why = "split cycle does not wind once around the disk";
    return out;
  }
  if (w < 0) std::reverse(cyc.begin(), cyc.end());

  std::vector<char> barrier(s.num_edges(), 0);
  for (std::size_t i = 0; i < cyc.size(); ++i) barrier[s.edge_between(cyc[i], cyc[(i + 1) % cyc.size()])] = 1;
  int count = 0;
  std::vector<int> comp = triangle_components(s, barrier, count);
  if (count != 2) {
    out.why = "split cycle cuts the surface into " + std::to_string(count) + " regions";
    return out;
  }
  const int left = comp[s.left_triangle(cyc[0], cyc[1])];
  c.region.resize(comp.size());
  for (std::size_t t = 0; t < comp.size(); ++t) c.region[t] = comp[t] == left ? 1 : 2;
  c.cycle = std::move(cyc);
  out.ok = true;
  return out;
}

}  // namespace detail

/// Split curve for the degree-1 construction around the witness component of
/// `est`. The endpoints q, r are chosen among the component's crossing-edge ends to
/// make the avoided triangle as large as possible; `attempts` pairs are tried.
inline SplitCurve build_split_curve(const TriSurface& s, const DistanceField& fp, const DEstimate& est,
                                    int attempts = 40) {
  if (validate_surface(s).genus != 0) throw PreconditionError("split curve needs a genus-0 surface");
  if (est.basepoint != fp.source) throw PreconditionError("estimate and distance field use different basepoints");
  if (est.component.crossing_edges.empty()) throw PreconditionError("estimate carries no witness component");
  const auto& dp = fp.dist;
  const double level = est.radius;
  std::vector<int> cand;
  for (int e : est.component.crossing_edges) {
    cand.push_back(s.edge(e).a);
    cand.push_back(s.edge(e).b);
  }
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());

  DistanceOracle oracle(s, fp.metric);
  struct Pair {
    double score;
    int q, r;
  };
  std::vector<Pair> pairs;
  for (std::size_t i = 0; i < cand.size(); ++i) {
    const auto& fi = oracle.field(cand[i]);
    for (std::size_t j = i + 1; j < cand.size(); ++j) {
      pairs.push_back({fi[cand[j]] - std::abs(dp[cand[i]] - dp[cand[j]]), cand[i], cand[j]});
    }
  }
  if (pairs.empty()) throw ConstructionError("witness component has fewer than two outer vertices");
  std::stable_sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) { return a.score > b.score; });

  double delta = 2.0 * s.mean_edge_length();
  std::optional<SplitCurve> best;
  std::string why;
  for (int pass = 0; pass < 2 && !best; ++pass) {
    int tried = 0;
    for (const Pair& pr : pairs) {
      if (tried >= attempts) break;
      if (dp[pr.q] > level + delta || dp[pr.r] > level + delta) continue;
      ++tried;
      auto a = detail::try_split(s, fp, oracle.field(pr.q), pr.q, pr.r, level, delta);
      if (a.ok && (!best || a.curve.D > best->D)) best = std::move(a.curve);
      if (!a.ok) why = a.why;
    }
    delta = std::max(delta, s.max_edge_length()) * 2.0;
  }
  if (!best) throw ConstructionError("could not build a split curve: " + why + "; refine the mesh");
  return *best;
}

struct SphereMap {
  std::vector<Vec3> image;
  /// 1 or 2 per triangle: which hemisphere map was applied.
  std::vector<int> region;
  /// "degree1" or "systolic".
  std::string variant;
  PlaneDisk disk;
  std::map<std::string, double> params;
};

namespace detail {

/// Disk-to-hemisphere map after clamping: north for region 1, south for region 2.
inline Vec3 wrap_to_sphere(const Point2& z, const PlaneDisk& disk, bool north) {
  double dx = z[0] - disk.center[0], dy = z[1] - disk.center[1];
  double rho = std::hypot(dx, dy);
  if (rho >= disk.radius) return {dx / rho, dy / rho, 0.0};
  if (rho == 0.0) return {0.0, 0.0, north ? 1.0 : -1.0};
  double theta = 0.5 * std::numbers::pi * rho / disk.radius;
  double st = std::sin(theta) / rho;
  return {st * dx, st * dy, north ? std::cos(theta) : -std::cos(theta)};
}

inline SphereMap wrap_map(const TriSurface& s, const PlanarMap& planar, const std::vector<int>& region,
                          const PlaneDisk& disk) {
  SphereMap m;
  m.region = region;
  m.disk = disk;
  m.image.resize(s.num_vertices());
  // A vertex touching both regions lies on the split and maps to the equator.
  std::vector<int> side(s.num_vertices(), 0);
  for (int t = 0; t < s.num_triangles(); ++t) {
    for (int v : s.triangle(t)) side[v] |= region[t];
  }
  for (int v = 0; v < s.num_vertices(); ++v) {
    Vec3 x = wrap_to_sphere(planar.value[v], disk, side[v] != 2);
    if (side[v] == 3 && x[2] != 0.0) {
      throw ConstructionError("split vertex " + std::to_string(v) +
                              " has its planar image strictly inside the disk; refine the mesh");
    }
    m.image[v] = x;
  }
  return m;
}

}  // namespace detail

/// The degree-1 map: clamp F0 to the incircle of the split curve's avoided
/// triangle, then wrap region 1 onto the northern and region 2 onto the
/// southern hemisphere. Lipschitz at most (2 + sqrt 2) pi / split.D.
inline SphereMap assemble_degree1_map(const TriSurface& s, const PlanarMap& planar, const SplitCurve& split) {
  if (planar.p != split.p || planar.q != split.q) throw PreconditionError("planar map and split curve disagree");
  if (static_cast<int>(split.region.size()) != s.num_triangles()) throw PreconditionError("split curve is incomplete");
  PlaneDisk disk = triangle_incircle(split.R, split.y0, split.D);
  SphereMap m = detail::wrap_map(s, planar, split.region, disk);
  m.variant = "degree1";
  m.params = {{"R", split.R}, {"y0", split.y0}, {"D", split.D}, {"disk_radius", disk.radius}};
  return m;
}

struct SystolicMapResult {
  /// False on the contradiction branch: no complement component winds oddly.
  bool constructed = false;
  std::string status;
  std::optional<SphereMap> map;
  int p = -1;
  int q = -1;
  double L = 0.0;
  /// Winding number of F0 along the boundary of each complement component of gamma and tau.
  std::vector<double> component_winding;
};

/// Degree-1 map from a surface of positive genus with a long shortest
/// nontrivial cycle `gamma` (length L >= 4 pi). `tau` is a cycle homologous to
/// gamma that stays at least 2 pi from q, the point of gamma at distance L/4
/// from p = gamma[0]. Disk of radius pi/sqrt 2 centred at (L/4, pi); the map
/// has Lipschitz constant at most 1.
inline SystolicMapResult assemble_systolic_map(const TriSurface& s, const std::vector<int>& gamma,
                                               const std::vector<int>& tau, Metric metric = Metric::Skeleton) {
  SystolicMapResult out;
  if (validate_surface(s).genus < 1) throw PreconditionError("systolic map needs positive genus");
  if (gamma.size() < 3 || tau.size() < 3) throw PreconditionError("gamma and tau must be cycles");
  double L = 0.0;
  for (std::size_t i = 0; i < gamma.size(); ++i) L += s.length(s.edge_between(gamma[i], gamma[(i + 1) % gamma.size()]));
  for (std::size_t i = 0; i < tau.size(); ++i) s.edge_between(tau[i], tau[(i + 1) % tau.size()]);
  out.L = L;
  const double pi = std::numbers::pi;
  if (L < 4 * pi) {
    out.status = "hypothesis gate: cycle length below 4 pi";
    return out;
  }
  DistanceGraph g = build_distance_graph(s, metric);
  const int p = gamma[0];
  DistanceField fp = distance_field(g, s, p);
  int q = gamma[1];
  for (int v : gamma) {
    if (std::abs(fp.dist[v] - L / 4) < std::abs(fp.dist[q] - L / 4)) q = v;
  }
  out.p = p;
  out.q = q;
  DistanceField fq = distance_field(g, s, q);
  for (int v : tau) {
    if (fq.dist[v] < 2 * pi) {
      out.status = "hypothesis gate: tau passes within 2 pi of q at vertex " + std::to_string(v);
      return out;
    }
  }
  PlanarMap planar{p, q, metric, std::vector<Point2>(s.num_vertices()), 0.0};
  for (int v = 0; v < s.num_vertices(); ++v) planar.value[v] = {fp.dist[v], fq.dist[v]};
  PlaneDisk disk{{fp.dist[q], pi}, pi / std::numbers::sqrt2};

  std::vector<char> barrier(s.num_edges(), 0);
  for (const auto* c : {&gamma, &tau}) {
    for (std::size_t i = 0; i < c->size(); ++i) barrier[s.edge_between((*c)[i], (*c)[(i + 1) % c->size()])] = 1;
  }
  for (int e = 0; e < s.num_edges(); ++e) {
    if (!barrier[e]) continue;
    for (int v : {s.edge(e).a, s.edge(e).b}) {
      const Point2& z = planar.value[v];
      if (std::hypot(z[0] - disk.center[0], z[1] - disk.center[1]) < disk.radius) {
        out.status = "boundary vertex " + std::to_string(v) + " maps inside the disk";
        return out;
      }
    }
  }
  int count = 0;
  std::vector<int> comp = detail::triangle_components(s, barrier, count);
  // Winding of each component's oriented boundary: sum of angle increments
  // over boundary edges traversed with the component on the left.
  out.component_winding.assign(count, 0.0);
  for (int t = 0; t < s.num_triangles(); ++t) {
    const Tri& tr = s.triangle(t);
    for (int k = 0; k < 3; ++k) {
      int a = tr[k], b = tr[(k + 1) % 3];
      if (!barrier[s.edge_between(a, b)]) continue;
      const Point2 &za = planar.value[a], &zb = planar.value[b];
      double ang = std::atan2(zb[1] - disk.center[1], zb[0] - disk.center[0]) -
                   std::atan2(za[1] - disk.center[1], za[0] - disk.center[0]);
      while (ang > pi) ang -= 2 * pi;
      while (ang < -pi) ang += 2 * pi;
      out.component_winding[comp[t]] += ang / (2 * pi);
    }
  }
  int chosen = -1;
  for (int i = 0; i < count; ++i) {
    long w = std::lround(out.component_winding[i]);
    if (w % 2 != 0) {
      chosen = i;
      break;
    }
  }
  if (chosen < 0) {
    out.status = "contradiction branch: no complement component winds oddly around the disk";
    return out;
  }
  const bool positive = out.component_winding[chosen] > 0;
  std::vector<int> region(s.num_triangles());
  for (int t = 0; t < s.num_triangles(); ++t) region[t] = (comp[t] == chosen) == positive ? 1 : 2;
  SphereMap m = detail::wrap_map(s, planar, region, disk);
  m.variant = "systolic";
  m.params = {{"L", L}, {"disk_radius", disk.radius}};
  out.map = std::move(m);
  out.constructed = true;
  out.status = "constructed";
  return out;
}

struct MapCertificate {
  double discrete_lipschitz = 0.0;
  int degree = 0;
  double signed_area_degree = 0.0;
  double residual = 0.0;
  int regular_value_degree = 0;
  Vec3 regular_value{};
  bool degrees_agree = false;
  double bound_claimed = 0.0;
  bool within_bound = false;
};

/// Signed solid angle of the spherical triangle (a, b, c).
inline double signed_solid_angle(const Vec3& a, const Vec3& b, const Vec3& c) {
  return 2.0 * std::atan2(dot(a, cross(b, c)), 1.0 + dot(a, b) + dot(b, c) + dot(c, a));
}

inline double degree_by_area(const TriSurface& s, const std::vector<Vec3>& image) {
  double total = 0.0;
  for (int t = 0; t < s.num_triangles(); ++t) {
    const Tri& tr = s.triangle(t);
    total += signed_solid_angle(image[tr[0]], image[tr[1]], image[tr[2]]);
  }
  return total / (4.0 * std::numbers::pi);
}

/// Signed count of image triangles containing y, or nullopt if y is too close
/// to an image edge to decide.
inline std::optional<int> degree_at(const TriSurface& s, const std::vector<Vec3>& image, const Vec3& y) {
  constexpr double eps = 1e-12;
  int count = 0;
  for (int t = 0; t < s.num_triangles(); ++t) {
    const Tri& tr = s.triangle(t);
    const Vec3 &a = image[tr[0]], &b = image[tr[1]], &c = image[tr[2]];
    double det = dot(a, cross(b, c));
    if (det == 0.0) continue;
    // y lies in the cone over (a, b, c) iff every face test agrees with the orientation.
    const int sign = det > 0 ? 1 : -1;
    double u1 = sign * dot(y, cross(a, b)), u2 = sign * dot(y, cross(b, c)), u3 = sign * dot(y, cross(c, a));
    if (u1 > eps && u2 > eps && u3 > eps) {
      count += sign;
    } else if (u1 >= -eps && u2 >= -eps && u3 >= -eps) {
      return std::nullopt;
    }
  }
  return count;
}

inline int degree_by_regular_value(const TriSurface& s, const std::vector<Vec3>& image, std::uint64_t seed,
                                   Vec3* used = nullptr) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n01;
  for (int attempt = 0; attempt < 64; ++attempt) {
    Vec3 y{n01(rng), n01(rng), n01(rng)};
    y = (1.0 / norm(y)) * y;
    if (auto d = degree_at(s, image, y)) {
      if (used) *used = y;
      return *d;
    }
  }
  throw ConstructionError("no regular value found for the degree count");
}

inline MapCertificate verify_map(const TriSurface& s, const SphereMap& m, double bound_claimed,
                                 std::uint64_t seed = 1) {
  if (static_cast<int>(m.image.size()) != s.num_vertices()) throw PreconditionError("map is not defined on all vertices");
  for (int v = 0; v < s.num_vertices(); ++v) {
    if (std::abs(norm(m.image[v]) - 1.0) > 1e-12) {
      throw PreconditionError("image of vertex " + std::to_string(v) + " is not a unit vector");
    }
  }
  MapCertificate c;
  c.bound_claimed = bound_claimed;
  for (int e = 0; e < s.num_edges(); ++e) {
    const Edge& ed = s.edge(e);
    const Vec3 &a = m.image[ed.a], &b = m.image[ed.b];
    double ang = std::atan2(norm(cross(a, b)), dot(a, b));
    c.discrete_lipschitz = std::max(c.discrete_lipschitz, ang / s.length(e));
  }
  c.signed_area_degree = degree_by_area(s, m.image);
  c.degree = static_cast<int>(std::lround(c.signed_area_degree));
  c.residual = std::abs(c.signed_area_degree - c.degree);
  c.regular_value_degree = degree_by_regular_value(s, m.image, seed, &c.regular_value);
  c.degrees_agree = c.residual <= 0.1 && c.regular_value_degree == c.degree;
  c.within_bound = c.discrete_lipschitz <= bound_claimed * (1.0 + 1e-9);
  return c;
}

inline constexpr double kDegree1LipschitzFactor = (2.0 + std::numbers::sqrt2) * std::numbers::pi;

struct Degree1Construction {
  DEstimate estimate;
  SplitCurve split;
  PlanarMap planar;
  SphereMap map;
  MapCertificate certificate;
};

/// Estimate, split curve, map and certificate from basepoint p.
inline Degree1Construction construct_degree1_map(const TriSurface& s, int p, RadiiPolicy policy = {},
                                                 std::uint64_t seed = 1) {
  Degree1Construction c;
  DistanceField fp = distance_field(s, p);
  c.estimate = analyze_levels(s, fp, policy).estimate;
  c.split = build_split_curve(s, fp, c.estimate);
  c.planar = build_planar_map(s, p, c.split.q, fp.metric);
  c.map = assemble_degree1_map(s, c.planar, c.split);
  c.certificate = verify_map(s, c.map, kDegree1LipschitzFactor / c.split.D, seed);
  return c;
}

struct HypersphericityBounds {
  double lower = 0.0;
  double upper = 0.0;
  double from_estimate = 0.0;
  double from_map = 0.0;
  Degree1Construction certificate;
};

inline HypersphericityBounds hypersphericity_bounds(const TriSurface& s, int p, RadiiPolicy policy = {}) {
  HypersphericityBounds b;
  b.certificate = construct_degree1_map(s, p, policy);
  const auto& cert = b.certificate.certificate;
  b.from_estimate = b.certificate.estimate.hs_lower;
  if (cert.degrees_agree && std::abs(cert.degree) == 1 && cert.discrete_lipschitz > 0) {
    b.from_map = 1.0 / cert.discrete_lipschitz;
  }
  b.lower = std::max(b.from_estimate, b.from_map);
  b.upper = b.certificate.estimate.hs_upper;
  return b;
}

/// Image positions as an OBJ mesh with the surface's triangles.
inline void write_sphere_map_obj(std::ostream& os, const TriSurface& s, const SphereMap& m) {
  os.precision(17);
  os << "# sphere map " << m.variant << "\n";
  for (const Vec3& x : m.image) os << "v " << x[0] << ' ' << x[1] << ' ' << x[2] << "\n";
  for (const Tri& t : s.triangles()) os << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << "\n";
}

}  // namespace hsphere
