#pragma once

// Level sets of the distance from a basepoint: components, the D estimator,
// Reeb graphs and widths of maps.
//
// Vertex values are perturbed symbolically by their rank in (dist, id) order,
// so every level between two consecutive ranks is a regular value and its
// level set is a disjoint union of closed loops through edge midpoints of
// crossing edges. Component topology only changes when a vertex is passed.

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <queue>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "hsphere/errors.hpp"
#include "hsphere/geodesic.hpp"
#include "hsphere/surface.hpp"

namespace hsphere {

/// Lower/upper factors of the two-sided estimate.
inline const double kSqrt2 = std::sqrt(2.0);
inline const double kHsLowerFactor = 1.0 / (std::numbers::pi * (2.0 + kSqrt2));  // D / (pi (2 + sqrt 2))
inline const double kHsUpperFactor = 2.0 / std::numbers::pi;                     // 2D / pi
inline const double kUwLowerFactor = 1.0 / (2.0 * (2.0 + kSqrt2));               // pi/2 * HS lower

struct LevelComponent {
  double radius = 0.0;
  /// Crossing edges in loop order; polyline[i] lies on crossing_edges[i].
  std::vector<int> crossing_edges;
  std::vector<SurfacePoint> polyline;
  double diameter = 0.0;
  int witness_a = 0;
  int witness_b = 0;

  const SurfacePoint& q() const { return polyline[witness_a]; }
  const SurfacePoint& r() const { return polyline[witness_b]; }
};

struct RadiiPolicy {
  enum class Kind { VertexValuesAndMidpoints, Uniform };
  Kind kind = Kind::VertexValuesAndMidpoints;
  /// Number of equally spaced radii in (0, max distance) for Kind::Uniform.
  int samples = 0;

  static RadiiPolicy uniform(int n) { return {Kind::Uniform, n}; }
};

struct DEstimate {
  int basepoint = -1;
  double D = 0.0;
  double radius = 0.0;
  LevelComponent component;
  SurfacePoint q;
  SurfacePoint r;
  double hs_lower = 0.0;
  double hs_upper = 0.0;
  double uw_lower = 0.0;
  double uw_upper = 0.0;
  double tolerance = 0.0;
  int radii_scanned = 0;
  int diameters_evaluated = 0;
};

struct ReebNode {
  enum class Type { Minimum, Maximum, Saddle };
  int vertex = -1;
  double value = 0.0;
  Type type = Type::Saddle;
};

inline const char* to_string(ReebNode::Type t) {
  switch (t) {
    case ReebNode::Type::Minimum: return "minimum";
    case ReebNode::Type::Maximum: return "maximum";
    default: return "saddle";
  }
}

struct ReebArc {
  int from = -1;
  int to = -1;
  double max_fiber_diameter = 0.0;
  double witness_radius = 0.0;
  int fibers_sampled = 0;
};

struct ReebGraph {
  int basepoint = -1;
  std::vector<ReebNode> nodes;
  std::vector<ReebArc> arcs;
  double tolerance = 0.0;

  int leaves() const {
    std::vector<int> deg(nodes.size(), 0);
    for (const auto& a : arcs) {
      ++deg[a.from];
      ++deg[a.to];
    }
    return static_cast<int>(std::count(deg.begin(), deg.end(), 1));
  }
  /// Connected with E = V - 1.
  bool is_tree() const {
    if (arcs.size() + 1 != nodes.size()) return false;
    std::vector<int> root(nodes.size());
    std::iota(root.begin(), root.end(), 0);
    auto find = [&](int x) {
      while (root[x] != x) x = root[x] = root[root[x]];
      return x;
    };
    for (const auto& a : arcs) {
      int x = find(a.from), y = find(a.to);
      if (x == y) return false;
      root[x] = y;
    }
    return true;
  }
  double max_fiber_diameter() const {
    double m = 0.0;
    for (const auto& a : arcs) m = std::max(m, a.max_fiber_diameter);
    return m;
  }
};

struct MapWidth {
  double width = 0.0;
  /// Sample whose fiber attains the width (target vertex for map_width, Reeb arc for Reeb widths).
  int witness = -1;
  /// Domain vertices of the witness fiber pair.
  int witness_a = -1;
  int witness_b = -1;
  double tolerance = 0.0;
};

namespace detail {

struct LevelLoop {
  std::vector<int> edges;
};

/// Walks the level sweep: `on_level(k, passed_vertex, lo, hi, loops)` is
/// called after the k-th vertex in (dist, id) order has been passed; the
/// loops describe the level set for values in (lo, hi].
template <class Fn>
void sweep_levels(const TriSurface& s, const std::vector<double>& dist, Fn&& on_level) {
  const int n = s.num_vertices();
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return dist[a] != dist[b] ? dist[a] < dist[b] : a < b; });
  std::vector<char> passed(n, 0);
  std::vector<int> slot(s.num_edges(), -1);
  std::vector<int> active;
  std::vector<int> visit(s.num_edges(), -1);
  std::vector<LevelLoop> loops;
  for (int k = 0; k < n; ++k) {
    const int w = order[k];
    passed[w] = 1;
    auto [nb, ne] = s.neighbors(w);
    for (const Neighbor* it = nb; it != ne; ++it) {
      int e = it->edge;
      if (slot[e] >= 0) {
        int last = active.back();
        active[slot[e]] = last;
        slot[last] = slot[e];
        active.pop_back();
        slot[e] = -1;
      } else {
        slot[e] = static_cast<int>(active.size());
        active.push_back(e);
      }
    }
    loops.clear();
    for (int start : active) {
      if (visit[start] == k) continue;
      LevelLoop loop;
      int e = start;
      int t = s.edge_triangles(e)[0];
      do {
        visit[e] = k;
        loop.edges.push_back(e);
        int next = -1;
        for (int f : s.triangle_edges(t)) {
          if (f != e && slot[f] >= 0) next = f;
        }
        const auto& et = s.edge_triangles(next);
        t = et[0] == t ? et[1] : et[0];
        e = next;
      } while (e != start);
      loops.push_back(std::move(loop));
    }
    const double lo = dist[w];
    const double hi = k + 1 < n ? dist[order[k + 1]] : dist[w];
    on_level(k, w, lo, hi, static_cast<const std::vector<LevelLoop>&>(loops), passed);
  }
}

inline SurfacePoint crossing_point(const TriSurface& s, const std::vector<double>& dist,
                                   const std::vector<char>& passed, int e, double R) {
  const Edge& ed = s.edge(e);
  int u = passed[ed.a] ? ed.a : ed.b;
  int v = ed.other(u);
  double span = dist[v] - dist[u];
  double f = span > 0 ? std::clamp((R - dist[u]) / span, 0.0, 1.0) : 0.5;
  return {e, u == ed.a ? f : 1.0 - f};
}

/// Half the loop's chain length through the shared triangle corners; an upper
/// bound on the ambient diameter of the loop points.
inline double loop_diameter_bound(const TriSurface& s, const std::vector<SurfacePoint>& pts) {
  double total = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const SurfacePoint& x = pts[i];
    const SurfacePoint& y = pts[(i + 1) % pts.size()];
    const Edge& ex = s.edge(x.edge);
    const Edge& ey = s.edge(y.edge);
    int w = (ex.a == ey.a || ex.a == ey.b) ? ex.a : ex.b;
    double ox = (w == ex.a ? x.t : 1.0 - x.t) * s.length(x.edge);
    double oy = (w == ey.a ? y.t : 1.0 - y.t) * s.length(y.edge);
    total += x.edge == y.edge ? std::abs(x.t - y.t) * s.length(x.edge) : ox + oy;
  }
  return 0.5 * total;
}

inline std::vector<double> radii_in_level(const RadiiPolicy& policy, double lo, double hi, double dmax) {
  std::vector<double> out;
  if (!(lo < hi)) return out;
  if (policy.kind == RadiiPolicy::Kind::VertexValuesAndMidpoints) {
    out.push_back(0.5 * (lo + hi));
    if (hi < dmax) out.push_back(hi);
  } else {
    const double step = dmax / (policy.samples + 1);
    for (long i = std::max(1L, static_cast<long>(std::floor(lo / step))); i <= policy.samples; ++i) {
      double R = step * static_cast<double>(i);
      if (R > hi) break;
      if (R > lo) out.push_back(R);
    }
  }
  return out;
}

}  // namespace detail

/// Level-set components of dist(p, .) at radius R, each with its ambient diameter.
inline std::vector<LevelComponent> extract_level_components(const TriSurface& s, const DistanceField& field, double R) {
  const double dmax = field.max_distance();
  if (!(R > 0.0 && R < dmax)) throw PreconditionError("radius must lie strictly between 0 and the maximal distance");
  std::vector<LevelComponent> out;
  DistanceOracle oracle(s, field.metric);
  detail::sweep_levels(s, field.dist, [&](int, int, double lo, double hi, const auto& loops, const auto& passed) {
    if (!(lo < R && R <= hi)) return;
    for (const auto& loop : loops) {
      LevelComponent c;
      c.radius = R;
      c.crossing_edges = loop.edges;
      for (int e : loop.edges) c.polyline.push_back(detail::crossing_point(s, field.dist, passed, e, R));
      auto d = subset_diameter(oracle, c.polyline);
      c.diameter = d.diameter;
      c.witness_a = d.witness_a;
      c.witness_b = d.witness_b;
      out.push_back(std::move(c));
    }
  });
  return out;
}

struct LevelAnalysis {
  DEstimate estimate;
  ReebGraph reeb;
};

/// One sweep computing both the D estimate and the Reeb graph with fiber diameters.
inline LevelAnalysis analyze_levels(const TriSurface& s, const DistanceField& field, RadiiPolicy policy = {}) {
  LevelAnalysis out;
  DEstimate& est = out.estimate;
  ReebGraph& reeb = out.reeb;
  est.basepoint = reeb.basepoint = field.source;
  est.tolerance = reeb.tolerance = field.tolerance;
  const double dmax = field.max_distance();
  DistanceOracle oracle(s, field.metric);

  std::map<int, int> arc_of_key;  // loop key (min edge id) -> arc
  std::vector<detail::LevelLoop> prev_loops;
  auto touches = [&](const detail::LevelLoop& loop, int w) {
    return std::any_of(loop.edges.begin(), loop.edges.end(), [&](int e) {
      const Edge& ed = s.edge(e);
      return ed.a == w || ed.b == w;
    });
  };
  auto key_of = [](const detail::LevelLoop& loop) { return *std::min_element(loop.edges.begin(), loop.edges.end()); };

  detail::sweep_levels(s, field.dist, [&](int, int w, double lo, double hi, const auto& loops, const auto& passed) {
    // Reeb bookkeeping for the passage through w.
    std::vector<int> before_arcs;
    for (const auto& loop : prev_loops) {
      if (touches(loop, w)) before_arcs.push_back(arc_of_key.at(key_of(loop)));
    }
    std::vector<int> after;
    std::map<int, int> next_keys;
    for (std::size_t i = 0; i < loops.size(); ++i) {
      if (touches(loops[i], w)) {
        after.push_back(static_cast<int>(i));
      } else {
        int key = key_of(loops[i]);
        next_keys[key] = arc_of_key.at(key);
      }
    }
    if (before_arcs.size() == 1 && after.size() == 1) {
      next_keys[key_of(loops[after[0]])] = before_arcs[0];
    } else {
      ReebNode node;
      node.vertex = w;
      node.value = field.dist[w];
      node.type = before_arcs.empty() ? ReebNode::Type::Minimum
                                      : (after.empty() ? ReebNode::Type::Maximum : ReebNode::Type::Saddle);
      int id = static_cast<int>(reeb.nodes.size());
      reeb.nodes.push_back(node);
      for (int a : before_arcs) reeb.arcs[a].to = id;
      for (int i : after) {
        next_keys[key_of(loops[i])] = static_cast<int>(reeb.arcs.size());
        reeb.arcs.push_back({id, -1, 0.0, 0.0, 0});
      }
    }
    arc_of_key = std::move(next_keys);
    prev_loops = loops;

    // Fiber diameters at the sampled radii of this level.
    for (double R : detail::radii_in_level(policy, lo, hi, dmax)) {
      if (!(R > 0.0 && R < dmax)) continue;
      ++est.radii_scanned;
      for (const auto& loop : loops) {
        ReebArc& arc = reeb.arcs[arc_of_key.at(key_of(loop))];
        ++arc.fibers_sampled;
        std::vector<SurfacePoint> pts;
        pts.reserve(loop.edges.size());
        for (int e : loop.edges) pts.push_back(detail::crossing_point(s, field.dist, passed, e, R));
        if (detail::loop_diameter_bound(s, pts) <= arc.max_fiber_diameter) continue;
        auto d = subset_diameter(oracle, pts);
        ++est.diameters_evaluated;
        if (d.diameter > arc.max_fiber_diameter) {
          arc.max_fiber_diameter = d.diameter;
          arc.witness_radius = R;
        }
        if (d.diameter > est.D) {
          est.D = d.diameter;
          est.radius = R;
          est.component.radius = R;
          est.component.crossing_edges = loop.edges;
          est.component.polyline = std::move(pts);
          est.component.diameter = d.diameter;
          est.component.witness_a = d.witness_a;
          est.component.witness_b = d.witness_b;
        }
      }
    }
  });
  est.q = est.component.polyline.empty() ? SurfacePoint{} : est.component.q();
  est.r = est.component.polyline.empty() ? SurfacePoint{} : est.component.r();
  est.hs_lower = kHsLowerFactor * est.D;
  est.hs_upper = kHsUpperFactor * est.D;
  est.uw_lower = kUwLowerFactor * est.D;
  est.uw_upper = est.D;
  return out;
}

inline DEstimate estimate_D(const TriSurface& s, int p, RadiiPolicy policy = {}) {
  return analyze_levels(s, distance_field(s, p), policy).estimate;
}

inline ReebGraph reeb_graph(const TriSurface& s, const DistanceField& field) {
  return analyze_levels(s, field).reeb;
}

/// Width of the quotient map to the Reeb graph: its largest sampled fiber diameter.
inline MapWidth uryson_width_upper(const TriSurface& s, const DistanceField& field) {
  ReebGraph g = reeb_graph(s, field);
  MapWidth w;
  w.tolerance = field.tolerance;
  for (std::size_t i = 0; i < g.arcs.size(); ++i) {
    if (w.witness < 0 || g.arcs[i].max_fiber_diameter > w.width) {
      w.width = g.arcs[i].max_fiber_diameter;
      w.witness = static_cast<int>(i);
    }
  }
  return w;
}

/// Default basepoint: smallest eccentricity among a deterministic sample of vertices.
inline int default_basepoint(const TriSurface& s, int samples = 12) {
  std::vector<int> cand;
  const int n = s.num_vertices();
  for (int i = 0; i < std::min(samples, n); ++i) cand.push_back(static_cast<int>((static_cast<long long>(i) * n) / samples));
  return eccentricity_scan(s, cand).vertex;
}

inline std::string reeb_to_dot(const ReebGraph& g) {
  std::ostringstream os;
  os << "graph reeb {\n";
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    os << "  n" << i << " [label=\"v" << g.nodes[i].vertex << " " << to_string(g.nodes[i].type) << " "
       << g.nodes[i].value << "\"];\n";
  }
  for (const auto& a : g.arcs) {
    os << "  n" << a.from << " -- n" << a.to << " [label=\"" << a.max_fiber_diameter << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

// ---------------------------------------------------------------------------

/// Width of a simplicial map: the largest domain diameter of a vertex fiber.
///
/// Every edge must map to a vertex or an edge of the target, and every
/// triangle to a simplex of the target.
inline MapWidth map_width(const TriSurface& domain, const TriSurface& target, const std::vector<int>& vertex_map,
                          Metric metric = Metric::Unfolded) {
  if (static_cast<int>(vertex_map.size()) != domain.num_vertices()) {
    throw PreconditionError("vertex map size does not match the domain");
  }
  for (int v : vertex_map) {
    if (v < 0 || v >= target.num_vertices()) throw PreconditionError("vertex map points outside the target");
  }
  for (const Edge& e : domain.edges()) {
    int a = vertex_map[e.a], b = vertex_map[e.b];
    if (a != b && target.find_edge(a, b) < 0) {
      throw PreconditionError("map is not simplicial: edge (" + std::to_string(e.a) + "," + std::to_string(e.b) +
                              ") does not map to a target simplex");
    }
  }
  for (int t = 0; t < domain.num_triangles(); ++t) {
    const Tri& tr = domain.triangle(t);
    int a = vertex_map[tr[0]], b = vertex_map[tr[1]], c = vertex_map[tr[2]];
    if (a != b && b != c && a != c && target.triangle_with(a, b, c) < 0 && target.triangle_with(a, c, b) < 0) {
      throw PreconditionError("map is not simplicial: triangle " + std::to_string(t) + " does not map to a target simplex");
    }
  }
  std::vector<std::vector<int>> fibers(target.num_vertices());
  for (int v = 0; v < domain.num_vertices(); ++v) fibers[vertex_map[v]].push_back(v);
  MapWidth w;
  w.tolerance = domain.max_edge_length();
  const DistanceGraph g = build_distance_graph(domain, metric);
  std::vector<double> dist(domain.num_vertices(), kInf);
  std::vector<char> want(domain.num_vertices(), 0);
  std::vector<int> touched;
  for (int y = 0; y < target.num_vertices(); ++y) {
    const auto& fib = fibers[y];
    if (fib.size() < 2) {
      if (w.witness < 0 && !fib.empty()) w = {0.0, y, fib[0], fib[0], w.tolerance};
      continue;
    }
    for (std::size_t i = 0; i + 1 < fib.size(); ++i) {
      // Dijkstra from fib[i], stopping once the rest of the fiber is settled.
      using Item = std::pair<double, int>;
      std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
      for (int v : touched) dist[v] = kInf;
      touched.clear();
      std::size_t remaining = fib.size() - i - 1;
      for (std::size_t j = i + 1; j < fib.size(); ++j) want[fib[j]] = 1;
      dist[fib[i]] = 0.0;
      touched.push_back(fib[i]);
      pq.push({0.0, fib[i]});
      while (!pq.empty() && remaining > 0) {
        auto [d, v] = pq.top();
        pq.pop();
        if (d > dist[v]) continue;
        if (want[v]) {
          want[v] = 0;
          --remaining;
          if (d > w.width) w = {d, y, fib[i], v, w.tolerance};
        }
        for (int k = g.offset[v]; k < g.offset[v + 1]; ++k) {
          const int u = g.target[k];
          const double nd = d + g.weight[k];
          if (nd < dist[u]) {
            if (dist[u] == kInf) touched.push_back(u);
            dist[u] = nd;
            pq.push({nd, u});
          }
        }
      }
    }
  }
  return w;
}

}  // namespace hsphere
