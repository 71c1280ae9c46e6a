#pragma once

// Graph-metric geodesics.
//
// Two graphs are offered. The skeleton graph uses mesh edges only. The
// unfolded graph adds, for every edge whose two triangles form a convex
// quadrilateral, a shortcut between the opposite corners with its straight
// length in the unfolding. Both never undershoot the polyhedral metric. The
// skeleton has only three directions on a regular lattice, so its distances
// can overshoot by up to 15%; the shortcuts bring that to about 4%.
// Points interior to edges are handled by extending the metric linearly.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <list>
#include <queue>
#include <thread>
#include <unordered_map>
#include <utility>
#include <vector>

#include "hsphere/errors.hpp"
#include "hsphere/surface.hpp"

namespace hsphere {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Metric { Skeleton, Unfolded };

/// Weighted adjacency in compressed rows.
struct DistanceGraph {
  Metric metric = Metric::Skeleton;
  std::vector<int> offset;
  std::vector<int> target;
  std::vector<double> weight;
  int num_vertices() const { return static_cast<int>(offset.size()) - 1; }
};

namespace detail {

/// Runs fn(0..n-1) across `jobs` threads, strided.
template <class Fn>
void parallel_for(int n, int jobs, Fn&& fn) {
  jobs = std::max(1, std::min(jobs, n));
  if (jobs == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  for (int j = 0; j < jobs; ++j) {
    pool.emplace_back([&, j] {
      for (int i = j; i < n; i += jobs) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

inline double corner_from_lengths(double a, double b, double opposite) {
  return std::acos(std::clamp((a * a + b * b - opposite * opposite) / (2 * a * b), -1.0, 1.0));
}

}  // namespace detail

inline DistanceGraph build_distance_graph(const TriSurface& s, Metric metric) {
  const int n = s.num_vertices();
  std::vector<std::vector<std::pair<int, double>>> adj(n);
  for (int e = 0; e < s.num_edges(); ++e) {
    const Edge& ed = s.edge(e);
    adj[ed.a].push_back({ed.b, s.length(e)});
    adj[ed.b].push_back({ed.a, s.length(e)});
  }
  if (metric == Metric::Unfolded) {
    for (int e = 0; e < s.num_edges(); ++e) {
      const Edge& ed = s.edge(e);
      auto et = s.edge_triangles(e);
      int opp[2];
      for (int i = 0; i < 2; ++i) {
        const Tri& t = s.triangle(et[i]);
        for (int k = 0; k < 3; ++k) {
          if (t[k] != ed.a && t[k] != ed.b) opp[i] = t[k];
        }
      }
      const int c = opp[0], d = opp[1];
      if (c == d || s.find_edge(c, d) >= 0) continue;
      const double ab = s.length(e);
      const double ac = s.length(s.edge_between(ed.a, c)), ad = s.length(s.edge_between(ed.a, d));
      const double bc = s.length(s.edge_between(ed.b, c)), bd = s.length(s.edge_between(ed.b, d));
      const double at_a = detail::corner_from_lengths(ac, ab, bc) + detail::corner_from_lengths(ad, ab, bd);
      const double at_b = detail::corner_from_lengths(bc, ab, ac) + detail::corner_from_lengths(bd, ab, ad);
      if (at_a >= M_PI || at_b >= M_PI) continue;
      const double len = std::sqrt(std::max(0.0, ac * ac + ad * ad - 2 * ac * ad * std::cos(at_a)));
      adj[c].push_back({d, len});
      adj[d].push_back({c, len});
    }
  }
  DistanceGraph g;
  g.metric = metric;
  g.offset.assign(n + 1, 0);
  for (int v = 0; v < n; ++v) {
    auto& row = adj[v];
    // Keep the shortest of parallel entries, in a deterministic order.
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end(), [](auto& x, auto& y) { return x.first == y.first; }), row.end());
    g.offset[v + 1] = g.offset[v] + static_cast<int>(row.size());
    for (auto [u, w] : row) {
      g.target.push_back(u);
      g.weight.push_back(w);
    }
  }
  return g;
}

struct DistanceField {
  int source = -1;
  Metric metric = Metric::Skeleton;
  std::vector<double> dist;
  /// Shortest-path tree: parent vertex (-1 at the source).
  std::vector<int> parent;
  /// Additive bound on how far a reported distance may exceed the polyhedral
  /// distance on the same mesh; one longest edge.
  double tolerance = 0.0;

  double max_distance() const { return *std::max_element(dist.begin(), dist.end()); }
};

namespace detail {

/// Multi-source Dijkstra. `seeds` holds (vertex, initial distance).
inline void dijkstra(const DistanceGraph& g, const std::vector<std::pair<int, double>>& seeds,
                     std::vector<double>& dist, std::vector<int>* parent) {
  const int n = g.num_vertices();
  dist.assign(n, kInf);
  if (parent) parent->assign(n, -1);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  for (auto [v, d] : seeds) {
    if (d < dist[v]) {
      dist[v] = d;
      pq.push({d, v});
    }
  }
  while (!pq.empty()) {
    auto [d, v] = pq.top();
    pq.pop();
    if (d > dist[v]) continue;
    for (int k = g.offset[v]; k < g.offset[v + 1]; ++k) {
      int u = g.target[k];
      double nd = d + g.weight[k];
      if (nd < dist[u]) {
        dist[u] = nd;
        if (parent) (*parent)[u] = v;
        pq.push({nd, u});
      }
    }
  }
}

/// Skeleton Dijkstra with an optional vertex filter.
inline void dijkstra(const TriSurface& s, const std::vector<std::pair<int, double>>& seeds, std::vector<double>& dist,
                     std::vector<int>* parent, const std::function<bool(int)>& allowed = nullptr) {
  const int n = s.num_vertices();
  dist.assign(n, kInf);
  if (parent) parent->assign(n, -1);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  for (auto [v, d] : seeds) {
    if (allowed && !allowed(v)) continue;
    if (d < dist[v]) {
      dist[v] = d;
      pq.push({d, v});
    }
  }
  while (!pq.empty()) {
    auto [d, v] = pq.top();
    pq.pop();
    if (d > dist[v]) continue;
    auto [b, e] = s.neighbors(v);
    for (const Neighbor* nb = b; nb != e; ++nb) {
      int u = nb->vertex;
      if (allowed && !allowed(u)) continue;
      double nd = d + s.length(nb->edge);
      if (nd < dist[u]) {
        dist[u] = nd;
        if (parent) (*parent)[u] = v;
        pq.push({nd, u});
      }
    }
  }
}

}  // namespace detail

inline DistanceField distance_field(const DistanceGraph& g, const TriSurface& s, int source) {
  if (source < 0 || source >= s.num_vertices()) throw PreconditionError("source vertex out of range");
  DistanceField f;
  f.source = source;
  f.metric = g.metric;
  detail::dijkstra(g, {{source, 0.0}}, f.dist, &f.parent);
  for (double d : f.dist) {
    if (!std::isfinite(d)) throw TopologyError("surface is disconnected");
  }
  f.tolerance = s.max_edge_length();
  return f;
}

inline DistanceField distance_field(const TriSurface& s, int source, Metric metric = Metric::Unfolded) {
  return distance_field(build_distance_graph(s, metric), s, source);
}

/// Vertex path source -> target along the field's shortest-path tree.
/// Under the unfolded metric consecutive vertices may be shortcut ends rather
/// than mesh neighbours.
inline std::vector<int> tree_path(const DistanceField& f, int target) {
  std::vector<int> path;
  for (int v = target; v != -1; v = f.parent[v]) path.push_back(v);
  std::reverse(path.begin(), path.end());
  return path;
}

/// A point on the surface lying on edge `edge` at parameter t from edge.a (t=0) to edge.b (t=1).
struct SurfacePoint {
  int edge = 0;
  double t = 0.0;
};

inline SurfacePoint vertex_point(const TriSurface& s, int v) {
  auto [b, e] = s.neighbors(v);
  const Edge& ed = s.edge(b->edge);
  return {b->edge, ed.a == v ? 0.0 : 1.0};
}

/// Lazily computed, cached single-source distance fields.
///
/// Not thread-safe; use one oracle per thread. The cache evicts least recently
/// used fields once `max_fields` are held.
class DistanceOracle {
 public:
  explicit DistanceOracle(const TriSurface& s, Metric metric = Metric::Unfolded, std::size_t max_fields = 0)
      : s_(&s), graph_(build_distance_graph(s, metric)) {
    // Default budget: about 256 MiB of distances.
    std::size_t per_field = sizeof(double) * static_cast<std::size_t>(s.num_vertices());
    max_fields_ = max_fields ? max_fields : std::max<std::size_t>(16, (std::size_t{256} << 20) / per_field);
  }

  const std::vector<double>& field(int v) {
    auto it = index_.find(v);
    if (it != index_.end()) {
      lru_.splice(lru_.begin(), lru_, it->second);
      return it->second->second;
    }
    if (lru_.size() >= max_fields_) {
      index_.erase(lru_.back().first);
      lru_.pop_back();
    }
    lru_.emplace_front(v, std::vector<double>{});
    detail::dijkstra(graph_, {{v, 0.0}}, lru_.front().second, nullptr);
    ++computed_;
    index_[v] = lru_.begin();
    return lru_.front().second;
  }

  double vertex_distance(int a, int b) { return field(a)[b]; }

  /// Distance between two edge points in the linearly extended graph metric.
  double point_distance(const SurfacePoint& x, const SurfacePoint& y) {
    const Edge& ex = s_->edge(x.edge);
    const Edge& ey = s_->edge(y.edge);
    const double lx = s_->length(x.edge), ly = s_->length(y.edge);
    const int xv[2] = {ex.a, ex.b};
    const double xo[2] = {x.t * lx, (1.0 - x.t) * lx};
    const int yv[2] = {ey.a, ey.b};
    const double yo[2] = {y.t * ly, (1.0 - y.t) * ly};
    double best = kInf;
    if (x.edge == y.edge) best = std::abs(x.t - y.t) * lx;
    for (int i = 0; i < 2; ++i) {
      const auto& f = field(xv[i]);
      for (int j = 0; j < 2; ++j) best = std::min(best, xo[i] + f[yv[j]] + yo[j]);
    }
    return best;
  }

  std::size_t fields_computed() const { return computed_; }
  const TriSurface& surface() const { return *s_; }
  const DistanceGraph& graph() const { return graph_; }

 private:
  const TriSurface* s_;
  DistanceGraph graph_;
  std::size_t max_fields_;
  std::size_t computed_ = 0;
  std::list<std::pair<int, std::vector<double>>> lru_;
  std::unordered_map<int, std::list<std::pair<int, std::vector<double>>>::iterator> index_;
};

struct DiameterResult {
  double diameter = 0.0;
  /// Indices into the input point sequence.
  int witness_a = 0;
  int witness_b = 0;
};

/// Largest pairwise ambient distance among `pts`.
inline DiameterResult subset_diameter(DistanceOracle& oracle, const std::vector<SurfacePoint>& pts) {
  if (pts.empty()) throw PreconditionError("subset_diameter needs a nonempty point set");
  DiameterResult r;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      double d = oracle.point_distance(pts[i], pts[j]);
      if (d > r.diameter) {
        r.diameter = d;
        r.witness_a = static_cast<int>(i);
        r.witness_b = static_cast<int>(j);
      }
    }
  }
  return r;
}

inline DiameterResult subset_diameter(const TriSurface& s, const std::vector<SurfacePoint>& pts,
                                      Metric metric = Metric::Unfolded) {
  DistanceOracle oracle(s, metric);
  return subset_diameter(oracle, pts);
}

struct EccentricityResult {
  int vertex = -1;
  double eccentricity = kInf;
};

/// Candidate with the smallest eccentricity; ties go to the lowest vertex id.
inline EccentricityResult eccentricity_scan(const TriSurface& s, std::vector<int> candidates,
                                            Metric metric = Metric::Unfolded) {
  if (candidates.empty()) throw PreconditionError("eccentricity_scan needs at least one candidate");
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  EccentricityResult best;
  DistanceGraph g = build_distance_graph(s, metric);
  for (int v : candidates) {
    double ecc = distance_field(g, s, v).max_distance();
    if (ecc < best.eccentricity) best = {v, ecc};
  }
  return best;
}

}  // namespace hsphere
