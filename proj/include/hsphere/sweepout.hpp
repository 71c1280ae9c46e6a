#pragma once

// Birkhoff-style curve shortening and a search for short closed geodesics
// seeded from the level loops of a distance sweep.
//
// Shortening runs on a Steiner graph: every edge carries k interior points and
// every pair of boundary points of a triangle not on a common edge is joined
// by its straight segment. A pass replaces the arcs between evenly spaced
// breakpoints by shortest paths, then repeats with the breakpoints moved half
// an arc. A converged curve is finally relaxed by sliding each edge crossing
// along its edge to the locally shortest position.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "hsphere/errors.hpp"
#include "hsphere/geodesic.hpp"
#include "hsphere/levelset.hpp"
#include "hsphere/surface.hpp"

namespace hsphere {

struct CurveState {
  std::vector<SurfacePoint> points;  // closed: last joins first
  double length = 0.0;
  int iterations = 0;
};

enum class CurveOutcome { ConvergedGeodesic, CollapsedPoint, IterLimit };

inline std::string to_string(CurveOutcome o) {
  switch (o) {
    case CurveOutcome::ConvergedGeodesic: return "converged_geodesic";
    case CurveOutcome::CollapsedPoint: return "collapsed_point";
    case CurveOutcome::IterLimit: return "iter_limit";
  }
  return "unknown";
}

struct ShortenParams {
  int max_iters = 400;
  /// Converged when a full pass shortens by less than tol * length.
  double tol = 1e-3;
  /// Collapsed below this length; non-positive means 8 mean edges.
  double collapse_length = 0.0;
  /// Breakpoints per pass.
  int segments = 6;
  /// Interior Steiner points per edge.
  int steiner = 3;
  /// Both side angles at every curve point must be at least pi - angle_tol.
  double angle_tol = 0.35;
};

struct ShortenResult {
  CurveState curve;
  CurveOutcome outcome = CurveOutcome::IterLimit;
  /// Length of the snapped seed, after each full pass, and after relaxation.
  std::vector<double> history;
  double min_side_angle = 0.0;
  bool stationary = false;
};

namespace detail {

using P2 = std::array<double, 2>;
using TriLayouts = std::vector<std::array<P2, 3>>;

inline P2 sub2(const P2& a, const P2& b) { return {a[0] - b[0], a[1] - b[1]}; }
inline double dot2(const P2& a, const P2& b) { return a[0] * b[0] + a[1] * b[1]; }
inline double cross2(const P2& a, const P2& b) { return a[0] * b[1] - a[1] * b[0]; }
inline double norm2(const P2& a) { return std::hypot(a[0], a[1]); }

/// Each triangle laid out in the plane from its edge lengths, counterclockwise.
inline TriLayouts triangle_layouts(const TriSurface& s) {
  TriLayouts out(s.num_triangles());
  for (int t = 0; t < s.num_triangles(); ++t) {
    const auto& te = s.triangle_edges(t);
    double l01 = s.length(te[0]), l20 = s.length(te[2]), A = s.corner_angle(t, 0);
    out[t] = {P2{0.0, 0.0}, P2{l01, 0.0}, P2{l20 * std::cos(A), l20 * std::sin(A)}};
  }
  return out;
}

inline int corner_of(const Tri& tri, int v) { return tri[0] == v ? 0 : tri[1] == v ? 1 : tri[2] == v ? 2 : -1; }

inline int vertex_at(const TriSurface& s, const SurfacePoint& p) {
  if (p.t == 0.0) return s.edge(p.edge).a;
  if (p.t == 1.0) return s.edge(p.edge).b;
  return -1;
}

inline bool same_place(const TriSurface& s, const SurfacePoint& p, const SurfacePoint& q) {
  int u = vertex_at(s, p), v = vertex_at(s, q);
  if (u >= 0 || v >= 0) return u == v;
  return p.edge == q.edge && p.t == q.t;
}

inline bool in_triangle(const TriSurface& s, int t, const SurfacePoint& p) {
  if (int v = vertex_at(s, p); v >= 0) return corner_of(s.triangle(t), v) >= 0;
  const auto& te = s.triangle_edges(t);
  return te[0] == p.edge || te[1] == p.edge || te[2] == p.edge;
}

inline std::vector<int> point_triangles(const TriSurface& s, const SurfacePoint& p) {
  if (int v = vertex_at(s, p); v >= 0) return s.vertex_triangles(v);
  const auto& et = s.edge_triangles(p.edge);
  return {et[0], et[1]};
}

inline int common_triangle(const TriSurface& s, const SurfacePoint& p, const SurfacePoint& q) {
  for (int t : point_triangles(s, p)) {
    if (in_triangle(s, t, q)) return t;
  }
  return -1;
}

/// Planar position of p in the layout of a triangle containing it.
inline P2 locate(const TriSurface& s, const TriLayouts& L, int t, const SurfacePoint& p) {
  const Tri& tri = s.triangle(t);
  const Edge& ed = s.edge(p.edge);
  int ia = corner_of(tri, ed.a), ib = corner_of(tri, ed.b);
  if (ia >= 0 && ib >= 0) {
    const P2 &A = L[t][ia], &B = L[t][ib];
    return {A[0] + p.t * (B[0] - A[0]), A[1] + p.t * (B[1] - A[1])};
  }
  return L[t][corner_of(tri, vertex_at(s, p))];
}

inline double segment_length(const TriSurface& s, const TriLayouts& L, const SurfacePoint& p, const SurfacePoint& q) {
  if (same_place(s, p, q)) return 0.0;
  int t = common_triangle(s, p, q);
  if (t < 0) throw PreconditionError("consecutive curve points share no triangle");
  return norm2(sub2(locate(s, L, t, p), locate(s, L, t, q)));
}

inline double closed_length(const TriSurface& s, const TriLayouts& L, const std::vector<SurfacePoint>& pts) {
  double total = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) total += segment_length(s, L, pts[i], pts[(i + 1) % pts.size()]);
  return total;
}

/// Mesh vertices plus interior points on every edge, joined by straight
/// segments inside each triangle and by the subdivided edges themselves. An
/// edge of mean length carries k points; longer edges carry proportionally
/// more, up to 64.
class SteinerGraph {
 public:
  SteinerGraph(const TriSurface& s, int k) : s_(&s), k_(k), layouts_(triangle_layouts(s)) {
    if (k < 0) throw PreconditionError("steiner count must be non-negative");
    const int nv = s.num_vertices();
    const double mean = s.mean_edge_length();
    base_.resize(s.num_edges() + 1, nv);
    for (int e = 0; e < s.num_edges(); ++e) {
      int ke = k == 0 ? 0 : std::clamp(static_cast<int>(std::ceil((k + 1) * s.length(e) / mean)) - 1, k, 64);
      base_[e + 1] = base_[e] + ke;
    }
    const int n = base_.back();
    node_edge_.resize(n - nv);
    for (int e = 0; e < s.num_edges(); ++e) {
      for (int u = base_[e]; u < base_[e + 1]; ++u) node_edge_[u - nv] = e;
    }
    struct Arc {
      int u, v;
      double w;
    };
    std::vector<Arc> arcs;
    for (int e = 0; e < s.num_edges(); ++e) {
      const Edge& ed = s.edge(e);
      const int ke = count(e);
      double step = s.length(e) / (ke + 1);
      int prev = ed.a;
      for (int i = 1; i <= ke + 1; ++i) {
        int cur = i <= ke ? node_on(e, i) : ed.b;
        arcs.push_back({prev, cur, step});
        arcs.push_back({cur, prev, step});
        prev = cur;
      }
    }
    for (int t = 0; t < s.num_triangles(); ++t) {
      const Tri& tri = s.triangle(t);
      const auto& te = s.triangle_edges(t);
      std::vector<std::pair<int, int>> nodes;  // node, mask of triangle edge slots
      std::vector<P2> at;
      for (int c = 0; c < 3; ++c) {
        nodes.push_back({tri[c], (1 << c) | (1 << ((c + 2) % 3))});
        at.push_back(layouts_[t][c]);
      }
      for (int slot = 0; slot < 3; ++slot) {
        int e = te[slot];
        for (int i = 1; i <= count(e); ++i) {
          nodes.push_back({node_on(e, i), 1 << slot});
          at.push_back(locate(s, layouts_, t, point(node_on(e, i))));
        }
      }
      for (std::size_t i = 0; i < nodes.size(); ++i) {
        for (std::size_t j = i + 1; j < nodes.size(); ++j) {
          if (nodes[i].second & nodes[j].second) continue;
          double w = norm2(sub2(at[i], at[j]));
          arcs.push_back({nodes[i].first, nodes[j].first, w});
          arcs.push_back({nodes[j].first, nodes[i].first, w});
        }
      }
    }
    offset_.assign(n + 1, 0);
    for (const Arc& a : arcs) ++offset_[a.u + 1];
    for (int i = 0; i < n; ++i) offset_[i + 1] += offset_[i];
    target_.resize(arcs.size());
    weight_.resize(arcs.size());
    std::vector<int> fill(offset_.begin(), offset_.end() - 1);
    for (const Arc& a : arcs) {
      target_[fill[a.u]] = a.v;
      weight_[fill[a.u]++] = a.w;
    }
    for (int u = 0; u < n; ++u) {
      std::vector<std::pair<int, double>> row;
      for (int i = offset_[u]; i < offset_[u + 1]; ++i) row.push_back({target_[i], weight_[i]});
      std::sort(row.begin(), row.end());
      for (int i = offset_[u]; i < offset_[u + 1]; ++i) std::tie(target_[i], weight_[i]) = row[i - offset_[u]];
    }
    init_heuristic();
  }

  const TriSurface& surface() const { return *s_; }
  const TriLayouts& layouts() const { return layouts_; }
  int steiner() const { return k_; }
  int num_nodes() const { return static_cast<int>(offset_.size()) - 1; }
  int count(int e) const { return base_[e + 1] - base_[e]; }
  int node_on(int e, int i) const { return base_[e] + (i - 1); }

  SurfacePoint point(int node) const {
    const int nv = s_->num_vertices();
    if (node < nv) return vertex_point(*s_, node);
    int e = node_edge_[node - nv], i = node - base_[e] + 1;
    return {e, static_cast<double>(i) / (count(e) + 1)};
  }

  int snap(const SurfacePoint& p) const {
    if (int v = vertex_at(*s_, p); v >= 0) return v;
    const int ke = count(p.edge);
    if (ke == 0) return p.t < 0.5 ? s_->edge(p.edge).a : s_->edge(p.edge).b;
    int i = std::clamp(static_cast<int>(std::lround(p.t * (ke + 1))), 1, ke);
    return node_on(p.edge, i);
  }

  double weight(int u, int v) const {
    auto b = target_.begin() + offset_[u], e = target_.begin() + offset_[u + 1];
    auto it = std::lower_bound(b, e, v);
    return it != e && *it == v ? weight_[it - target_.begin()] : std::numeric_limits<double>::infinity();
  }

  /// Lower bound on the graph distance between two nodes; zero without
  /// positions or when edge lengths are not a uniform multiple of chords.
  double lower_bound(int u, int v) const {
    if (pos_.empty()) return 0.0;
    return scale_ * norm(pos_[u] - pos_[v]);
  }

  std::pair<const int*, const int*> row(int u) const { return {target_.data() + offset_[u], target_.data() + offset_[u + 1]}; }
  const double* row_weights(int u) const { return weight_.data() + offset_[u]; }

 private:
  void init_heuristic() {
    const TriSurface& s = *s_;
    if (!s.has_positions()) return;
    const auto& P = s.positions();
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (int e = 0; e < s.num_edges(); ++e) {
      double chord = norm(P[s.edge(e).a] - P[s.edge(e).b]);
      if (!(chord > 0)) return;
      double r = s.length(e) / chord;
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    if (hi - lo > 1e-9 * hi) return;
    scale_ = lo * (1.0 - 1e-9);
    pos_.resize(num_nodes());
    for (int u = 0; u < num_nodes(); ++u) {
      SurfacePoint p = point(u);
      const Edge& ed = s.edge(p.edge);
      pos_[u] = (1.0 - p.t) * P[ed.a] + p.t * P[ed.b];
    }
  }

  const TriSurface* s_;
  int k_;
  std::vector<int> base_, node_edge_;
  TriLayouts layouts_;
  std::vector<int> offset_, target_;
  std::vector<double> weight_;
  std::vector<Vec3> pos_;
  double scale_ = 0.0;
};

/// Point-to-point A* on a Steiner graph with a length cutoff; scratch arrays
/// are reset through the touched list so repeated queries stay local.
class LocalPaths {
 public:
  explicit LocalPaths(const SteinerGraph& g)
      : g_(g), dist_(g.num_nodes(), std::numeric_limits<double>::infinity()), parent_(g.num_nodes(), -1) {}

  std::optional<std::vector<int>> path(int a, int b, double cutoff) {
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    touch(a, 0.0, -1);
    pq.push({g_.lower_bound(a, b), a});
    std::optional<std::vector<int>> out;
    while (!pq.empty()) {
      auto [f, v] = pq.top();
      pq.pop();
      const double d = dist_[v];
      if (f > d + g_.lower_bound(v, b) * (1.0 + 1e-12) + 1e-300) continue;
      if (v == b) {
        std::vector<int> p;
        for (int x = b; x >= 0; x = parent_[x]) p.push_back(x);
        std::reverse(p.begin(), p.end());
        out = std::move(p);
        break;
      }
      auto [nb, ne] = g_.row(v);
      const double* w = g_.row_weights(v);
      for (const int* it = nb; it != ne; ++it, ++w) {
        double nd = d + *w;
        if (nd < dist_[*it]) {
          double nf = nd + g_.lower_bound(*it, b);
          if (nf > cutoff) continue;
          touch(*it, nd, v);
          pq.push({nf, *it});
        }
      }
    }
    for (int v : touched_) {
      dist_[v] = std::numeric_limits<double>::infinity();
      parent_[v] = -1;
    }
    touched_.clear();
    return out;
  }

 private:
  void touch(int v, double d, int p) {
    if (std::isinf(dist_[v])) touched_.push_back(v);
    dist_[v] = d;
    parent_[v] = p;
  }

  const SteinerGraph& g_;
  std::vector<double> dist_;
  std::vector<int> parent_;
  std::vector<int> touched_;
};

/// Drops repeated nodes and back-and-forth steps, cyclically.
inline std::vector<int> remove_spurs(std::vector<int> c) {
  bool changed = true;
  while (changed && c.size() >= 3) {
    changed = false;
    std::vector<int> st;
    st.reserve(c.size());
    for (int v : c) {
      if (!st.empty() && st.back() == v) {
        changed = true;
      } else if (st.size() >= 2 && st[st.size() - 2] == v) {
        st.pop_back();
        changed = true;
      } else {
        st.push_back(v);
      }
    }
    while (st.size() >= 2 && st.front() == st.back()) {
      st.pop_back();
      changed = true;
    }
    if (st.size() >= 3 && st[1] == st.back()) {
      st.erase(st.begin());
      st.pop_back();
      changed = true;
    }
    c = std::move(st);
  }
  if (c.size() < 3) c.clear();
  return c;
}

inline double node_curve_length(const SteinerGraph& g, const std::vector<int>& c) {
  double total = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) total += g.weight(c[i], c[(i + 1) % c.size()]);
  return total;
}

/// One replacement sweep with breakpoints at arc-length positions
/// shift + k * L / segments.
inline std::vector<int> replace_pass(const SteinerGraph& g, LocalPaths& paths, const std::vector<int>& c, int segments,
                                     double shift) {
  const int n = static_cast<int>(c.size());
  std::vector<double> cum(n + 1, 0.0);
  for (int i = 0; i < n; ++i) cum[i + 1] = cum[i] + g.weight(c[i], c[(i + 1) % n]);
  const double L = cum[n];
  std::vector<int> breaks;
  for (int k = 0; k < segments; ++k) {
    double target = std::fmod(shift + L * k / segments, L);
    int i = static_cast<int>(std::lower_bound(cum.begin(), cum.end(), target) - cum.begin());
    breaks.push_back(std::min(i, n - 1));
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  if (breaks.size() < 3) return c;
  std::vector<int> out;
  const int m = static_cast<int>(breaks.size());
  for (int k = 0; k < m; ++k) {
    int i = breaks[k];
    int j = breaks[(k + 1) % m];
    double arc = j > i ? cum[j] - cum[i] : L - cum[i] + cum[j];
    if (auto p = paths.path(c[i], c[j], arc)) {
      double len = 0.0;
      for (std::size_t q = 0; q + 1 < p->size(); ++q) len += g.weight((*p)[q], (*p)[q + 1]);
      if (len < arc * (1.0 - 1e-12)) {
        out.insert(out.end(), p->begin(), p->end() - 1);
        continue;
      }
    }
    for (int x = i; x != j; x = (x + 1) % n) out.push_back(c[x]);
  }
  return out;
}

/// Gauss-Seidel sweeps sliding each interior edge crossing to the point of
/// its edge minimizing the distance through it; vertices stay fixed.
inline void relax_points(const TriSurface& s, const TriLayouts& L, std::vector<SurfacePoint>& pts, int max_sweeps = 5000,
                         double tol = 1e-13) {
  const int n = static_cast<int>(pts.size());
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double moved = 0.0;
    for (int i = 0; i < n; ++i) {
      SurfacePoint& x = pts[i];
      if (vertex_at(s, x) >= 0) continue;
      const Edge& ed = s.edge(x.edge);
      const double l = s.length(x.edge);
      auto edge_coords = [&](const SurfacePoint& y) {
        int t = common_triangle(s, x, y);
        const Tri& tri = s.triangle(t);
        const P2 &A = L[t][corner_of(tri, ed.a)], &B = L[t][corner_of(tri, ed.b)];
        P2 u = sub2(B, A);
        P2 d = sub2(locate(s, L, t, y), A);
        return P2{dot2(d, u) / l, std::abs(cross2(u, d)) / l};
      };
      P2 u = edge_coords(pts[(i + n - 1) % n]);
      P2 w = edge_coords(pts[(i + 1) % n]);
      double along;
      if (u[1] + w[1] > 0) {
        along = u[0] + (w[0] - u[0]) * u[1] / (u[1] + w[1]);
      } else {
        along = std::clamp(x.t * l, std::min(u[0], w[0]), std::max(u[0], w[0]));
      }
      double t = std::clamp(along / l, 0.0, 1.0);
      if (t < 1e-10) t = 0.0;
      if (t > 1.0 - 1e-10) t = 1.0;
      moved = std::max(moved, std::abs(t - x.t) * l);
      x.t = t;
    }
    if (moved < tol) break;
  }
  std::vector<SurfacePoint> out;
  for (const auto& p : pts) {
    if (out.empty() || !same_place(s, out.back(), p)) out.push_back(p);
  }
  while (out.size() > 1 && same_place(s, out.front(), out.back())) out.pop_back();
  pts = std::move(out);
}

struct FanEntry {
  int tri;
  P2 origin, start;
  double base, width;
};

/// Triangles around a curve point in rotational order, with the starting
/// direction and cumulative angle of each.
inline std::vector<FanEntry> point_fan(const TriSurface& s, const TriLayouts& L, const SurfacePoint& x, double& total) {
  std::vector<FanEntry> fan;
  if (int v = vertex_at(s, x); v >= 0) {
    const int w0 = s.neighbors(v).first->vertex;
    int w = w0;
    total = 0.0;
    do {
      int t = s.left_triangle(v, w);
      const Tri& tri = s.triangle(t);
      int k = corner_of(tri, v);
      const double width = s.corner_angle(t, k);
      fan.push_back({t, L[t][k], L[t][(k + 1) % 3], total, width});
      total += width;
      w = tri[(k + 2) % 3];
    } while (w != w0 && fan.size() <= static_cast<std::size_t>(s.degree(v)));
    return fan;
  }
  const Edge& ed = s.edge(x.edge);
  int t0 = s.left_triangle(ed.a, ed.b), t1 = s.left_triangle(ed.b, ed.a);
  fan.push_back({t0, locate(s, L, t0, x), L[t0][corner_of(s.triangle(t0), ed.b)], 0.0, std::numbers::pi});
  fan.push_back({t1, locate(s, L, t1, x), L[t1][corner_of(s.triangle(t1), ed.a)], std::numbers::pi,
                 std::numbers::pi});
  total = 2.0 * std::numbers::pi;
  return fan;
}

inline std::optional<double> fan_angle(const TriSurface& s, const TriLayouts& L, const std::vector<FanEntry>& fan,
                                       const SurfacePoint& y) {
  for (const FanEntry& f : fan) {
    if (!in_triangle(s, f.tri, y)) continue;
    P2 d = sub2(locate(s, L, f.tri, y), f.origin);
    if (norm2(d) < 1e-14) return std::nullopt;
    P2 r = sub2(f.start, f.origin);
    double ang = std::atan2(cross2(r, d), dot2(r, d));
    if (ang < 0) ang += 2.0 * std::numbers::pi;
    if (ang > f.width) ang = ang - f.width < 2.0 * std::numbers::pi - ang ? f.width : 0.0;
    return f.base + ang;
  }
  return std::nullopt;
}

}  // namespace detail

/// Smaller of the two angles the curve makes at each of its points, measured
/// by summing triangle corner angles on each side; minimized over the curve.
inline double min_side_angle(const TriSurface& s, const std::vector<SurfacePoint>& c) {
  const auto L = detail::triangle_layouts(s);
  const int n = static_cast<int>(c.size());
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    double total = 0.0;
    auto fan = detail::point_fan(s, L, c[i], total);
    auto a = detail::fan_angle(s, L, fan, c[(i + n - 1) % n]);
    auto b = detail::fan_angle(s, L, fan, c[(i + 1) % n]);
    if (!a || !b) continue;
    double d = std::fmod(*b - *a + 2.0 * total, total);
    best = std::min({best, d, total - d});
  }
  return best;
}

inline double curve_length(const TriSurface& s, const std::vector<SurfacePoint>& c) {
  return detail::closed_length(s, detail::triangle_layouts(s), c);
}

inline CurveState vertex_curve(const TriSurface& s, const std::vector<int>& vertices) {
  CurveState c;
  for (int v : vertices) c.points.push_back(vertex_point(s, v));
  c.length = curve_length(s, c.points);
  return c;
}

inline ShortenResult shorten_curve(const detail::SteinerGraph& g, const CurveState& input, const ShortenParams& params = {}) {
  const TriSurface& s = g.surface();
  if (input.points.size() < 3) throw PreconditionError("curve needs at least 3 points");
  if (params.segments < 3) throw PreconditionError("segments must be at least 3");
  const double collapse = params.collapse_length > 0 ? params.collapse_length : 8.0 * s.mean_edge_length();
  detail::LocalPaths paths(g);
  std::vector<int> c;
  for (const auto& p : input.points) {
    if (p.edge < 0 || p.edge >= s.num_edges() || !(p.t >= 0.0 && p.t <= 1.0))
      throw PreconditionError("curve point off the surface");
    int u = g.snap(p);
    if (!c.empty() && c.back() != u && std::isinf(g.weight(c.back(), u))) {
      auto link = paths.path(c.back(), u, std::numeric_limits<double>::infinity());
      c.insert(c.end(), link->begin() + 1, link->end() - 1);
    }
    c.push_back(u);
  }
  if (c.size() > 1 && c.back() != c.front() && std::isinf(g.weight(c.back(), c.front()))) {
    auto link = paths.path(c.back(), c.front(), std::numeric_limits<double>::infinity());
    c.insert(c.end(), link->begin() + 1, link->end() - 1);
  }
  c = detail::remove_spurs(std::move(c));
  ShortenResult r;
  std::vector<int> last = c;
  double L = detail::node_curve_length(g, c);
  r.history.push_back(L);
  int it = 0;
  for (; it < params.max_iters; ++it) {
    if (c.size() < 3 || L < collapse) {
      r.outcome = CurveOutcome::CollapsedPoint;
      break;
    }
    const double before = L;
    for (int half = 0; half < 2 && c.size() >= 3; ++half) {
      double shift = half == 0 ? 0.0 : 0.5 * L / params.segments;
      last = c;
      c = detail::remove_spurs(detail::replace_pass(g, paths, c, params.segments, shift));
      L = detail::node_curve_length(g, c);
    }
    r.history.push_back(L);
    if (c.size() >= 3 && L >= collapse && before - L <= params.tol * before) {
      r.outcome = CurveOutcome::ConvergedGeodesic;
      ++it;
      break;
    }
  }
  if (r.outcome == CurveOutcome::IterLimit && (c.size() < 3 || L < collapse)) r.outcome = CurveOutcome::CollapsedPoint;
  r.curve.iterations = it;
  // A collapsed curve reports its last non-degenerate shape.
  for (int u : c.empty() ? last : c) r.curve.points.push_back(g.point(u));
  if (r.outcome == CurveOutcome::ConvergedGeodesic) {
    detail::relax_points(s, g.layouts(), r.curve.points);
    L = detail::closed_length(s, g.layouts(), r.curve.points);
    r.history.push_back(L);
    r.min_side_angle = min_side_angle(s, r.curve.points);
    r.stationary = r.min_side_angle >= std::numbers::pi - params.angle_tol;
  }
  r.curve.length = L;
  return r;
}

inline ShortenResult shorten_curve(const TriSurface& s, const CurveState& input, const ShortenParams& params = {}) {
  detail::SteinerGraph g(s, params.steiner);
  return shorten_curve(g, input, params);
}

struct SweepoutParams {
  /// Evenly spaced sweep values strictly inside (0, max distance).
  int levels = 24;
  /// Bisection steps between neighbouring seeds that collapse to opposite sides.
  int refine_steps = 24;
  int jobs = 1;
  ShortenParams shorten;
};

struct SeedOutcome {
  double radius = 0.0;
  double seed_length = 0.0;
  double final_length = 0.0;
  CurveOutcome outcome = CurveOutcome::IterLimit;
  int iterations = 0;
  double min_side_angle = 0.0;
  bool stationary = false;
  /// Found by bisection between two sampled levels.
  bool refined = false;
  /// -1 collapsed toward lower field values, +1 toward higher, 0 otherwise.
  int side = 0;
};

struct SweepoutResult {
  std::vector<SeedOutcome> table;
  std::optional<CurveState> best;
  int best_seed = -1;
  std::string status;
};

namespace detail {

/// Loops of the level set at R as ordered crossing edges; vertices at or below
/// R count as passed.
inline std::vector<std::vector<int>> level_loops_at(const TriSurface& s, const std::vector<double>& dist, double R) {
  auto active = [&](int e) { return (dist[s.edge(e).a] <= R) != (dist[s.edge(e).b] <= R); };
  std::vector<char> seen(s.num_edges(), 0);
  std::vector<std::vector<int>> loops;
  for (int start = 0; start < s.num_edges(); ++start) {
    if (seen[start] || !active(start)) continue;
    std::vector<int> loop;
    int e = start;
    int t = s.edge_triangles(e)[0];
    do {
      seen[e] = 1;
      loop.push_back(e);
      int next = -1;
      for (int f : s.triangle_edges(t)) {
        if (f != e && active(f)) next = f;
      }
      const auto& et = s.edge_triangles(next);
      t = et[0] == t ? et[1] : et[0];
      e = next;
    } while (e != start);
    loops.push_back(std::move(loop));
  }
  return loops;
}

inline int high_end(const TriSurface& s, const std::vector<double>& dist, int e) {
  const Edge& ed = s.edge(e);
  return dist[ed.a] > dist[ed.b] ? ed.a : ed.b;
}

/// The loop at R bounding the component of {dist > R} that contains h.
inline std::optional<std::vector<int>> loop_above(const TriSurface& s, const std::vector<double>& dist, double R, int h) {
  std::vector<char> in(s.num_vertices(), 0);
  std::vector<int> stack{h};
  in[h] = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    auto [nb, ne] = s.neighbors(v);
    for (const Neighbor* it = nb; it != ne; ++it) {
      if (!in[it->vertex] && dist[it->vertex] > R) {
        in[it->vertex] = 1;
        stack.push_back(it->vertex);
      }
    }
  }
  for (auto& loop : level_loops_at(s, dist, R)) {
    if (in[high_end(s, dist, loop.front())]) return loop;
  }
  return std::nullopt;
}

inline CurveState loop_curve(const TriSurface& s, const std::vector<double>& dist, const std::vector<int>& loop, double R) {
  std::vector<char> passed(s.num_vertices(), 0);
  for (int e : loop) {
    const Edge& ed = s.edge(e);
    passed[ed.a] = dist[ed.a] <= R;
    passed[ed.b] = dist[ed.b] <= R;
  }
  CurveState c;
  for (int e : loop) c.points.push_back(crossing_point(s, dist, passed, e, R));
  return c;
}

inline double field_at(const TriSurface& s, const std::vector<double>& dist, const SurfacePoint& p) {
  const Edge& ed = s.edge(p.edge);
  return (1.0 - p.t) * dist[ed.a] + p.t * dist[ed.b];
}

inline int collapse_side(const TriSurface& s, const std::vector<double>& dist, const ShortenResult& r, double R) {
  if (r.outcome != CurveOutcome::CollapsedPoint || r.curve.points.empty()) return 0;
  double mean = 0.0;
  for (const auto& p : r.curve.points) mean += field_at(s, dist, p);
  mean /= static_cast<double>(r.curve.points.size());
  return mean < R ? -1 : 1;
}

}  // namespace detail

/// Shortens every level loop at evenly spaced values of the field, then
/// bisects the level between neighbouring loops of one sweep arc whose curves
/// collapse to opposite sides; the shortest converged curve wins.
inline SweepoutResult sweepout_search(const TriSurface& s, const DistanceField& field, const SweepoutParams& params = {}) {
  if (params.levels < 1) throw PreconditionError("levels must be positive");
  if (static_cast<int>(field.dist.size()) != s.num_vertices()) throw PreconditionError("field does not match surface");
  const auto& dist = field.dist;
  const double dmax = *std::max_element(dist.begin(), dist.end());
  const detail::SteinerGraph g(s, params.shorten.steiner);

  struct Seed {
    int level;
    double R;
    std::vector<int> loop;
    CurveState curve;
    ShortenResult result;
  };
  std::vector<Seed> seeds;
  for (int i = 1; i <= params.levels; ++i) {
    double R = dmax * i / (params.levels + 1);
    for (auto& loop : detail::level_loops_at(s, dist, R)) {
      if (loop.size() < 3) continue;
      CurveState c = detail::loop_curve(s, dist, loop, R);
      seeds.push_back({i, R, std::move(loop), std::move(c), {}});
    }
  }
  detail::parallel_for(static_cast<int>(seeds.size()), params.jobs,
                       [&](int i) { seeds[i].result = shorten_curve(g, seeds[i].curve, params.shorten); });

  SweepoutResult out;
  auto record = [&](double R, const CurveState& seed, const ShortenResult& r, bool refined) {
    const int side = detail::collapse_side(s, dist, r, R);
    out.table.push_back({R, detail::closed_length(s, g.layouts(), seed.points), r.curve.length, r.outcome,
                         r.curve.iterations, r.min_side_angle, r.stationary, refined, side});
    if (r.outcome == CurveOutcome::ConvergedGeodesic && (!out.best || r.curve.length < out.best->length)) {
      out.best = r.curve;
      out.best_seed = static_cast<int>(out.table.size()) - 1;
    }
    return side;
  };
  for (const Seed& sd : seeds) record(sd.R, sd.curve, sd.result, false);

  // Brackets: an upper seed collapsing upward whose matching lower loop collapses downward.
  struct Bracket {
    double lo, hi;
    int high_vertex;
  };
  std::vector<Bracket> brackets;
  for (const Seed& up : seeds) {
    if (up.level == 1 || detail::collapse_side(s, dist, up.result, up.R) != 1) continue;
    double lo = dmax * (up.level - 1) / (params.levels + 1);
    int h = detail::high_end(s, dist, up.loop.front());
    auto below = detail::loop_above(s, dist, lo, h);
    if (!below) continue;
    std::vector<int> key = *below;
    std::sort(key.begin(), key.end());
    for (const Seed& dn : seeds) {
      if (dn.level != up.level - 1) continue;
      std::vector<int> k2 = dn.loop;
      std::sort(k2.begin(), k2.end());
      if (k2 == key && detail::collapse_side(s, dist, dn.result, dn.R) == -1) brackets.push_back({lo, up.R, h});
    }
  }
  struct Probe {
    double R;
    CurveState seed;
    ShortenResult result;
  };
  std::vector<std::vector<Probe>> probes(brackets.size());
  detail::parallel_for(static_cast<int>(brackets.size()), params.jobs, [&](int b) {
    double lo = brackets[b].lo, hi = brackets[b].hi;
    for (int step = 0; step < params.refine_steps; ++step) {
      double R = 0.5 * (lo + hi);
      auto loop = detail::loop_above(s, dist, R, brackets[b].high_vertex);
      if (!loop || loop->size() < 3) break;
      CurveState c = detail::loop_curve(s, dist, *loop, R);
      ShortenResult r = shorten_curve(g, c, params.shorten);
      const int side = detail::collapse_side(s, dist, r, R);
      const bool done = r.outcome != CurveOutcome::CollapsedPoint;
      probes[b].push_back({R, std::move(c), std::move(r)});
      if (done) break;
      (side < 0 ? lo : hi) = R;
    }
  });
  for (const auto& list : probes) {
    for (const Probe& pr : list) record(pr.R, pr.seed, pr.result, true);
  }
  out.status = out.best ? "converged" : seeds.empty() ? "no seeds" : "no seed converged within the iteration budget";
  return out;
}

/// Polyline OBJ: one closed `l` record per curve; needs vertex positions.
inline void write_polyline_obj(std::ostream& os, const TriSurface& s, const std::vector<CurveState>& curves) {
  if (!s.has_positions()) throw PreconditionError("polyline export needs vertex positions");
  const auto& P = s.positions();
  os << "# closed curves\n";
  std::size_t base = 1;
  for (const auto& c : curves) {
    for (const auto& p : c.points) {
      const Edge& ed = s.edge(p.edge);
      Vec3 x = (1.0 - p.t) * P[ed.a] + p.t * P[ed.b];
      os << "v " << detail::fmt_double(x[0]) << ' ' << detail::fmt_double(x[1]) << ' ' << detail::fmt_double(x[2]) << '\n';
    }
    os << 'l';
    for (std::size_t i = 0; i < c.points.size(); ++i) os << ' ' << base + i;
    if (!c.points.empty()) os << ' ' << base;
    os << '\n';
    base += c.points.size();
  }
}

}  // namespace hsphere
