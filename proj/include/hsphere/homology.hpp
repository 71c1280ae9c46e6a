#pragma once

// First homology over Z2 on the 1-skeleton.
//
// A tree-cotree decomposition gives every edge a signature in (Z2)^{2G}; the
// signature of a cycle is the XOR over its edges and vanishes exactly when the
// cycle bounds. Shortest cycles are found by the classic one-tree-per-root
// search: the shortest cycle with a property closed under the three-path rule
// consists of two shortest paths from some vertex plus one edge.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <queue>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include "hsphere/errors.hpp"
#include "hsphere/geodesic.hpp"
#include "hsphere/surface.hpp"

namespace hsphere {

/// Element of (Z2)^n packed in 64-bit words.
struct Signature {
  std::vector<std::uint64_t> words;

  bool is_zero() const {
    return std::all_of(words.begin(), words.end(), [](std::uint64_t w) { return w == 0; });
  }
  bool bit(int i) const { return (words[i / 64] >> (i % 64)) & 1u; }
  Signature& operator^=(const Signature& o) {
    for (std::size_t i = 0; i < words.size(); ++i) words[i] ^= o.words[i];
    return *this;
  }
  friend Signature operator^(Signature a, const Signature& b) { return a ^= b; }
  friend bool operator==(const Signature&, const Signature&) = default;
  /// Index of the highest set bit, or -1.
  int top_bit() const {
    for (int i = static_cast<int>(words.size()) - 1; i >= 0; --i) {
      if (words[i]) return 64 * i + 63 - std::countl_zero(words[i]);
    }
    return -1;
  }
};

struct SignatureHash {
  std::size_t operator()(const Signature& s) const {
    std::size_t h = 1469598103934665603ull;
    for (auto w : s.words) h = (h ^ w) * 1099511628211ull;
    return h;
  }
};

/// Per-edge homology signatures.
class HomologySignatures {
 public:
  explicit HomologySignatures(const TriSurface& s) : s_(&s) {
    const int nv = s.num_vertices(), ne = s.num_edges(), nt = s.num_triangles();
    genus_ = (2 - (nv - ne + nt)) / 2;
    rank_ = 2 * genus_;
    words_ = std::max(1, (rank_ + 63) / 64);
    sig_.assign(static_cast<std::size_t>(ne) * words_, 0);
    if (rank_ == 0) return;

    // Primal BFS tree.
    std::vector<char> in_tree(ne, 0);
    std::vector<char> seen(nv, 0);
    std::queue<int> bfs;
    bfs.push(0);
    seen[0] = 1;
    while (!bfs.empty()) {
      int v = bfs.front();
      bfs.pop();
      auto [b, e] = s.neighbors(v);
      for (const Neighbor* nb = b; nb != e; ++nb) {
        if (!seen[nb->vertex]) {
          seen[nb->vertex] = 1;
          in_tree[nb->edge] = 1;
          bfs.push(nb->vertex);
        }
      }
    }
    // Dual BFS tree over non-tree edges.
    std::vector<int> parent_edge(nt, -1), order;
    std::vector<char> tseen(nt, 0);
    std::vector<char> in_cotree(ne, 0);
    order.push_back(0);
    tseen[0] = 1;
    for (std::size_t i = 0; i < order.size(); ++i) {
      int t = order[i];
      for (int e : s.triangle_edges(t)) {
        if (in_tree[e]) continue;
        for (int u : s.edge_triangles(e)) {
          if (!tseen[u]) {
            tseen[u] = 1;
            parent_edge[u] = e;
            in_cotree[e] = 1;
            order.push_back(u);
          }
        }
      }
    }
    int next = 0;
    for (int e = 0; e < ne; ++e) {
      if (!in_tree[e] && !in_cotree[e]) {
        if (next >= rank_) throw TopologyError("tree-cotree left more edges than 2 * genus");
        generators_.push_back(e);
        sig_[static_cast<std::size_t>(e) * words_ + next / 64] |= std::uint64_t{1} << (next % 64);
        ++next;
      }
    }
    if (next != rank_) throw TopologyError("tree-cotree left fewer edges than 2 * genus");
    // Leaves first: each triangle's parent edge closes its cocycle condition.
    for (std::size_t i = order.size(); i-- > 1;) {
      int t = order[i];
      int pe = parent_edge[t];
      for (int e : s.triangle_edges(t)) {
        if (e == pe) continue;
        for (int w = 0; w < words_; ++w) sig_[static_cast<std::size_t>(pe) * words_ + w] ^= sig_[static_cast<std::size_t>(e) * words_ + w];
      }
    }
  }

  int genus() const { return genus_; }
  int rank() const { return rank_; }
  int words() const { return words_; }
  const std::uint64_t* edge_words(int e) const { return sig_.data() + static_cast<std::size_t>(e) * words_; }
  Signature zero() const { return Signature{std::vector<std::uint64_t>(words_, 0)}; }
  Signature edge(int e) const {
    return Signature{std::vector<std::uint64_t>(edge_words(e), edge_words(e) + words_)};
  }
  /// Signature of the closed vertex path c[0] -> ... -> c.back() -> c[0].
  Signature of_cycle(const std::vector<int>& c) const {
    Signature out = zero();
    for (std::size_t i = 0; i < c.size(); ++i) out ^= edge(s_->edge_between(c[i], c[(i + 1) % c.size()]));
    return out;
  }
  /// Non-tree, non-cotree edges; generator j carries bit j.
  const std::vector<int>& generator_edges() const { return generators_; }

 private:
  const TriSurface* s_;
  int genus_ = 0;
  int rank_ = 0;
  int words_ = 1;
  std::vector<std::uint64_t> sig_;
  std::vector<int> generators_;
};

/// Row-reduced span over Z2.
class Z2Span {
 public:
  bool contains(Signature v) const { return reduce(v).is_zero(); }
  /// Adds v; false if it was already in the span.
  bool insert(Signature v) {
    v = reduce(v);
    int top = v.top_bit();
    if (top < 0) return false;
    rows_[top] = std::move(v);
    return true;
  }
  int rank() const { return static_cast<int>(rows_.size()); }

 private:
  Signature reduce(Signature v) const {
    for (auto it = rows_.rbegin(); it != rows_.rend(); ++it) {
      if (v.bit(it->first)) v ^= it->second;
    }
    return v;
  }
  std::map<int, Signature> rows_;
};

struct Cycle {
  /// Closed vertex path; the last vertex connects back to the first.
  std::vector<int> vertices;
  double length = 0.0;
  Signature signature;
};

struct CycleBasis {
  std::vector<Cycle> cycles;
  /// Pairwise mod-2 intersection numbers.
  std::vector<std::vector<int>> intersection;
  /// Set when the surface has genus 0 and the basis is empty.
  bool empty_genus_zero = false;
  double tolerance = 0.0;
};

inline double cycle_length(const TriSurface& s, const std::vector<int>& c) {
  double len = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) len += s.length(s.edge_between(c[i], c[(i + 1) % c.size()]));
  return len;
}

/// Mod-2 intersection number of two edge cycles; `c2` must be simple.
///
/// c2 is pushed off to its left. The pushed copy crosses exactly the edges
/// strictly inside the left wedge at each vertex of c2, so the parity of c1's
/// edges among those is the intersection number.
inline int intersection_mod2(const TriSurface& s, const std::vector<int>& c1, const std::vector<int>& c2) {
  std::vector<char> wedge(s.num_edges(), 0);
  const std::size_t n = c2.size();
  for (std::size_t i = 0; i < n; ++i) {
    int prev = c2[(i + n - 1) % n], v = c2[i], next = c2[(i + 1) % n];
    auto [b, e] = s.neighbors(v);
    const int d = static_cast<int>(e - b);
    int k_next = -1, k_prev = -1;
    for (int k = 0; k < d; ++k) {
      if (b[k].vertex == next) k_next = k;
      if (b[k].vertex == prev) k_prev = k;
    }
    if (k_next < 0 || k_prev < 0) throw PreconditionError("second cycle is not an edge cycle");
    for (int k = (k_next + 1) % d; k != k_prev; k = (k + 1) % d) wedge[b[k].edge] ^= 1;
  }
  int parity = 0;
  for (std::size_t i = 0; i < c1.size(); ++i) parity ^= wedge[s.edge_between(c1[i], c1[(i + 1) % c1.size()])];
  return parity;
}

namespace detail {

/// Best candidate cycle found from one root: two tree paths and a closing edge.
struct RootCandidate {
  double length = kInf;
  int root = -1;
  int edge = -1;
  Signature signature;
};

/// For one root, the shortest nonzero candidate of every distinct signature.
inline std::vector<RootCandidate> root_candidates(const TriSurface& s, const HomologySignatures& h, int root,
                                                  const std::function<bool(int)>& allowed = nullptr) {
  std::vector<double> dist;
  std::vector<int> parent;
  dijkstra(s, {{root, 0.0}}, dist, &parent, allowed);
  const int nv = s.num_vertices(), w = h.words();
  // Path signatures in order of increasing distance.
  std::vector<int> order;
  for (int v = 0; v < nv; ++v) {
    if (std::isfinite(dist[v])) order.push_back(v);
  }
  std::sort(order.begin(), order.end(), [&](int a, int b) { return dist[a] != dist[b] ? dist[a] < dist[b] : a < b; });
  std::vector<std::uint64_t> path(static_cast<std::size_t>(nv) * w, 0);
  std::vector<int> parent_edge(nv, -1);
  for (int v : order) {
    if (parent[v] < 0) continue;
    int e = s.edge_between(v, parent[v]);
    parent_edge[v] = e;
    for (int k = 0; k < w; ++k) path[static_cast<std::size_t>(v) * w + k] = path[static_cast<std::size_t>(parent[v]) * w + k] ^ h.edge_words(e)[k];
  }
  std::unordered_map<Signature, RootCandidate, SignatureHash> best;
  for (int e = 0; e < s.num_edges(); ++e) {
    const Edge& ed = s.edge(e);
    if (!std::isfinite(dist[ed.a]) || !std::isfinite(dist[ed.b])) continue;
    if (parent_edge[ed.a] == e || parent_edge[ed.b] == e) continue;
    Signature sig{std::vector<std::uint64_t>(w)};
    for (int k = 0; k < w; ++k) {
      sig.words[k] = path[static_cast<std::size_t>(ed.a) * w + k] ^ path[static_cast<std::size_t>(ed.b) * w + k] ^ h.edge_words(e)[k];
    }
    if (sig.is_zero()) continue;
    double len = dist[ed.a] + s.length(e) + dist[ed.b];
    auto it = best.find(sig);
    if (it == best.end() || len < it->second.length) best[sig] = {len, root, e, sig};
  }
  std::vector<RootCandidate> out;
  out.reserve(best.size());
  for (auto& [k, c] : best) out.push_back(std::move(c));
  std::sort(out.begin(), out.end(), [](const RootCandidate& a, const RootCandidate& b) {
    return a.length != b.length ? a.length < b.length : a.edge < b.edge;
  });
  return out;
}

/// Rebuilds the simple cycle lca -> a -> b -> lca for a candidate.
inline Cycle candidate_cycle(const TriSurface& s, const HomologySignatures& h, const RootCandidate& c,
                             const std::function<bool(int)>& allowed = nullptr) {
  std::vector<double> dist;
  std::vector<int> parent;
  dijkstra(s, {{c.root, 0.0}}, dist, &parent, allowed);
  const Edge& ed = s.edge(c.edge);
  std::vector<int> pa, pb;
  for (int v = ed.a; v != -1; v = parent[v]) pa.push_back(v);
  for (int v = ed.b; v != -1; v = parent[v]) pb.push_back(v);
  std::reverse(pa.begin(), pa.end());
  std::reverse(pb.begin(), pb.end());
  std::size_t k = 0;
  while (k + 1 < pa.size() && k + 1 < pb.size() && pa[k + 1] == pb[k + 1]) ++k;
  Cycle cyc;
  cyc.vertices.assign(pa.begin() + static_cast<std::ptrdiff_t>(k), pa.end());
  for (std::size_t i = pb.size(); i-- > k + 1;) cyc.vertices.push_back(pb[i]);
  cyc.length = cycle_length(s, cyc.vertices);
  cyc.signature = h.of_cycle(cyc.vertices);
  return cyc;
}

}  // namespace detail

/// Greedy shortest basis: each step takes the shortest cycle whose signature
/// is independent of the cycles already chosen.
inline CycleBasis greedy_minimal_basis(const TriSurface& s, int jobs = 1) {
  HomologySignatures h(s);
  CycleBasis out;
  out.tolerance = s.max_edge_length();
  if (h.rank() == 0) {
    out.empty_genus_zero = true;
    return out;
  }
  const int nv = s.num_vertices();
  std::vector<std::vector<detail::RootCandidate>> per_root(nv);
  detail::parallel_for(nv, jobs, [&](int v) { per_root[v] = detail::root_candidates(s, h, v); });
  Z2Span span;
  for (int step = 0; step < h.rank(); ++step) {
    const detail::RootCandidate* best = nullptr;
    for (int v = 0; v < nv; ++v) {
      for (const auto& c : per_root[v]) {
        if (best && c.length >= best->length) break;
        if (!span.contains(c.signature)) {
          best = &c;
          break;
        }
      }
    }
    if (!best) throw TopologyError("no independent cycle left; signatures do not span");
    Cycle c = detail::candidate_cycle(s, h, *best);
    span.insert(c.signature);
    out.cycles.push_back(std::move(c));
  }
  const std::size_t n = out.cycles.size();
  out.intersection.assign(n, std::vector<int>(n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) out.intersection[i][j] = intersection_mod2(s, out.cycles[i].vertices, out.cycles[j].vertices);
    }
  }
  return out;
}

/// Tree-cotree basis: the fundamental cycle of each generator edge.
inline CycleBasis homology_basis(const TriSurface& s) {
  HomologySignatures h(s);
  CycleBasis out;
  out.tolerance = s.max_edge_length();
  if (h.rank() == 0) {
    out.empty_genus_zero = true;
    return out;
  }
  // BFS tree rooted at 0, same as the signature construction.
  const int nv = s.num_vertices();
  std::vector<int> parent(nv, -1), depth(nv, -1);
  std::queue<int> bfs;
  bfs.push(0);
  depth[0] = 0;
  while (!bfs.empty()) {
    int v = bfs.front();
    bfs.pop();
    auto [b, e] = s.neighbors(v);
    for (const Neighbor* nb = b; nb != e; ++nb) {
      if (depth[nb->vertex] < 0) {
        depth[nb->vertex] = depth[v] + 1;
        parent[nb->vertex] = v;
        bfs.push(nb->vertex);
      }
    }
  }
  for (int g : h.generator_edges()) {
    int a = s.edge(g).a, b = s.edge(g).b;
    std::vector<int> pa{a}, pb{b};
    while (pa.back() != pb.back()) {
      if (depth[pa.back()] >= depth[pb.back()]) {
        pa.push_back(parent[pa.back()]);
      } else {
        pb.push_back(parent[pb.back()]);
      }
    }
    Cycle c;
    // lca -> ... -> a, then b -> ... -> lca (exclusive).
    c.vertices.assign(pa.rbegin(), pa.rend());
    for (std::size_t i = 0; i + 1 < pb.size(); ++i) c.vertices.push_back(pb[i]);
    c.length = cycle_length(s, c.vertices);
    c.signature = h.of_cycle(c.vertices);
    out.cycles.push_back(std::move(c));
  }
  std::sort(out.cycles.begin(), out.cycles.end(), [](const Cycle& a, const Cycle& b) { return a.length < b.length; });
  const std::size_t n = out.cycles.size();
  out.intersection.assign(n, std::vector<int>(n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) out.intersection[i][j] = intersection_mod2(s, out.cycles[i].vertices, out.cycles[j].vertices);
    }
  }
  return out;
}

/// Shortest homologically nontrivial cycle; exact on the skeleton graph.
inline Cycle systole(const TriSurface& s, int jobs = 1) {
  HomologySignatures h(s);
  if (h.rank() == 0) throw PreconditionError("systole needs positive genus");
  const int nv = s.num_vertices();
  std::vector<detail::RootCandidate> best(nv);
  detail::parallel_for(nv, jobs, [&](int v) {
    auto c = detail::root_candidates(s, h, v);
    if (!c.empty()) best[v] = std::move(c.front());
  });
  auto it = std::min_element(best.begin(), best.end(), [](const auto& a, const auto& b) { return a.length < b.length; });
  return detail::candidate_cycle(s, h, *it);
}

/// A short cycle with the given signature using only `allowed` vertices, or
/// an empty cycle if none exists. Not guaranteed shortest in its class.
inline Cycle cycle_in_class(const TriSurface& s, const Signature& target, const std::function<bool(int)>& allowed) {
  HomologySignatures h(s);
  detail::RootCandidate best;
  for (int v = 0; v < s.num_vertices(); ++v) {
    if (!allowed(v)) continue;
    for (const auto& c : detail::root_candidates(s, h, v, allowed)) {
      if (c.length >= best.length) break;
      if (c.signature == target) {
        best = c;
        break;
      }
    }
  }
  if (best.root < 0) return {};
  return detail::candidate_cycle(s, h, best, allowed);
}

struct StraightnessAudit {
  bool pass = true;
  /// Largest shortfall of surface distance below distance along the cycle.
  double worst_gap = 0.0;
  int pairs_checked = 0;
};

/// Checks that surface distances between sampled cycle vertices equal the
/// shorter arc of the cycle, within `tolerance`.
inline StraightnessAudit strict_straightness_audit(const TriSurface& s, const Cycle& c, double tolerance,
                                                   int samples = 8) {
  StraightnessAudit out;
  const int n = static_cast<int>(c.vertices.size());
  std::vector<double> arc(n + 1, 0.0);
  for (int i = 0; i < n; ++i) arc[i + 1] = arc[i] + s.length(s.edge_between(c.vertices[i], c.vertices[(i + 1) % n]));
  const double L = arc[n];
  const int step = std::max(1, n / std::max(1, samples));
  for (int i = 0; i < n; i += step) {
    DistanceField f = distance_field(s, c.vertices[i], Metric::Skeleton);
    for (int j = 0; j < n; ++j) {
      double along = std::abs(arc[j] - arc[i]);
      along = std::min(along, L - along);
      double gap = along - f.dist[c.vertices[j]];
      out.worst_gap = std::max(out.worst_gap, gap);
      ++out.pairs_checked;
    }
  }
  out.pass = out.worst_gap <= tolerance;
  return out;
}

struct PlanarityReport {
  /// Smallest ball radius found to be non-planar; infinite when every ball is planar.
  double radius = kInf;
  int witness = -1;
  /// Genus of the witness ball.
  int witness_genus = 0;
  /// Upper bound on useful radii (max eccentricity); reported for genus 0.
  double diameter_bound = 0.0;
  std::string method;
};

/// Total genus of the subcomplex made of triangles whose corners all have
/// dist <= R, with pinched vertices split into their fans.
inline int ball_genus(const TriSurface& s, const std::vector<double>& dist, double R) {
  const int nt = s.num_triangles();
  std::vector<char> in(nt, 0);
  int F = 0;
  for (int t = 0; t < nt; ++t) {
    const Tri& tr = s.triangle(t);
    if (dist[tr[0]] <= R && dist[tr[1]] <= R && dist[tr[2]] <= R) {
      in[t] = 1;
      ++F;
    }
  }
  if (F == 0) return 0;
  // Fan index of each (triangle, corner) and fan count.
  std::vector<std::array<int, 3>> fan(nt, {-1, -1, -1});
  int V = 0;
  for (int v = 0; v < s.num_vertices(); ++v) {
    if (dist[v] > R) continue;
    auto star = s.vertex_triangles(v);
    const int d = static_cast<int>(star.size());
    int start = -1;
    for (int k = 0; k < d; ++k) {
      if (in[star[k]] && !in[star[(k + d - 1) % d]]) {
        start = k;
        break;
      }
    }
    if (start < 0) {
      if (!in[star[0]]) continue;
      start = 0;
    }
    int id = -1;
    for (int i = 0; i < d; ++i) {
      int k = (start + i) % d;
      int t = star[k];
      if (!in[t]) continue;
      if (i == 0 || !in[star[(k + d - 1) % d]]) id = V++;
      const Tri& tr = s.triangle(t);
      fan[t][tr[0] == v ? 0 : (tr[1] == v ? 1 : 2)] = id;
    }
  }
  std::vector<int> uf(std::max(V, nt));
  auto find = [&](int x) {
    while (uf[x] != x) x = uf[x] = uf[uf[x]];
    return x;
  };
  // Components of triangles through shared edges; boundary loops through fans.
  std::iota(uf.begin(), uf.begin() + nt, 0);
  int E = 0, comps = F;
  std::vector<std::pair<int, int>> boundary;
  for (int e = 0; e < s.num_edges(); ++e) {
    auto et = s.edge_triangles(e);
    int c = in[et[0]] + in[et[1]];
    if (c == 0) continue;
    ++E;
    if (c == 2) {
      int a = find(et[0]), b = find(et[1]);
      if (a != b) {
        uf[a] = b;
        --comps;
      }
    } else {
      int t = in[et[0]] ? et[0] : et[1];
      const Tri& tr = s.triangle(t);
      auto slot = [&](int v) { return tr[0] == v ? 0 : (tr[1] == v ? 1 : 2); };
      boundary.push_back({fan[t][slot(s.edge(e).a)], fan[t][slot(s.edge(e).b)]});
    }
  }
  std::iota(uf.begin(), uf.begin() + V, 0);
  std::vector<char> on_boundary(V, 0);
  int loops = 0;
  for (auto [a, b] : boundary) {
    for (int x : {a, b}) {
      if (!on_boundary[x]) {
        on_boundary[x] = 1;
        ++loops;
      }
    }
    int ra = find(a), rb = find(b);
    if (ra != rb) {
      uf[ra] = rb;
      --loops;
    }
  }
  const int chi = V - E + F;
  return (2 * comps - loops - chi) / 2;
}

/// Smallest R for which some metric ball B(v, R) is not planar.
inline PlanarityReport planarity_radius(const TriSurface& s, Metric metric = Metric::Unfolded, int jobs = 1) {
  PlanarityReport out;
  out.method = "ball subcomplex genus from Euler characteristic, fans and boundary loops";
  const DistanceGraph g = build_distance_graph(s, metric);
  const int nv = s.num_vertices();
  if (validate_surface(s).genus == 0) {
    for (int v = 0; v < nv; ++v) out.diameter_bound = std::max(out.diameter_bound, distance_field(g, s, v).max_distance());
    return out;
  }
  // Per vertex: smallest sorted distance value at which the ball has genus.
  std::vector<double> threshold(nv, kInf);
  std::vector<int> genus_at(nv, 0);
  std::vector<double> ecc(nv, 0.0);
  detail::parallel_for(nv, jobs, [&](int v) {
    DistanceField f = distance_field(g, s, v);
    ecc[v] = f.max_distance();
    std::vector<double> vals = f.dist;
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    int lo = 0, hi = static_cast<int>(vals.size()) - 1;
    if (ball_genus(s, f.dist, vals[hi]) == 0) return;
    while (lo < hi) {
      int mid = (lo + hi) / 2;
      if (ball_genus(s, f.dist, vals[mid]) > 0) {
        hi = mid;
      } else {
        lo = mid + 1;
      }
    }
    threshold[v] = vals[lo];
    genus_at[v] = ball_genus(s, f.dist, vals[lo]);
  });
  out.diameter_bound = *std::max_element(ecc.begin(), ecc.end());
  for (int v = 0; v < nv; ++v) {
    if (threshold[v] < out.radius) {
      out.radius = threshold[v];
      out.witness = v;
      out.witness_genus = genus_at[v];
    }
  }
  return out;
}

}  // namespace hsphere
