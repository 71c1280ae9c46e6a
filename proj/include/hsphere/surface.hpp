#pragma once

// Closed oriented triangulated surfaces with an intrinsic edge-length metric.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "hsphere/errors.hpp"

namespace hsphere {

using Vec3 = std::array<double, 3>;
using Tri = std::array<int, 3>;

inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline Vec3 operator*(double s, const Vec3& a) { return {s * a[0], s * a[1], s * a[2]}; }
inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
inline Vec3 normalized(const Vec3& a) { return (1.0 / norm(a)) * a; }

/// Undirected edge, stored with a < b.
struct Edge {
  int a = 0;
  int b = 0;
  int other(int v) const { return v == a ? b : a; }
};

/// A neighbor in a vertex's rotation, together with the connecting edge.
struct Neighbor {
  int vertex;
  int edge;
};

struct SurfaceInfo {
  int vertices = 0;
  int edges = 0;
  int triangles = 0;
  int euler_characteristic = 0;
  int genus = 0;
  bool is_sphere = false;
};

/// Immutable closed, connected, oriented triangulated surface.
///
/// The metric is the edge-length vector; positions are optional provenance
/// (generated meshes carry them, intrinsic constructions such as flat tori
/// do not). Construction validates manifoldness, orientation, connectivity
/// and the per-triangle triangle inequality and throws TopologyError naming
/// the offending simplex.
class TriSurface {
 public:
  static TriSurface from_positions(std::vector<Vec3> positions, std::vector<Tri> triangles) {
    TriSurface s(static_cast<int>(positions.size()), std::move(triangles));
    s.positions_ = std::move(positions);
    s.lengths_.resize(s.edges_.size());
    for (std::size_t e = 0; e < s.edges_.size(); ++e) {
      s.lengths_[e] = norm((*s.positions_)[s.edges_[e].a] - (*s.positions_)[s.edges_[e].b]);
    }
    s.check_metric();
    return s;
  }

  /// Intrinsic surface; `length(a, b)` is queried once per undirected edge with a < b.
  static TriSurface from_edge_lengths(int num_vertices, std::vector<Tri> triangles,
                                      const std::function<double(int, int)>& length) {
    TriSurface s(num_vertices, std::move(triangles));
    s.lengths_.resize(s.edges_.size());
    for (std::size_t e = 0; e < s.edges_.size(); ++e) s.lengths_[e] = length(s.edges_[e].a, s.edges_[e].b);
    s.check_metric();
    return s;
  }

  /// Same combinatorics, new metric (and optional positions). Lengths are indexed by edge id.
  TriSurface with_metric(std::vector<double> lengths, std::optional<std::vector<Vec3>> positions) const {
    TriSurface s = *this;
    s.lengths_ = std::move(lengths);
    s.positions_ = std::move(positions);
    s.check_metric();
    return s;
  }

  int num_vertices() const { return num_vertices_; }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  int num_triangles() const { return static_cast<int>(tris_.size()); }

  const std::vector<Tri>& triangles() const { return tris_; }
  const Tri& triangle(int t) const { return tris_[t]; }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(int e) const { return edges_[e]; }
  const std::vector<double>& edge_lengths() const { return lengths_; }
  double length(int e) const { return lengths_[e]; }
  bool has_positions() const { return positions_.has_value(); }
  const std::vector<Vec3>& positions() const { return *positions_; }
  const std::optional<std::vector<Vec3>>& maybe_positions() const { return positions_; }

  /// Edge id between a and b, or -1.
  int find_edge(int a, int b) const {
    auto it = edge_index_.find(key(a, b));
    return it == edge_index_.end() ? -1 : it->second;
  }
  int edge_between(int a, int b) const {
    int e = find_edge(a, b);
    if (e < 0) throw PreconditionError("no edge between vertices " + std::to_string(a) + " and " + std::to_string(b));
    return e;
  }

  /// Edge ids of triangle t; slot k is the edge from corner k to corner k+1.
  const std::array<int, 3>& triangle_edges(int t) const { return tri_edges_[t]; }
  /// The two triangles sharing edge e.
  const std::array<int, 2>& edge_triangles(int e) const { return edge_tris_[e]; }

  /// Neighbors of v in counter-clockwise rotation order.
  std::pair<const Neighbor*, const Neighbor*> neighbors(int v) const {
    return {adj_.data() + adj_offset_[v], adj_.data() + adj_offset_[v + 1]};
  }
  int degree(int v) const { return adj_offset_[v + 1] - adj_offset_[v]; }

  /// Triangles incident to v in rotation order (triangle k lies between neighbor k and k+1).
  std::vector<int> vertex_triangles(int v) const {
    std::vector<int> out;
    auto [b, e] = neighbors(v);
    int d = static_cast<int>(e - b);
    for (int k = 0; k < d; ++k) out.push_back(triangle_with(v, b[k].vertex, b[(k + 1) % d].vertex));
    return out;
  }

  /// The oriented triangle containing the directed corner a -> b -> c, or -1.
  int triangle_with(int a, int b, int c) const {
    auto it = directed_.find(key_directed(a, b));
    if (it == directed_.end()) return -1;
    int t = it->second;
    for (int k = 0; k < 3; ++k) {
      if (tris_[t][k] == a) return tris_[t][(k + 1) % 3] == b && tris_[t][(k + 2) % 3] == c ? t : -1;
    }
    return -1;
  }

  /// Triangle whose oriented boundary contains the directed edge a -> b.
  int left_triangle(int a, int b) const {
    auto it = directed_.find(key_directed(a, b));
    return it == directed_.end() ? -1 : it->second;
  }

  double mean_edge_length() const {
    return std::accumulate(lengths_.begin(), lengths_.end(), 0.0) / static_cast<double>(lengths_.size());
  }
  double max_edge_length() const { return *std::max_element(lengths_.begin(), lengths_.end()); }
  double min_edge_length() const { return *std::min_element(lengths_.begin(), lengths_.end()); }

  /// Angle of triangle t at corner k under the flat-triangle model.
  double corner_angle(int t, int k) const {
    const auto& te = tri_edges_[t];
    double adj1 = lengths_[te[k]];
    double adj2 = lengths_[te[(k + 2) % 3]];
    double opp = lengths_[te[(k + 1) % 3]];
    double c = (adj1 * adj1 + adj2 * adj2 - opp * opp) / (2.0 * adj1 * adj2);
    return std::acos(std::clamp(c, -1.0, 1.0));
  }

 private:
  TriSurface(int num_vertices, std::vector<Tri> triangles) : num_vertices_(num_vertices), tris_(std::move(triangles)) {
    build_topology();
  }

  static std::uint64_t key(int a, int b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
  }
  static std::uint64_t key_directed(int a, int b) {
    return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
  }

  void build_topology() {
    if (num_vertices_ <= 0 || tris_.empty()) throw TopologyError("empty surface");
    tri_edges_.resize(tris_.size());
    for (std::size_t t = 0; t < tris_.size(); ++t) {
      const Tri& tr = tris_[t];
      for (int k = 0; k < 3; ++k) {
        if (tr[k] < 0 || tr[k] >= num_vertices_) {
          throw TopologyError("triangle " + std::to_string(t) + " references invalid vertex " + std::to_string(tr[k]));
        }
      }
      if (tr[0] == tr[1] || tr[1] == tr[2] || tr[0] == tr[2]) {
        throw TopologyError("triangle " + std::to_string(t) + " is degenerate (repeated vertex)");
      }
      for (int k = 0; k < 3; ++k) {
        int a = tr[k], b = tr[(k + 1) % 3];
        if (!directed_.emplace(key_directed(a, b), static_cast<int>(t)).second) {
          throw TopologyError("edge (" + std::to_string(std::min(a, b)) + "," + std::to_string(std::max(a, b)) +
                              ") is used twice with the same direction: non-manifold or inconsistently oriented");
        }
        auto [it, inserted] = edge_index_.emplace(key(a, b), static_cast<int>(edges_.size()));
        if (inserted) {
          edges_.push_back({std::min(a, b), std::max(a, b)});
          edge_tris_.push_back({static_cast<int>(t), -1});
        } else {
          auto& et = edge_tris_[it->second];
          if (et[1] != -1) {
            throw TopologyError("edge (" + std::to_string(std::min(a, b)) + "," + std::to_string(std::max(a, b)) +
                                ") is shared by more than two triangles");
          }
          et[1] = static_cast<int>(t);
        }
        tri_edges_[t][k] = it->second;
      }
    }
    for (std::size_t e = 0; e < edges_.size(); ++e) {
      if (edge_tris_[e][1] == -1) {
        throw TopologyError("boundary edge (" + std::to_string(edges_[e].a) + "," + std::to_string(edges_[e].b) +
                            "): surface is not closed");
      }
    }
    // Rotation at each vertex: around v, triangle (v, b, c) leads from b to c.
    std::vector<std::vector<std::pair<int, int>>> fan(num_vertices_);
    for (const Tri& tr : tris_) {
      for (int k = 0; k < 3; ++k) fan[tr[k]].push_back({tr[(k + 1) % 3], tr[(k + 2) % 3]});
    }
    adj_offset_.assign(num_vertices_ + 1, 0);
    for (int v = 0; v < num_vertices_; ++v) {
      const auto& f = fan[v];
      if (f.empty()) throw TopologyError("vertex " + std::to_string(v) + " is not used by any triangle");
      std::unordered_map<int, int> next;
      for (auto [b, c] : f) next[b] = c;
      int start = f.front().first, cur = start;
      std::size_t steps = 0;
      do {
        adj_.push_back({cur, edge_index_.at(key(v, cur))});
        auto it = next.find(cur);
        if (it == next.end()) throw TopologyError("vertex " + std::to_string(v) + " has an open link");
        cur = it->second;
        ++steps;
      } while (cur != start && steps <= f.size());
      if (steps != f.size()) {
        throw TopologyError("vertex " + std::to_string(v) + " is non-manifold (link is not a single cycle)");
      }
      adj_offset_[v + 1] = static_cast<int>(adj_.size());
    }
    // Connectivity.
    std::vector<char> seen(num_vertices_, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      auto [b, e] = neighbors(v);
      for (auto* n = b; n != e; ++n) {
        if (!seen[n->vertex]) {
          seen[n->vertex] = 1;
          ++count;
          stack.push_back(n->vertex);
        }
      }
    }
    if (count != num_vertices_) throw TopologyError("surface is disconnected");
  }

  void check_metric() const {
    if (lengths_.size() != edges_.size()) throw TopologyError("edge length count does not match edge count");
    for (std::size_t e = 0; e < edges_.size(); ++e) {
      if (!(lengths_[e] > 0.0) || !std::isfinite(lengths_[e])) {
        throw TopologyError("edge (" + std::to_string(edges_[e].a) + "," + std::to_string(edges_[e].b) +
                            ") has non-positive length");
      }
    }
    for (std::size_t t = 0; t < tris_.size(); ++t) {
      const auto& te = tri_edges_[t];
      double a = lengths_[te[0]], b = lengths_[te[1]], c = lengths_[te[2]];
      if (a >= b + c || b >= a + c || c >= a + b) {
        throw TopologyError("triangle " + std::to_string(t) + " violates the triangle inequality");
      }
    }
  }

  int num_vertices_ = 0;
  std::vector<Tri> tris_;
  std::vector<Edge> edges_;
  std::vector<double> lengths_;
  std::optional<std::vector<Vec3>> positions_;
  std::vector<std::array<int, 3>> tri_edges_;
  std::vector<std::array<int, 2>> edge_tris_;
  std::vector<int> adj_offset_;
  std::vector<Neighbor> adj_;
  std::unordered_map<std::uint64_t, int> edge_index_;
  std::unordered_map<std::uint64_t, int> directed_;
};

inline SurfaceInfo validate_surface(const TriSurface& s) {
  SurfaceInfo info;
  info.vertices = s.num_vertices();
  info.edges = s.num_edges();
  info.triangles = s.num_triangles();
  info.euler_characteristic = info.vertices - info.edges + info.triangles;
  if ((2 - info.euler_characteristic) % 2 != 0 || info.euler_characteristic > 2) {
    throw TopologyError("Euler characteristic " + std::to_string(info.euler_characteristic) +
                        " is impossible for a closed oriented surface");
  }
  info.genus = (2 - info.euler_characteristic) / 2;
  info.is_sphere = info.genus == 0;
  return info;
}

inline TriSurface scale_metric(const TriSurface& s, double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw PreconditionError("scale factor must be positive");
  std::vector<double> lengths = s.edge_lengths();
  for (double& l : lengths) l *= lambda;
  std::optional<std::vector<Vec3>> pos;
  if (s.has_positions()) {
    pos = s.positions();
    for (Vec3& p : *pos) p = lambda * p;
  }
  return s.with_metric(std::move(lengths), std::move(pos));
}

/// One 1-to-4 midpoint subdivision under the flat-triangle model. New
/// vertex ids: old vertices keep theirs, edge e gets num_vertices() + e.
inline TriSurface subdivide_once(const TriSurface& s) {
  const int nv = s.num_vertices();
  std::vector<Tri> tris;
  tris.reserve(4 * s.triangles().size());
  std::unordered_map<std::uint64_t, double> len;
  auto k = [](int a, int b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
  };
  for (int t = 0; t < s.num_triangles(); ++t) {
    const Tri& tr = s.triangle(t);
    const auto& te = s.triangle_edges(t);
    int m01 = nv + te[0], m12 = nv + te[1], m20 = nv + te[2];
    tris.push_back({tr[0], m01, m20});
    tris.push_back({m01, tr[1], m12});
    tris.push_back({m20, m12, tr[2]});
    tris.push_back({m01, m12, m20});
    double l01 = s.length(te[0]), l12 = s.length(te[1]), l20 = s.length(te[2]);
    len[k(tr[0], m01)] = len[k(m01, tr[1])] = 0.5 * l01;
    len[k(tr[1], m12)] = len[k(m12, tr[2])] = 0.5 * l12;
    len[k(tr[2], m20)] = len[k(m20, tr[0])] = 0.5 * l20;
    // Midlines are half the opposite side.
    len[k(m01, m12)] = 0.5 * l20;
    len[k(m12, m20)] = 0.5 * l01;
    len[k(m20, m01)] = 0.5 * l12;
  }
  TriSurface out = TriSurface::from_edge_lengths(nv + s.num_edges(), std::move(tris),
                                                 [&](int a, int b) { return len.at(k(a, b)); });
  if (s.has_positions()) {
    std::vector<Vec3> pos = s.positions();
    for (const Edge& e : s.edges()) pos.push_back(0.5 * (s.positions()[e.a] + s.positions()[e.b]));
    out = out.with_metric(out.edge_lengths(), std::move(pos));
  }
  return out;
}

inline TriSurface refine_surface(const TriSurface& s, int level) {
  if (level < 0) throw PreconditionError("refinement level must be nonnegative");
  TriSurface out = s;
  for (int i = 0; i < level; ++i) out = subdivide_once(out);
  return out;
}

// ---------------------------------------------------------------------------
// File formats. OFF is canonical: coordinates are written at full precision
// and followed by an `# edge_lengths` comment block holding the intrinsic
// metric, so a load reproduces lengths bit-exactly even for surfaces without
// an embedding.

enum class MeshFormat { OFF, OBJ };

inline MeshFormat format_from_path(const std::string& path) {
  auto dot_pos = path.find_last_of('.');
  std::string ext = dot_pos == std::string::npos ? "" : path.substr(dot_pos + 1);
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  if (ext == "off") return MeshFormat::OFF;
  if (ext == "obj") return MeshFormat::OBJ;
  throw ParseError("cannot infer mesh format from '" + path + "' (expected .off or .obj)");
}

namespace detail {

inline std::string fmt_double(double x) {
  std::ostringstream os;
  os << std::setprecision(std::numeric_limits<double>::max_digits10) << x;
  return os.str();
}

inline std::vector<Tri> fan_triangulate(const std::vector<int>& poly, int line) {
  if (poly.size() < 3) throw ParseError("line " + std::to_string(line) + ": face with fewer than 3 vertices");
  std::vector<Tri> out;
  for (std::size_t i = 1; i + 1 < poly.size(); ++i) out.push_back({poly[0], poly[i], poly[i + 1]});
  return out;
}

inline TriSurface assemble_loaded(std::vector<Vec3> pos, std::vector<Tri> tris,
                                  const std::unordered_map<std::uint64_t, double>& lengths, bool keep_positions) {
  if (lengths.empty()) return TriSurface::from_positions(std::move(pos), std::move(tris));
  const int nv = static_cast<int>(pos.size());
  TriSurface s = TriSurface::from_edge_lengths(nv, std::move(tris), [&](int a, int b) {
    auto it = lengths.find((static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b));
    if (it == lengths.end()) {
      throw ParseError("edge_lengths block is missing edge (" + std::to_string(a) + "," + std::to_string(b) + ")");
    }
    return it->second;
  });
  if (keep_positions) s = s.with_metric(s.edge_lengths(), std::move(pos));
  return s;
}

}  // namespace detail

inline TriSurface read_off(std::istream& in) {
  std::vector<std::string> tokens;
  std::unordered_map<std::uint64_t, double> lengths;
  bool keep_positions = false;
  std::string line;
  int lineno = 0;
  std::vector<int> token_line;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) {
      std::istringstream cs(line.substr(hash + 1));
      std::string tag;
      cs >> tag;
      if (tag == "L") {
        long long a, b;
        std::string val;
        if (!(cs >> a >> b >> val)) throw ParseError("line " + std::to_string(lineno) + ": malformed edge length");
        lengths[(static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b)] = std::stod(val);
      } else if (tag == "positions:") {
        std::string v;
        cs >> v;
        keep_positions = v == "yes";
      }
      line = line.substr(0, hash);
    }
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) {
      tokens.push_back(tok);
      token_line.push_back(lineno);
    }
  }
  std::size_t i = 0;
  auto next = [&]() -> const std::string& {
    if (i >= tokens.size()) throw ParseError("unexpected end of OFF file");
    return tokens[i++];
  };
  auto next_num = [&](auto parse) {
    const std::string& t = next();
    try {
      std::size_t used = 0;
      auto v = parse(t, &used);
      if (used != t.size()) throw std::invalid_argument(t);
      return v;
    } catch (const std::exception&) {
      throw ParseError("line " + std::to_string(token_line[i - 1]) + ": expected a number, got '" + t + "'");
    }
  };
  auto next_int = [&] { return next_num([](const std::string& t, std::size_t* u) { return std::stoll(t, u); }); };
  auto next_dbl = [&] { return next_num([](const std::string& t, std::size_t* u) { return std::stod(t, u); }); };
  if (next() != "OFF") throw ParseError("missing OFF header");
  long long nv = next_int(), nf = next_int();
  next_int();
  if (nv <= 0 || nf <= 0) throw ParseError("OFF header declares no vertices or faces");
  std::vector<Vec3> pos(nv);
  for (auto& p : pos) p = {next_dbl(), next_dbl(), next_dbl()};
  std::vector<Tri> tris;
  for (long long f = 0; f < nf; ++f) {
    long long n = next_int();
    int ln = token_line[i - 1];
    std::vector<int> poly;
    for (long long k = 0; k < n; ++k) {
      long long idx = next_int();
      if (idx < 0 || idx >= nv) throw ParseError("line " + std::to_string(ln) + ": vertex index out of range");
      poly.push_back(static_cast<int>(idx));
    }
    for (const Tri& t : detail::fan_triangulate(poly, ln)) tris.push_back(t);
  }
  return detail::assemble_loaded(std::move(pos), std::move(tris), lengths, keep_positions);
}

inline TriSurface read_obj(std::istream& in) {
  std::vector<Vec3> pos;
  std::vector<Tri> tris;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    if (tag == "v") {
      Vec3 p;
      if (!(ls >> p[0] >> p[1] >> p[2])) throw ParseError("line " + std::to_string(lineno) + ": malformed vertex");
      pos.push_back(p);
    } else if (tag == "f") {
      std::vector<int> poly;
      std::string tok;
      while (ls >> tok) {
        long long idx;
        try {
          idx = std::stoll(tok.substr(0, tok.find('/')));
        } catch (const std::exception&) {
          throw ParseError("line " + std::to_string(lineno) + ": malformed face index '" + tok + "'");
        }
        if (idx < 0) idx = static_cast<long long>(pos.size()) + idx + 1;
        if (idx < 1 || idx > static_cast<long long>(pos.size())) {
          throw ParseError("line " + std::to_string(lineno) + ": face index out of range");
        }
        poly.push_back(static_cast<int>(idx - 1));
      }
      for (const Tri& t : detail::fan_triangulate(poly, lineno)) tris.push_back(t);
    }
  }
  if (pos.empty() || tris.empty()) throw ParseError("OBJ file has no vertices or faces");
  return TriSurface::from_positions(std::move(pos), std::move(tris));
}

inline void write_off(std::ostream& out, const TriSurface& s) {
  out << "OFF\n";
  out << "# positions: " << (s.has_positions() ? "yes" : "no") << "\n";
  out << s.num_vertices() << ' ' << s.num_triangles() << ' ' << s.num_edges() << "\n";
  for (int v = 0; v < s.num_vertices(); ++v) {
    Vec3 p = s.has_positions() ? s.positions()[v] : Vec3{0.0, 0.0, 0.0};
    out << detail::fmt_double(p[0]) << ' ' << detail::fmt_double(p[1]) << ' ' << detail::fmt_double(p[2]) << "\n";
  }
  for (const Tri& t : s.triangles()) out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << "\n";
  out << "# edge_lengths\n";
  for (int e = 0; e < s.num_edges(); ++e) {
    out << "# L " << s.edge(e).a << ' ' << s.edge(e).b << ' ' << detail::fmt_double(s.length(e)) << "\n";
  }
}

/// OBJ carries positions only; intrinsic surfaces are written with zero coordinates.
inline void write_obj(std::ostream& out, const TriSurface& s) {
  for (int v = 0; v < s.num_vertices(); ++v) {
    Vec3 p = s.has_positions() ? s.positions()[v] : Vec3{0.0, 0.0, 0.0};
    out << "v " << detail::fmt_double(p[0]) << ' ' << detail::fmt_double(p[1]) << ' ' << detail::fmt_double(p[2])
        << "\n";
  }
  for (const Tri& t : s.triangles()) out << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << "\n";
}

inline TriSurface load_surface(const std::string& path, std::optional<MeshFormat> format = std::nullopt) {
  MeshFormat f = format ? *format : format_from_path(path);
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  return f == MeshFormat::OFF ? read_off(in) : read_obj(in);
}

inline void save_surface(const std::string& path, const TriSurface& s, std::optional<MeshFormat> format = std::nullopt) {
  MeshFormat f = format ? *format : format_from_path(path);
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write '" + path + "'");
  if (f == MeshFormat::OFF) {
    write_off(out, s);
  } else {
    write_obj(out, s);
  }
}

}  // namespace hsphere
