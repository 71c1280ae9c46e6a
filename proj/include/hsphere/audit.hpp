#pragma once

// Inequality audit over the generator suite. Every check records the constant
// it tests, the computed value, the bound and the tolerance used.

#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "hsphere/generators.hpp"
#include "hsphere/homology.hpp"
#include "hsphere/levelset.hpp"
#include "hsphere/report.hpp"
#include "hsphere/spheremap.hpp"
#include "hsphere/sweepout.hpp"

namespace hsphere::audit {

using report::json;

struct SuiteMesh {
  std::string name;
  TriSurface surface;
  std::map<std::string, double> reference;
};

struct AuditOptions {
  std::string suite = "default";
  int refine = 1;
  int jobs = 1;
  std::uint64_t seed = 7;
  double cover_epsilon = 0.3;
  SweepoutParams sweepout;
};

inline SuiteMesh suite_mesh(const std::string& name, const GeneratedSurface& g, int refine) {
  return {name, refine_surface(g.surface, refine), g.reference};
}

inline std::vector<SuiteMesh> genus0_suite(int refine) {
  return {suite_mesh("icosphere", icosphere(3), refine), suite_mesh("ellipsoid", ellipsoid(1, 1, 0.5, 3), refine),
          suite_mesh("dumbbell", dumbbell(0.2, 3), refine), suite_mesh("fingered_sphere", fingered_sphere(3, 3), refine)};
}

inline std::vector<SuiteMesh> higher_genus_suite(int refine) {
  std::vector<SuiteMesh> out;
  for (int G = 1; G <= 3; ++G) out.push_back(suite_mesh("genus_" + std::to_string(G), genus_g(G, 0.5, 2), refine));
  out.push_back(suite_mesh("flat_torus", flat_torus(1, 1, 16), refine));
  return out;
}

/// Vertex farthest from the default basepoint; level loops around it sweep the whole surface.
inline int sweep_basepoint(const TriSurface& s) {
  DistanceField f = distance_field(s, default_basepoint(s), Metric::Skeleton);
  int best = 0;
  for (int v = 1; v < s.num_vertices(); ++v) {
    if (f.dist[v] > f.dist[best]) best = v;
  }
  return best;
}

inline json sweepout_checks(const TriSurface& normalized, double scale, const std::map<std::string, double>& reference,
                            const SweepoutParams& params, json& checks) {
  SweepoutResult r = sweepout_search(normalized, distance_field(normalized, sweep_basepoint(normalized), Metric::Skeleton),
                                     params);
  double len = r.best ? r.best->length : kInf;
  json c = report::check("sweepout_geodesic", "160 (with 2D/pi = 1)", len, 160.0, 0.0);
  c["status"] = r.status;
  c["witness"] = {{"seed", r.best_seed}, {"outcome", r.best ? "converged" : "none"}};
  checks.push_back(c);
  auto it = reference.find("shortest_closed_geodesic");
  if (it != reference.end()) {
    double target = scale * it->second;
    json g = report::check("round_sphere_geodesic", "|L - 2 pi R| <= 0.05 * 2 pi R", std::abs(len - target),
                           0.05 * target, 0.0);
    g["reference"] = target;
    checks.push_back(g);
  }
  json j = report::to_json(r);
  j.erase("seeds");
  return j;
}

inline json audit_genus0(const SuiteMesh& m, const AuditOptions& opt) {
  const TriSurface& s = m.surface;
  json checks = json::array();
  const int p = default_basepoint(s);
  Degree1Construction c = construct_degree1_map(s, p, {}, opt.seed);
  const DEstimate& est = c.estimate;
  json witness = {{"basepoint", p}, {"q", report::to_json(est.q)}, {"r", report::to_json(est.r)}, {"radius", est.radius}};

  json sw = report::check("sandwich_ordered", "D/(pi(2+sqrt2)) <= 2D/pi", est.hs_lower, est.hs_upper, 0.0);
  sw["witness"] = witness;
  checks.push_back(sw);
  auto hs = m.reference.find("hypersphericity");
  if (hs != m.reference.end()) {
    json lo = report::check("sandwich_contains_true_lower", "D/(pi(2+sqrt2)) <= HS", est.hs_lower, hs->second, 0.0);
    json up = report::check("sandwich_contains_true_upper", "2D/pi >= HS", est.hs_upper, hs->second, 0.0, true);
    lo["witness"] = up["witness"] = witness;
    checks.push_back(lo);
    checks.push_back(up);
  }

  const MapCertificate& cert = c.certificate;
  json deg = report::check("map_degree", "degree = 1", std::abs(cert.degree - 1), 0.0, 0.0);
  deg["pass"] = cert.degree == 1 && cert.degrees_agree;
  deg["witness"] = {{"signed_area_degree", cert.signed_area_degree},
                    {"regular_value_degree", cert.regular_value_degree},
                    {"residual", cert.residual}};
  checks.push_back(deg);
  json lip = report::check("map_lipschitz", "1.05 (2+sqrt2) pi / D", cert.discrete_lipschitz,
                           1.05 * kDegree1LipschitzFactor / est.D, 0.0);
  lip["witness"] = {{"split_curve_D", c.split.D}, {"q", c.split.q}, {"r", c.split.r}};
  checks.push_back(lip);
  double certified = 1.0 / cert.discrete_lipschitz;
  checks.push_back(report::check("certified_lower_below_upper", "1/Lip <= 2D/pi", certified, est.hs_upper, 0.0));

  DistanceField fp = distance_field(s, p);
  ReebGraph g = reeb_graph(s, fp);
  json rb = report::check("reeb_fiber_diameter", "max fiber <= D", g.max_fiber_diameter(), est.D, fp.tolerance);
  rb["witness"] = {{"basepoint", p}};
  checks.push_back(rb);
  json tree = report::check("reeb_tree", "E = V - 1", static_cast<double>(g.arcs.size()),
                            static_cast<double>(g.nodes.size()) - 1.0, 0.0);
  tree["pass"] = g.is_tree();
  checks.push_back(tree);

  const double scale = std::numbers::pi / (2.0 * est.D);
  json sweep = sweepout_checks(scale_metric(s, scale), scale, m.reference, opt.sweepout, checks);

  return {{"name", m.name},
          {"surface", report::surface_json(s)},
          {"estimate", report::to_json(est)},
          {"normalization", scale},
          {"sweepout", sweep},
          {"checks", checks}};
}

inline json audit_higher_genus(const SuiteMesh& m, const AuditOptions& opt) {
  const int p = default_basepoint(m.surface);
  DEstimate raw = estimate_D(m.surface, p);
  const double scale = 1.0 / raw.hs_upper;
  const TriSurface s = scale_metric(m.surface, scale);
  const int genus = validate_surface(s).genus;
  json checks = json::array();

  DistanceField fp = distance_field(s, p);
  LevelAnalysis levels = analyze_levels(s, fp);
  MapWidth uw = uryson_width_upper(s, fp);
  Cycle sys = systole(s, opt.jobs);
  json sc = report::check("systole_vs_width", "sys <= 8 UW1", sys.length, 8.0 * uw.width, 0.0);
  sc["witness"] = {{"systole_vertices", sys.vertices}, {"width_witness", uw.witness}};
  checks.push_back(sc);

  CycleBasis basis = greedy_minimal_basis(s, opt.jobs);
  for (std::size_t k = 0; k < basis.cycles.size(); ++k) {
    json ck = report::check("greedy_cycle_" + std::to_string(k + 1), "len(C_k) <= 200 k", basis.cycles[k].length,
                            200.0 * static_cast<double>(k + 1), 0.0);
    ck["witness"] = {{"vertices", basis.cycles[k].vertices.size()}, {"first", basis.cycles[k].vertices.front()}};
    checks.push_back(ck);
  }
  checks.push_back(report::check("uryson_width", "UW1 <= 200 G + 12", uw.width, 200.0 * genus + 12.0, 0.0));

  json rb = report::check("reeb_fiber_diameter", "max fiber <= D", levels.reeb.max_fiber_diameter(), levels.estimate.D,
                          fp.tolerance);
  rb["witness"] = {{"basepoint", p}};
  checks.push_back(rb);

  return {{"name", m.name},
          {"surface", report::surface_json(s)},
          {"normalization", scale},
          {"estimate", report::to_json(levels.estimate)},
          {"systole", report::to_json(sys)},
          {"basis_lengths", [&] {
             json l = json::array();
             for (const auto& c : basis.cycles) l.push_back(c.length);
             return l;
           }()},
          {"uryson_width", report::to_json(uw)},
          {"checks", checks}};
}

/// The covering projection composed with radial projection onto the unit sphere.
inline SphereMap cover_projection(const BranchedCover& bc) {
  SphereMap m;
  m.variant = "branched_cover";
  m.image.reserve(bc.vertex_map.size());
  for (int b : bc.vertex_map) m.image.push_back(normalized(bc.base.positions()[b]));
  return m;
}

inline json audit_branched_cover(const AuditOptions& opt) {
  BranchedCover bc = branched_double_cover(opt.cover_epsilon, opt.seed);
  MapCertificate cert = verify_map(bc.cover, cover_projection(bc), 1.02, opt.seed);
  MapWidth w = map_width(bc.cover, bc.base, bc.vertex_map);
  json checks = json::array();
  json deg = report::check("cover_degree", "degree = 2", std::abs(std::abs(cert.degree) - 2), 0.0, 0.0);
  deg["pass"] = std::abs(cert.degree) == 2 && cert.degrees_agree;
  checks.push_back(deg);
  checks.push_back(report::check("cover_lipschitz", "1.02", cert.discrete_lipschitz, 1.02, 0.0));
  json wc = report::check("cover_width", "width <= 3 epsilon", w.width, 3.0 * opt.cover_epsilon, 0.0);
  wc["witness"] = report::to_json(w);
  checks.push_back(wc);
  return {{"epsilon", opt.cover_epsilon},
          {"seed", opt.seed},
          {"branch_points", bc.branch_points.size()},
          {"cover", report::surface_json(bc.cover)},
          {"certificate", report::to_json(cert)},
          {"checks", checks}};
}

inline int count_failures(const json& entry) {
  int n = 0;
  for (const auto& c : entry.at("checks")) n += c.at("pass").get<bool>() ? 0 : 1;
  return n;
}

/// Suites: "default" (everything), "genus0", "genus", "cover".
inline json run_audit(const AuditOptions& opt) {
  const std::string& suite = opt.suite;
  if (suite != "default" && suite != "genus0" && suite != "genus" && suite != "cover") {
    throw PreconditionError("unknown audit suite '" + suite + "'");
  }
  json out = report::envelope("audit");
  out["suite"] = suite;
  out["refine"] = opt.refine;
  out["seed"] = opt.seed;
  json meshes = json::array();
  int failures = 0;
  if (suite == "default" || suite == "genus0") {
    for (const auto& m : genus0_suite(opt.refine)) {
      meshes.push_back(audit_genus0(m, opt));
      failures += count_failures(meshes.back());
    }
  }
  if (suite == "default" || suite == "genus") {
    for (const auto& m : higher_genus_suite(opt.refine)) {
      meshes.push_back(audit_higher_genus(m, opt));
      failures += count_failures(meshes.back());
    }
  }
  out["meshes"] = meshes;
  if (suite == "default" || suite == "cover") {
    out["branched_cover"] = audit_branched_cover(opt);
    failures += count_failures(out["branched_cover"]);
  }
  out["violations"] = failures;
  out["pass"] = failures == 0;
  return out;
}

}  // namespace hsphere::audit
