#pragma once

// JSON serialization of analysis results. Non-finite numbers are written as
// null with a companion flag; surface points as {edge, t}.

#include <cmath>
#include <string>
#include <vector>

#include <json.hpp>

#include "hsphere/geodesic.hpp"
#include "hsphere/homology.hpp"
#include "hsphere/levelset.hpp"
#include "hsphere/spheremap.hpp"
#include "hsphere/surface.hpp"
#include "hsphere/sweepout.hpp"

namespace hsphere::report {

using nlohmann::json;

inline constexpr const char* kSchema = "hsphere.report/1";

inline json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

inline json to_json(const SurfacePoint& p) { return {{"edge", p.edge}, {"t", p.t}}; }

inline json to_json(const Vec3& v) { return json::array({v[0], v[1], v[2]}); }

inline const char* metric_name(Metric m) { return m == Metric::Skeleton ? "skeleton" : "unfolded"; }

inline json envelope(const std::string& command) { return {{"schema", kSchema}, {"command", command}}; }

inline json surface_json(const TriSurface& s) {
  SurfaceInfo info = validate_surface(s);
  return {{"vertices", info.vertices},
          {"edges", info.edges},
          {"triangles", info.triangles},
          {"euler_characteristic", info.euler_characteristic},
          {"genus", info.genus},
          {"distance_tolerance", s.max_edge_length()},
          {"mean_edge", s.mean_edge_length()}};
}

/// One audited inequality: value compared against bound (<= unless `at_least`).
inline json check(const std::string& name, const std::string& constant, double value, double bound, double tolerance,
                  bool at_least = false) {
  bool pass = at_least ? value >= bound - tolerance : value <= bound + tolerance;
  return {{"name", name},         {"constant", constant},   {"value", number(value)},
          {"bound", number(bound)}, {"tolerance", tolerance}, {"relation", at_least ? ">=" : "<="},
          {"pass", pass}};
}

inline json to_json(const LevelComponent& c) {
  json pts = json::array();
  for (const auto& p : c.polyline) pts.push_back(to_json(p));
  return {{"radius", c.radius}, {"diameter", c.diameter}, {"q", to_json(c.q())}, {"r", to_json(c.r())}, {"polyline", pts}};
}

inline json to_json(const DEstimate& e) {
  return {{"basepoint", e.basepoint},
          {"D", e.D},
          {"witness",
           {{"radius", e.radius}, {"q", to_json(e.q)}, {"r", to_json(e.r)}, {"crossings", e.component.polyline.size()}}},
          {"hypersphericity",
           {{"lower", e.hs_lower}, {"lower_constant", "D/(pi(2+sqrt2))"}, {"upper", e.hs_upper}, {"upper_constant", "2D/pi"}}},
          {"uryson_width",
           {{"lower", e.uw_lower}, {"lower_constant", "D/(2(2+sqrt2))"}, {"upper", e.uw_upper}, {"upper_constant", "D"}}},
          {"tolerance", e.tolerance},
          {"radii_scanned", e.radii_scanned},
          {"diameters_evaluated", e.diameters_evaluated}};
}

inline json to_json(const ReebGraph& g) {
  json nodes = json::array(), arcs = json::array();
  for (const auto& n : g.nodes) nodes.push_back({{"vertex", n.vertex}, {"value", n.value}, {"type", to_string(n.type)}});
  for (const auto& a : g.arcs) {
    arcs.push_back({{"from", a.from},
                    {"to", a.to},
                    {"max_fiber_diameter", a.max_fiber_diameter},
                    {"witness_radius", a.witness_radius},
                    {"fibers_sampled", a.fibers_sampled}});
  }
  return {{"basepoint", g.basepoint}, {"is_tree", g.is_tree()},     {"leaves", g.leaves()},
          {"nodes", nodes},           {"arcs", arcs},               {"max_fiber_diameter", g.max_fiber_diameter()},
          {"tolerance", g.tolerance}};
}

inline json to_json(const MapWidth& w) {
  return {{"width", w.width}, {"witness", w.witness}, {"witness_pair", {w.witness_a, w.witness_b}}, {"tolerance", w.tolerance}};
}

inline json to_json(const MapCertificate& c) {
  return {{"discrete_lipschitz", c.discrete_lipschitz},
          {"degree", c.degree},
          {"signed_area_degree", c.signed_area_degree},
          {"residual", c.residual},
          {"regular_value_degree", c.regular_value_degree},
          {"regular_value", to_json(c.regular_value)},
          {"degrees_agree", c.degrees_agree},
          {"lipschitz_bound", c.bound_claimed},
          {"within_bound", c.within_bound}};
}

inline json to_json(const SplitCurve& c) {
  return {{"p", c.p},         {"q", c.q},         {"r", c.r},          {"level", c.level},
          {"R0", c.R},        {"y0", c.y0},       {"D_certified", c.D}, {"band", c.delta},
          {"cycle", c.cycle}, {"g_pq", c.g_pq},   {"gamma_qr", c.gamma_qr}, {"g_pr", c.g_pr}};
}

inline json to_json(const SphereMap& m) {
  json params = json::object();
  for (const auto& [k, v] : m.params) params[k] = number(v);
  return {{"variant", m.variant},
          {"disk", {{"center", {m.disk.center[0], m.disk.center[1]}}, {"radius", m.disk.radius}}},
          {"params", params}};
}

inline json to_json(const Degree1Construction& c) {
  return {{"estimate", to_json(c.estimate)},
          {"split_curve", to_json(c.split)},
          {"planar_lipschitz", c.planar.lipschitz},
          {"map", to_json(c.map)},
          {"certificate", to_json(c.certificate)},
          {"lipschitz_constant", "(2+sqrt2)pi/D"}};
}

inline json to_json(const Cycle& c) { return {{"length", c.length}, {"vertices", c.vertices}}; }

inline json to_json(const CycleBasis& b) {
  json cycles = json::array();
  for (const auto& c : b.cycles) cycles.push_back(to_json(c));
  return {{"cycles", cycles}, {"intersection", b.intersection}, {"genus_zero", b.empty_genus_zero}, {"tolerance", b.tolerance}};
}

inline json to_json(const PlanarityReport& r) {
  return {{"radius", number(r.radius)},
          {"infinite", !std::isfinite(r.radius)},
          {"witness", r.witness},
          {"witness_genus", r.witness_genus},
          {"diameter_bound", r.diameter_bound},
          {"method", r.method}};
}

inline json to_json(const StraightnessAudit& a) {
  return {{"pass", a.pass}, {"worst_gap", a.worst_gap}, {"pairs_checked", a.pairs_checked}};
}

inline json to_json(const SystolicMapResult& r) {
  json j = {{"constructed", r.constructed}, {"status", r.status}, {"p", r.p}, {"q", r.q}, {"L", r.L},
            {"component_winding", r.component_winding}};
  if (r.map) j["map"] = to_json(*r.map);
  return j;
}

inline json to_json(const CurveState& c) {
  json pts = json::array();
  for (const auto& p : c.points) pts.push_back(to_json(p));
  return {{"length", c.length}, {"iterations", c.iterations}, {"points", pts}};
}

inline json to_json(const SweepoutResult& r) {
  json table = json::array();
  for (const auto& o : r.table) {
    table.push_back({{"radius", o.radius},
                     {"seed_length", o.seed_length},
                     {"final_length", o.final_length},
                     {"outcome", to_string(o.outcome)},
                     {"iterations", o.iterations},
                     {"min_side_angle", o.min_side_angle},
                     {"stationary", o.stationary},
                     {"refined", o.refined},
                     {"side", o.side}});
  }
  json j = {{"status", r.status}, {"best_seed", r.best_seed}, {"seeds", table}};
  j["best"] = r.best ? to_json(*r.best) : json(nullptr);
  return j;
}

}  // namespace hsphere::report
