// hsphere command-line front end. Reports go to stdout as JSON; errors go to
// stderr as JSON with exit codes 2 (usage), 1 (audit violation or failed
// construction), 3 (topology or parse error).

#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "hsphere/audit.hpp"
#include "hsphere/generators.hpp"
#include "hsphere/homology.hpp"
#include "hsphere/levelset.hpp"
#include "hsphere/report.hpp"
#include "hsphere/spheremap.hpp"
#include "hsphere/sweepout.hpp"

using namespace hsphere;
using report::json;

namespace {

enum Exit { kOk = 0, kViolation = 1, kUsage = 2, kInput = 3 };

struct Common {
  int refine = 1;
  int jobs = 1;
  std::uint64_t seed = 7;
  std::string output;
};

int fail(int code, const std::string& kind, const std::string& message) {
  std::cerr << json{{"error", kind}, {"message", message}, {"exit_code", code}}.dump() << "\n";
  return code;
}

void emit(const json& j, const std::string& path = "") {
  if (path.empty()) {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write '" + path + "'");
  out << j.dump(2) << "\n";
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write '" + path + "'");
  return out;
}

TriSurface load(const std::string& path, int refine) {
  TriSurface s = load_surface(path);
  validate_surface(s);
  return refine_surface(s, refine);
}

json header(const std::string& command, const std::string& mesh, const Common& c, const TriSurface& s) {
  json j = report::envelope(command);
  j["input"] = mesh;
  j["refine"] = c.refine;
  j["seed"] = c.seed;
  j["surface"] = report::surface_json(s);
  return j;
}

int pick_basepoint(const TriSurface& s, int requested) {
  if (requested < 0) return default_basepoint(s);
  if (requested >= s.num_vertices()) throw PreconditionError("basepoint " + std::to_string(requested) + " out of range");
  return requested;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hypersphericity, width and systole estimates for triangulated surfaces"};
  app.require_subcommand(1);
  Common c;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--refine", c.refine, "Midpoint subdivision levels applied to input meshes")->check(CLI::Range(0, 6));
    sub->add_option("--jobs", c.jobs, "Worker threads")->check(CLI::Range(1, 256));
    sub->add_option("--seed", c.seed, "Seed for randomized steps");
  };

  // gen
  auto* gen = app.add_subcommand("gen", "Write a generator mesh as OFF plus a JSON sidecar");
  std::string kind;
  std::map<std::string, double> gen_params;
  gen->add_option("kind", kind, "icosphere | ellipsoid | dumbbell | fingered_sphere | flat_torus | genus_g")->required();
  for (const char* key : {"subdiv", "radius", "a", "b", "c", "n", "neck_radius", "fingers", "L1", "L2", "G", "handle_scale"}) {
    gen->add_option_function<double>(std::string("--") + key, [&gen_params, key](double v) { gen_params[key] = v; },
                                     "Generator parameter");
  }
  gen->add_option("-o,--output", c.output, "Output mesh (.off or .obj)")->required();
  add_common(gen);

  // analyze
  auto* analyze = app.add_subcommand("analyze", "D estimate, hypersphericity sandwich, Reeb graph and width");
  std::string mesh;
  int basepoint = -1;
  std::string dot_path;
  analyze->add_option("mesh", mesh, "Input mesh")->required();
  analyze->add_option("--basepoint", basepoint, "Basepoint vertex (default: central vertex)");
  analyze->add_option("--dot", dot_path, "Write the Reeb graph as DOT");
  analyze->add_option("-o,--output", c.output, "Write the report here instead of stdout");
  add_common(analyze);

  // map
  auto* map = app.add_subcommand("map", "Certified degree-1 map to the unit sphere");
  std::string certificate_path;
  map->add_option("mesh", mesh, "Input mesh")->required();
  map->add_option("--basepoint", basepoint, "Basepoint vertex (default: central vertex)");
  map->add_option("-o,--output", c.output, "Sphere map OBJ")->required();
  map->add_option("--certificate", certificate_path, "Write the certificate here instead of stdout");
  add_common(map);

  // systole
  auto* sys = app.add_subcommand("systole", "Systole, greedy minimal basis and planarity radius");
  bool planarity = false;
  sys->add_option("mesh", mesh, "Input mesh")->required();
  sys->add_flag("--planarity", planarity, "Also compute the planarity radius");
  sys->add_option("-o,--output", c.output, "Write the report here instead of stdout");
  add_common(sys);

  // width
  auto* width = app.add_subcommand("width", "Uryson width upper bound, or the width of a branched double cover");
  double cover_eps = 0.0;
  width->add_option("mesh", mesh, "Input mesh");
  width->add_option("--basepoint", basepoint, "Basepoint vertex (default: central vertex)");
  width->add_option("--cover", cover_eps, "Build a branched double cover with this branch density instead")
      ->check(CLI::PositiveNumber);
  width->add_option("-o,--output", c.output, "Write the report here instead of stdout");
  add_common(width);

  // sweepout
  auto* sweep = app.add_subcommand("sweepout", "Shorten level loops to a closed quasi-geodesic");
  SweepoutParams sp;
  std::string curves_path;
  sweep->add_option("mesh", mesh, "Input mesh")->required();
  sweep->add_option("--basepoint", basepoint, "Basepoint vertex (default: farthest from the central vertex)");
  sweep->add_option("--levels", sp.levels, "Level radii seeded")->check(CLI::Range(1, 1000));
  sweep->add_option("--refine-steps", sp.refine_steps, "Bisection steps between collapsing brackets")
      ->check(CLI::Range(0, 60));
  sweep->add_option("--max-iters", sp.shorten.max_iters, "Shortening iterations per seed")->check(CLI::PositiveNumber);
  sweep->add_option("--curves", curves_path, "Write the best curve as an OBJ polyline");
  sweep->add_option("-o,--output", c.output, "Write the report here instead of stdout");
  add_common(sweep);

  // audit
  auto* aud = app.add_subcommand("audit", "Run the inequality suite; exit 1 on any violation");
  audit::AuditOptions ao;
  aud->add_option("--suite", ao.suite, "default | genus0 | genus | cover")
      ->check(CLI::IsMember({"default", "genus0", "genus", "cover"}));
  aud->add_option("--epsilon", ao.cover_epsilon, "Branch density of the cover check")->check(CLI::PositiveNumber);
  aud->add_option("-o,--output", c.output, "Write the report here instead of stdout");
  add_common(aud);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail(kUsage, "usage_error", e.what());
  }

  try {
    if (gen->parsed()) {
      GeneratedSurface g = generate(kind, gen_params, c.seed);
      // Generated meshes are written as built unless --refine is given; analysis commands refine on load.
      const int levels = gen->count("--refine") ? c.refine : 0;
      TriSurface s = refine_surface(g.surface, levels);
      save_surface(c.output, s);
      json j = report::envelope("gen");
      j["kind"] = g.kind;
      j["params"] = gen_params;
      j["refine"] = levels;
      j["reference"] = g.reference;
      j["surface"] = report::surface_json(s);
      emit(j, c.output + ".json");
      return kOk;
    }

    if (analyze->parsed()) {
      TriSurface s = load(mesh, c.refine);
      int p = pick_basepoint(s, basepoint);
      DistanceField f = distance_field(s, p);
      LevelAnalysis a = analyze_levels(s, f);
      json j = header("analyze", mesh, c, s);
      j["metric"] = report::metric_name(f.metric);
      j["estimate"] = report::to_json(a.estimate);
      j["sandwich"] = {{"lower", a.estimate.hs_lower},
                       {"upper", a.estimate.hs_upper},
                       {"ratio", a.estimate.hs_upper / a.estimate.hs_lower},
                       {"contains_one", a.estimate.hs_lower <= 1.0 && 1.0 <= a.estimate.hs_upper}};
      j["reeb"] = report::to_json(a.reeb);
      j["uryson_width_upper"] = report::to_json(uryson_width_upper(s, f));
      if (!dot_path.empty()) open_out(dot_path) << reeb_to_dot(a.reeb);
      emit(j, c.output);
      return kOk;
    }

    if (map->parsed()) {
      TriSurface s = load(mesh, c.refine);
      Degree1Construction d = construct_degree1_map(s, pick_basepoint(s, basepoint), {}, c.seed);
      auto out = open_out(c.output);
      write_sphere_map_obj(out, s, d.map);
      json j = header("map", mesh, c, s);
      j["construction"] = report::to_json(d);
      j["obj"] = c.output;
      emit(j, certificate_path);
      return d.certificate.degree == 1 && d.certificate.degrees_agree && d.certificate.within_bound ? kOk : kViolation;
    }

    if (sys->parsed()) {
      TriSurface s = load(mesh, c.refine);
      json j = header("systole", mesh, c, s);
      j["systole"] = report::to_json(systole(s, c.jobs));
      j["greedy_basis"] = report::to_json(greedy_minimal_basis(s, c.jobs));
      if (planarity) j["planarity"] = report::to_json(planarity_radius(s, Metric::Unfolded, c.jobs));
      emit(j, c.output);
      return kOk;
    }

    if (width->parsed()) {
      if (cover_eps > 0.0) {
        audit::AuditOptions o;
        o.cover_epsilon = cover_eps;
        o.seed = c.seed;
        json j = report::envelope("width");
        j["branched_cover"] = audit::audit_branched_cover(o);
        emit(j, c.output);
        return kOk;
      }
      if (mesh.empty()) return fail(kUsage, "usage_error", "width needs a mesh or --cover");
      TriSurface s = load(mesh, c.refine);
      int p = pick_basepoint(s, basepoint);
      json j = header("width", mesh, c, s);
      j["basepoint"] = p;
      j["uryson_width_upper"] = report::to_json(uryson_width_upper(s, distance_field(s, p)));
      emit(j, c.output);
      return kOk;
    }

    if (sweep->parsed()) {
      TriSurface s = load(mesh, c.refine);
      int p = basepoint < 0 ? audit::sweep_basepoint(s) : pick_basepoint(s, basepoint);
      sp.jobs = c.jobs;
      SweepoutResult r = sweepout_search(s, distance_field(s, p, Metric::Skeleton), sp);
      json j = header("sweepout", mesh, c, s);
      j["basepoint"] = p;
      j["sweepout"] = report::to_json(r);
      if (!curves_path.empty() && r.best) {
        auto out = open_out(curves_path);
        write_polyline_obj(out, s, {*r.best});
      }
      emit(j, c.output);
      return r.best ? kOk : kViolation;
    }

    if (aud->parsed()) {
      ao.refine = c.refine;
      ao.jobs = c.jobs;
      ao.seed = c.seed;
      ao.sweepout.jobs = c.jobs;
      json j = audit::run_audit(ao);
      emit(j, c.output);
      return j.at("pass").get<bool>() ? kOk : kViolation;
    }
  } catch (const ParseError& e) {
    return fail(kInput, e.kind(), e.what());
  } catch (const TopologyError& e) {
    return fail(kInput, e.kind(), e.what());
  } catch (const PreconditionError& e) {
    return fail(kUsage, e.kind(), e.what());
  } catch (const ConstructionError& e) {
    return fail(kViolation, e.kind(), e.what());
  }
  return kUsage;
}
