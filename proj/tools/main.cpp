#include <CLI11.hpp>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include "flatbundle/chern.hpp"
#include "flatbundle/fixtures.hpp"
#include "flatbundle/json_io.hpp"
#include "flatbundle/quasirep.hpp"
#include "flatbundle/transport.hpp"
#include "flatbundle/trivialize.hpp"

using namespace flatbundle;

namespace {

void emit(const Json& j) { std::cout << j.dump(2) << '\n'; }

Json base_report(const std::string& command) {
  Json j;
  j["schema"] = "1";
  j["command"] = command;
  return j;
}

Json flatness_to_json(const FlatnessReport& fl) {
  Json j;
  j["audit"] = fl.audit;
  Json pairs = Json::array();
  for (const auto& p : fl.pairs) {
    Json row;
    row["rho"] = p.rho;
    row["sigma"] = p.sigma;
    row["estimate"] = p.estimate;
    pairs.push_back(std::move(row));
  }
  j["pairs"] = std::move(pairs);
  return j;
}

Json cocycle_to_json(const CocycleReport& cc) {
  Json j;
  j["pass"] = cc.pass;
  j["max_residual"] = cc.max_residual;
  j["max_unitarity_defect"] = cc.max_unitarity_defect;
  j["shape_complete"] = cc.shape_complete;
  if (!cc.shape_detail.empty()) j["shape_detail"] = cc.shape_detail;
  if (cc.first_violation) {
    Json v;
    v["tau"] = cc.first_violation->tau;
    v["rho"] = cc.first_violation->rho;
    v["sigma"] = cc.first_violation->sigma;
    v["at"] = cc.first_violation->at;
    v["residual"] = cc.first_violation->residual;
    j["first_violation"] = std::move(v);
  }
  return j;
}

int cmd_validate(const std::string& path) {
  Json in = load_json_file(path);
  Complex x = complex_from_json(in);

  std::set<Simplex, SimplexLess> listed;
  for (const auto& s : in.at("simplices")) listed.insert(s.get<Simplex>());
  std::vector<Simplex> missing;
  for (const auto& s : x.simplices)
    if (!listed.count(s)) missing.push_back(s);

  Json rep = base_report("validate");
  Json counts;
  for (int d = 0; d <= x.dim(); ++d)
    counts[std::to_string(d)] = x.simplices_of_dim(d).size();
  rep["counts"] = std::move(counts);
  rep["euler_characteristic"] = x.euler_characteristic();
  rep["closed_under_faces"] = missing.empty();
  if (!missing.empty()) {
    Json mv = Json::array();
    for (const auto& s : missing) mv.push_back(s);
    rep["missing_faces"] = std::move(mv);
  }

  bool orientation_ok = true;
  std::string why;
  bool surface = is_closed_oriented_surface(x, &why);
  rep["closed_oriented_surface"] = surface;
  if (!surface) rep["surface_detail"] = why;
  size_t faces = x.dim() >= 2 ? x.simplices_of_dim(2).size() : 0;
  if (x.dim() == 2 && faces > 0 && x.orientation.size() == faces && !surface)
    orientation_ok = false;  // fully oriented surface data that fails coherence

  bool pass = missing.empty() && orientation_ok;
  rep["pass"] = pass;
  emit(rep);
  return pass ? 0 : 2;
}

int cmd_audit(const std::string& path, double tol) {
  CocycleBundle e = bundle_from_json(load_json_file(path));
  FlatnessReport fl = flatness_audit(e);
  CocycleReport cc = cocycle_check(e, tol);
  Json rep = base_report("audit");
  rep["rank"] = e.rank;
  rep["depth"] = e.depth;
  rep["flatness"] = flatness_to_json(fl);
  rep["cocycle"] = cocycle_to_json(cc);
  rep["pass"] = cc.pass;
  emit(rep);
  return cc.pass ? 0 : 2;
}

int cmd_trivialize(const std::string& path, const std::string& tree_mode) {
  if (tree_mode != "auto")
    throw InputError("only --tree auto is supported");
  CocycleBundle e = bundle_from_json(load_json_file(path));
  TrivializationResult res = trivialize_contractible(e);
  Json rep = base_report("trivialize");
  rep["pass"] = true;
  rep["audit"] = res.audit;
  rep["residual"] = res.residual;
  rep["chart_audit"] = res.triv.chart_audit;
  Json certs = Json::array();
  for (const auto& c : res.certificates) {
    Json row;
    row["edge"] = c.edge;
    row["defect"] = c.defect;
    if (c.bound) {
      row["complexity"] = c.bound->complexity;
      row["bound"] = c.bound->bound;
      row["delta"] = c.bound->delta;
    }
    certs.push_back(std::move(row));
  }
  rep["certificates"] = std::move(certs);
  rep["trivialization"] = trivialization_to_json(res.triv);
  emit(rep);
  return 0;
}

int cmd_extend(const std::string& path, int to_skeleton) {
  Json in = load_json_file(path);
  CocycleBundle file_e = bundle_from_json(in);
  const Complex full = file_e.base;
  if (to_skeleton < 1 || to_skeleton > full.dim())
    throw InputError("--to-skeleton must lie between 1 and the complex dimension " +
                     std::to_string(full.dim()));
  int have = 0;
  for (const auto& [pair, f] : file_e.transitions)
    have = std::max(have, static_cast<int>(pair.second.size()) - 1);
  if (have < 1) throw InputError("bundle carries no edge transitions to extend from");
  if (to_skeleton < have)
    throw InputError("bundle already covers dimension " + std::to_string(have));

  CocycleBundle cur;
  cur.base = skeleton(full, have);
  cur.rank = file_e.rank;
  cur.depth = file_e.depth;
  cur.transitions = file_e.transitions;
  const Complex target = skeleton(full, to_skeleton);
  while (cur.base.dim() < to_skeleton) cur = extend_skeleton(cur, target);

  CocycleBundle out;
  out.base = full;
  out.rank = cur.rank;
  out.depth = cur.depth;
  out.transitions = std::move(cur.transitions);
  emit(bundle_to_json(out));
  return 0;
}

int cmd_chern(const std::string& path) {
  CocycleBundle e = bundle_from_json(load_json_file(path));
  ChernResult res = chern_number(e);
  Json rep = base_report("chern");
  rep["chern"] = res.chern;
  rep["residue"] = res.residue;
  rep["total_flux"] = res.total_flux;
  rep["max_step_arg"] = res.max_step_arg;
  Json fluxes = Json::array();
  for (const auto& f : res.fluxes) {
    Json row;
    row["face"] = f.face;
    row["flux"] = f.flux;
    fluxes.push_back(std::move(row));
  }
  rep["fluxes"] = std::move(fluxes);
  rep["pass"] = true;
  emit(rep);
  return 0;
}

int cmd_rep2bundle(const std::string& path, const std::string& base, int depth) {
  if (base != "torus7")
    throw InputError("only --base torus7 is supported");
  AlmostRep r = rep_from_json(load_json_file(path));
  TorusSetup setup = torus_setup();
  AlmostRep on_torus;
  if (r.pres.generators == std::vector<std::string>{"u", "v"}) {
    on_torus = substitute(r, setup.pres, setup.substitution);
  } else if (r.pres.generator_edges == setup.pres.generator_edges) {
    on_torus = r;
  } else {
    throw InputError(
        "rep matches neither the (u,v) pair nor the torus tree presentation");
  }
  CocycleBundle e = rep_to_bundle(on_torus, setup.complex, setup.tree, depth);
  emit(bundle_to_json(e));
  return 0;
}

int cmd_bundle2rep(const std::string& path) {
  CocycleBundle e = bundle_from_json(load_json_file(path));
  Tree tree = maximal_tree(e.base);
  Presentation pres = presentation_from_tree(e.base, tree);
  AlmostRep r = bundle_to_rep(e, pres);
  Json out = rep_to_json(r);
  out["defect"] = defect(r);
  emit(out);
  return 0;
}

int cmd_probe(const std::vector<int>& ks, int depth) {
  if (ks.empty()) throw InputError("probe needs at least one clock-shift rank");
  TorusSetup setup = torus_setup();
  std::vector<std::pair<SimplicialPath, double>> loops;
  for (const auto& f : setup.complex.simplices_of_dim(2)) {
    int sign = setup.complex.orientation.at(f);
    SimplicialPath loop = sign > 0 ? SimplicialPath{f[0], f[1], f[2], f[0]}
                                   : SimplicialPath{f[0], f[2], f[1], f[0]};
    loops.push_back({std::move(loop), 1.0});
  }

  KAreaProbe probe;
  Json entries = Json::array();
  for (int k : ks) {
    AlmostRep uv = clock_shift(k);
    AlmostRep rep = substitute(uv, setup.pres, setup.substitution);
    CocycleBundle e = rep_to_bundle(rep, setup.complex, setup.tree, depth);
    double audit = flatness_audit(e).audit;
    ChernResult ch = chern_number(e);
    CFlatReport cf = c_flat_check(e, loops, hc_constants(1).c * audit);
    probe.entries.push_back({"k=" + std::to_string(k), audit, ch.chern, cf.pass});

    Json row;
    row["k"] = k;
    row["rank"] = k;
    row["defect"] = defect(uv);
    row["torus_defect"] = defect(rep);
    row["eps"] = audit;
    row["chern"] = ch.chern;
    row["flat_pass"] = cf.pass;
    entries.push_back(std::move(row));
  }
  ProbeVerdict verdict = probe_verdict(probe);

  Json rep = base_report("probe");
  rep["entries"] = std::move(entries);
  Json v;
  v["witness"] = verdict.witness;
  v["depth"] = verdict.depth;
  v["chern"] = verdict.chern;
  v["detail"] = verdict.detail;
  rep["verdict"] = std::move(v);
  rep["pass"] = verdict.witness;
  emit(rep);
  return verdict.witness ? 0 : 2;
}

Complex full_simplex_complex(int dim) {
  Simplex top;
  for (int i = 0; i <= dim; ++i) top.push_back(i);
  return build_complex(top, {top});
}

int cmd_fixture(const std::string& name, int q, int depth, int lattice_depth,
                int rank, double eps, std::uint64_t seed,
                const std::string& random_base) {
  if (name == "monopole") {
    SphereComplex s = sphere_complex(depth);
    emit(bundle_to_json(monopole_bundle(s, q, lattice_depth)));
    return 0;
  }
  if (name == "sphere") {
    SphereComplex s = sphere_complex(depth);
    Json out = complex_to_json(s.complex);
    Json coords;
    for (const auto& [v, p] : s.coords)
      coords[std::to_string(v)] = Json::array({p.x(), p.y(), p.z()});
    out["coords"] = std::move(coords);
    emit(out);
    return 0;
  }
  if (name == "torus7") {
    emit(complex_to_json(torus_complex()));
    return 0;
  }
  if (name == "random") {
    Complex base;
    if (random_base == "triangle")
      base = full_simplex_complex(2);
    else if (random_base == "delta3")
      base = full_simplex_complex(3);
    else if (random_base == "torus7")
      base = torus_complex();
    else
      throw InputError("--random-base must be triangle, delta3 or torus7");
    emit(bundle_to_json(random_flat_bundle(base, rank, lattice_depth, eps, seed)));
    return 0;
  }
  throw InputError("unknown fixture \"" + name +
                   "\" (want monopole, sphere, torus7 or random)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sampled unitary cocycles over simplicial complexes"};
  app.require_subcommand(1);

  double tol = 1e-7;
  int lattice_depth = 4;
  std::uint64_t seed = 0;
  app.add_option("--tol", tol, "residual tolerance for verification commands");
  app.add_option("--lattice-depth", lattice_depth, "barycentric sampling depth");
  app.add_option("--seed", seed, "seed for randomized fixtures");

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "closure and orientation audit of a complex");
  validate->add_option("complex", validate_path, "complex JSON file")->required();
  validate->fallthrough();

  std::string audit_path;
  auto* audit = app.add_subcommand("audit", "flatness and cocycle audit of a bundle");
  audit->add_option("bundle", audit_path, "bundle JSON file")->required();
  audit->fallthrough();

  std::string triv_path, tree_mode = "auto";
  auto* trivialize = app.add_subcommand("trivialize", "global trivialization of a contractible-base bundle");
  trivialize->add_option("bundle", triv_path, "bundle JSON file")->required();
  trivialize->add_option("--tree", tree_mode, "spanning tree choice (auto)");
  trivialize->fallthrough();

  std::string extend_path;
  int to_skeleton = 2;
  auto* extend = app.add_subcommand("extend", "extend transition data up the skeleta");
  extend->add_option("bundle", extend_path, "bundle JSON file")->required();
  extend->add_option("--to-skeleton", to_skeleton, "target skeleton dimension")->required();
  extend->fallthrough();

  std::string chern_path;
  auto* chern = app.add_subcommand("chern", "chern number of a bundle over a closed oriented surface");
  chern->add_option("bundle", chern_path, "bundle JSON file")->required();
  chern->fallthrough();

  std::string rep_path, rep_base = "torus7";
  auto* rep2bundle = app.add_subcommand("rep2bundle", "bundle from an almost representation");
  rep2bundle->add_option("rep", rep_path, "rep JSON file")->required();
  rep2bundle->add_option("--base", rep_base, "base complex (torus7)");
  rep2bundle->fallthrough();

  std::string b2r_path;
  auto* bundle2rep = app.add_subcommand("bundle2rep", "almost representation from loop transports");
  bundle2rep->add_option("bundle", b2r_path, "bundle JSON file")->required();
  bundle2rep->fallthrough();

  std::vector<int> clock_shift_ks{6, 12, 24, 48};
  auto* probe = app.add_subcommand("probe", "K-area probe over clock-shift bundles");
  probe->add_option("--clock-shift", clock_shift_ks, "comma-separated ranks")
      ->delimiter(',');
  probe->fallthrough();

  std::string fixture_name;
  int fixture_q = 1, fixture_depth = 2, fixture_rank = 2;
  double fixture_eps = 0.01;
  std::string random_base = "triangle";
  auto* fixture = app.add_subcommand("fixture", "emit a ground-truth fixture");
  fixture->add_option("name", fixture_name, "monopole, sphere, torus7 or random")->required();
  fixture->add_option("--q", fixture_q, "monopole charge");
  fixture->add_option("--depth", fixture_depth, "sphere subdivision depth");
  fixture->add_option("--rank", fixture_rank, "random fixture rank");
  fixture->add_option("--eps", fixture_eps, "random fixture target flatness");
  fixture->add_option("--random-base", random_base, "random fixture base complex");
  fixture->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*validate) return cmd_validate(validate_path);
    if (*audit) return cmd_audit(audit_path, tol);
    if (*trivialize) return cmd_trivialize(triv_path, tree_mode);
    if (*extend) return cmd_extend(extend_path, to_skeleton);
    if (*chern) return cmd_chern(chern_path);
    if (*rep2bundle) return cmd_rep2bundle(rep_path, rep_base, lattice_depth);
    if (*bundle2rep) return cmd_bundle2rep(b2r_path);
    if (*probe) return cmd_probe(clock_shift_ks, lattice_depth);
    if (*fixture)
      return cmd_fixture(fixture_name, fixture_q, fixture_depth, lattice_depth,
                         fixture_rank, fixture_eps, seed, random_base);
  } catch (const PreconditionError& e) {
    Json rep;
    rep["schema"] = "1";
    rep["pass"] = false;
    rep["precondition"] = e.what();
    emit(rep);
    return 2;
  } catch (const InputError& e) {
    Json rep;
    rep["schema"] = "1";
    rep["error"] = e.what();
    emit(rep);
    return 1;
  } catch (const std::exception& e) {
    Json rep;
    rep["schema"] = "1";
    rep["error"] = e.what();
    emit(rep);
    return 1;
  }
  return 1;
}
