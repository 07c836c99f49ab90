#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "flatbundle/chern.hpp"
#include "flatbundle/fixtures.hpp"
#include "flatbundle/json_io.hpp"
#include "flatbundle/matrixcore.hpp"
#include "flatbundle/quasirep.hpp"
#include "flatbundle/transport.hpp"
#include "flatbundle/trivialize.hpp"

namespace py = pybind11;
using namespace flatbundle;

namespace {

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    throw InputError(std::string("malformed JSON: ") + e.what());
  }
}

// std::map keys that are themselves lists do not convert to dict keys, so
// maps keyed by simplices are exposed through accessor methods instead.
template <typename Map>
std::vector<typename Map::key_type> map_keys(const Map& m) {
  std::vector<typename Map::key_type> out;
  out.reserve(m.size());
  for (const auto& [k, v] : m) out.push_back(k);
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "sampled unitary cocycles over simplicial complexes";

  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_RuntimeError);

  // simplicial complexes
  py::class_<Complex>(m, "Complex")
      .def(py::init<>())
      .def_readonly("vertices", &Complex::vertices)
      .def_readonly("simplices", &Complex::simplices)
      .def_property_readonly("orientation",
                             [](const Complex& x) {
                               std::vector<std::pair<Simplex, int>> out(
                                   x.orientation.begin(), x.orientation.end());
                               return out;
                             })
      .def("contains", &Complex::contains)
      .def("dim", &Complex::dim)
      .def("simplices_of_dim", &Complex::simplices_of_dim)
      .def("neighbors", &Complex::neighbors)
      .def("euler_characteristic", &Complex::euler_characteristic)
      .def("__repr__", [](const Complex& x) {
        return "<Complex dim=" + std::to_string(x.dim()) + " simplices=" +
               std::to_string(x.simplices.size()) + ">";
      });

  m.def("build_complex", &build_complex, py::arg("vertices"), py::arg("faces"),
        py::arg("orientation") = std::map<Simplex, int>{});
  m.def("skeleton", &skeleton);
  m.def("faces_of", &faces_of);
  m.def("is_closed_oriented_surface",
        [](const Complex& x) { return is_closed_oriented_surface(x); });
  m.def("star_subcomplex", &star_subcomplex);

  py::class_<Subdivision>(m, "Subdivision")
      .def_readonly("complex", &Subdivision::complex)
      .def_readonly("vertex_simplex", &Subdivision::vertex_simplex)
      .def("simplex_vertex", [](const Subdivision& sd, const Simplex& s) {
        auto it = sd.simplex_vertex.find(s);
        if (it == sd.simplex_vertex.end())
          throw InputError("simplex " + simplex_str(s) + " is not in the subdivided complex");
        return it->second;
      });
  m.def("barycentric_subdivide", &barycentric_subdivide);

  py::class_<Tree>(m, "Tree")
      .def_readonly("root", &Tree::root)
      .def_property_readonly("edges",
                             [](const Tree& t) {
                               return std::vector<Simplex>(t.edges.begin(), t.edges.end());
                             })
      .def_readonly("parent", &Tree::parent)
      .def_readonly("spans_all", &Tree::spans_all)
      .def("has_edge", &Tree::has_edge)
      .def("path_from_root", &Tree::path_from_root);
  m.def("maximal_tree", &maximal_tree);
  m.def("path_valid", [](const Complex& x, const SimplicialPath& p) {
    std::string why;
    bool ok = path_valid(x, p, &why);
    return std::make_pair(ok, why);
  });

  // contraction witnesses
  py::enum_<MoveKind>(m, "MoveKind")
      .value("BacktrackInsert", MoveKind::BacktrackInsert)
      .value("BacktrackDelete", MoveKind::BacktrackDelete)
      .value("TriangleInsert", MoveKind::TriangleInsert)
      .value("TriangleDelete", MoveKind::TriangleDelete);
  py::class_<Move>(m, "Move")
      .def_readonly("kind", &Move::kind)
      .def_readonly("pos", &Move::pos)
      .def_readonly("w1", &Move::w1)
      .def_readonly("w2", &Move::w2);
  py::class_<ContractionWitness>(m, "ContractionWitness")
      .def_readonly("moves", &ContractionWitness::moves)
      .def("complexity", &ContractionWitness::complexity);
  py::class_<WitnessReplay>(m, "WitnessReplay")
      .def_readonly("valid", &WitnessReplay::valid)
      .def_readonly("first_bad_move", &WitnessReplay::first_bad_move)
      .def_readonly("final_path", &WitnessReplay::final_path)
      .def_readonly("contracted", &WitnessReplay::contracted);
  m.def("apply_witness", &apply_witness);
  m.def("find_contraction", &find_contraction);

  py::class_<Presentation>(m, "Presentation")
      .def_readonly("generators", &Presentation::generators)
      .def_readonly("relations", &Presentation::relations)
      .def_readonly("basepoint", &Presentation::basepoint)
      .def_readonly("generator_loops", &Presentation::generator_loops)
      .def_readonly("generator_edges", &Presentation::generator_edges)
      .def("generator_index", &Presentation::generator_index);
  m.def("presentation_from_tree", &presentation_from_tree);
  m.def("expand_word", &expand_word);

  // sampled maps
  m.def("lattice_points", &lattice_points);
  m.def("boundary_lattice_points", &boundary_lattice_points);
  m.def("lattice_distance", &lattice_distance);

  py::class_<SampledUnitaryMap>(m, "SampledUnitaryMap")
      .def_readonly("k", &SampledUnitaryMap::k)
      .def_readonly("m", &SampledUnitaryMap::m)
      .def_readonly("boundary_only", &SampledUnitaryMap::boundary_only)
      .def_readonly("values", &SampledUnitaryMap::values)
      .def("rank", &SampledUnitaryMap::rank)
      .def("points", &SampledUnitaryMap::points)
      .def("index_of", &SampledUnitaryMap::index_of)
      .def("at", [](const SampledUnitaryMap& f, const LatticeCoords& c) { return f.at(c); })
      .def("eval", &SampledUnitaryMap::eval);
  m.def("make_sampled", &make_sampled);
  m.def("make_boundary_sampled", &make_boundary_sampled);
  m.def("constant_map", &constant_map);
  m.def("lipschitz_estimate", &lipschitz_estimate);
  m.def("sampled_diameter", &sampled_diameter);
  m.def("restrict_map", &restrict_map);
  m.def("unitary_extend", &unitary_extend, py::arg("alpha0"), py::arg("tol") = 1e-12);

  // matrix helpers
  m.def("op_norm", &op_norm);
  m.def("skew_project", &skew_project);
  m.def("polar_project", &polar_project);
  m.def("unitarize_g", &unitarize_g, py::arg("v"), py::arg("tol") = 1e-12);
  m.def("unitary_log", &unitary_log, py::arg("u"), py::arg("margin") = 0.0);
  m.def("skew_exp", &skew_exp);
  m.def("max_eig_arg", &max_eig_arg);
  m.def("unitarity_defect", &unitarity_defect);

  // bundles
  py::class_<CocycleBundle>(m, "CocycleBundle")
      .def(py::init<>())
      .def_readonly("base", &CocycleBundle::base)
      .def_readonly("rank", &CocycleBundle::rank)
      .def_readonly("depth", &CocycleBundle::depth)
      .def("pairs",
           [](const CocycleBundle& e) { return map_keys(e.transitions); })
      .def("psi", &CocycleBundle::psi, py::return_value_policy::copy)
      .def("psi_at", &CocycleBundle::psi_at)
      .def("has_pair", &CocycleBundle::has_pair)
      .def("__repr__", [](const CocycleBundle& e) {
        return "<CocycleBundle rank=" + std::to_string(e.rank) + " depth=" +
               std::to_string(e.depth) + " transitions=" +
               std::to_string(e.transitions.size()) + ">";
      });
  m.def("bundle_from_charts", &bundle_from_charts);
  m.def("identity_bundle", &identity_bundle);

  py::class_<FlatnessPair>(m, "FlatnessPair")
      .def_readonly("rho", &FlatnessPair::rho)
      .def_readonly("sigma", &FlatnessPair::sigma)
      .def_readonly("estimate", &FlatnessPair::estimate);
  py::class_<FlatnessReport>(m, "FlatnessReport")
      .def_readonly("audit", &FlatnessReport::audit)
      .def_readonly("pairs", &FlatnessReport::pairs);
  m.def("flatness_audit", &flatness_audit);

  py::class_<CocycleViolation>(m, "CocycleViolation")
      .def_readonly("tau", &CocycleViolation::tau)
      .def_readonly("rho", &CocycleViolation::rho)
      .def_readonly("sigma", &CocycleViolation::sigma)
      .def_readonly("at", &CocycleViolation::at)
      .def_readonly("residual", &CocycleViolation::residual);
  py::class_<CocycleReport>(m, "CocycleReport")
      .def_readonly("pass_", &CocycleReport::pass)
      .def_readonly("max_residual", &CocycleReport::max_residual)
      .def_readonly("max_unitarity_defect", &CocycleReport::max_unitarity_defect)
      .def_readonly("shape_complete", &CocycleReport::shape_complete)
      .def_readonly("shape_detail", &CocycleReport::shape_detail)
      .def_readonly("first_violation", &CocycleReport::first_violation)
      .def("__bool__", [](const CocycleReport& r) { return r.pass; });
  m.def("cocycle_check", &cocycle_check, py::arg("e"), py::arg("tol") = 1e-7,
        py::arg("tol_unitary") = 1e-8);

  m.def("pullback", &pullback);
  m.def("bundle_restrict", &bundle_restrict);
  m.def("direct_sum", &direct_sum);
  m.def("to_subdivision", &to_subdivision);
  m.def("from_subdivision", &from_subdivision);

  py::class_<GlobalTrivialization>(m, "GlobalTrivialization")
      .def_readonly("rank", &GlobalTrivialization::rank)
      .def_readonly("depth", &GlobalTrivialization::depth)
      .def_readonly("chart_audit", &GlobalTrivialization::chart_audit)
      .def("chart_keys",
           [](const GlobalTrivialization& t) { return map_keys(t.charts); })
      .def("chart", &GlobalTrivialization::chart, py::return_value_policy::copy);
  m.def("trivialization_residual", &trivialization_residual);

  // transport
  py::class_<TransportResult>(m, "TransportResult")
      .def_readonly("matrix", &TransportResult::matrix)
      .def_readonly("path", &TransportResult::path);
  m.def("edge_transport", &edge_transport);
  m.def("path_transport", &path_transport);
  m.def("loop_defect", &loop_defect);

  py::class_<HcConstants>(m, "HcConstants")
      .def_readonly("c", &HcConstants::c)
      .def_readonly("delta", &HcConstants::delta);
  m.def("hc_constants", &hc_constants);

  py::class_<WitnessedBoundReport>(m, "WitnessedBoundReport")
      .def_readonly("witness_valid", &WitnessedBoundReport::witness_valid)
      .def_readonly("complexity", &WitnessedBoundReport::complexity)
      .def_readonly("audit", &WitnessedBoundReport::audit)
      .def_readonly("delta", &WitnessedBoundReport::delta)
      .def_readonly("audit_ok", &WitnessedBoundReport::audit_ok)
      .def_readonly("defect", &WitnessedBoundReport::defect)
      .def_readonly("bound", &WitnessedBoundReport::bound)
      .def_readonly("defect_within", &WitnessedBoundReport::defect_within)
      .def_readonly("pass_", &WitnessedBoundReport::pass)
      .def("describe", &WitnessedBoundReport::describe);
  m.def("verify_witnessed_bound", &verify_witnessed_bound, py::arg("e"),
        py::arg("loop"), py::arg("w"), py::arg("audit") = -1.0,
        py::arg("tol") = 1e-9);

  // trivialization and extension
  py::class_<LoopCertificate>(m, "LoopCertificate")
      .def_readonly("edge", &LoopCertificate::edge)
      .def_readonly("loop", &LoopCertificate::loop)
      .def_readonly("defect", &LoopCertificate::defect)
      .def_readonly("witness", &LoopCertificate::witness)
      .def_readonly("bound", &LoopCertificate::bound);
  py::class_<TrivializeOptions>(m, "TrivializeOptions")
      .def(py::init<>())
      .def_readwrite("max_audit", &TrivializeOptions::max_audit)
      .def_readwrite("max_defect", &TrivializeOptions::max_defect)
      .def_readwrite("tol", &TrivializeOptions::tol);
  py::class_<TrivializationResult>(m, "TrivializationResult")
      .def_readonly("triv", &TrivializationResult::triv)
      .def_readonly("tree", &TrivializationResult::tree)
      .def_readonly("certificates", &TrivializationResult::certificates)
      .def_readonly("audit", &TrivializationResult::audit)
      .def_readonly("residual", &TrivializationResult::residual);
  m.def("trivialize", &trivialize, py::arg("e"), py::arg("tree"),
        py::arg("certs"), py::arg("opts") = TrivializeOptions{});
  m.def("trivialize_contractible", &trivialize_contractible, py::arg("e"),
        py::arg("opts") = TrivializeOptions{});

  py::class_<ExtendOptions>(m, "ExtendOptions")
      .def(py::init<>())
      .def_readwrite("log_margin", &ExtendOptions::log_margin)
      .def_readwrite("max_defect", &ExtendOptions::max_defect)
      .def_readwrite("inner", &ExtendOptions::inner);
  py::class_<EdgeExtensionHint>(m, "EdgeExtensionHint")
      .def(py::init<>())
      .def_readwrite("edge", &EdgeExtensionHint::edge)
      .def_readwrite("path", &EdgeExtensionHint::path)
      .def_readwrite("witness", &EdgeExtensionHint::witness);
  m.def("extend_skeleton", &extend_skeleton, py::arg("e"), py::arg("x"),
        py::arg("opts") = ExtendOptions{});
  m.def("extend_subcomplex", &extend_subcomplex, py::arg("e"), py::arg("xprime"),
        py::arg("hints") = std::vector<EdgeExtensionHint>{},
        py::arg("opts") = ExtendOptions{});

  py::class_<BundleIso>(m, "BundleIso")
      .def_readonly("rank", &BundleIso::rank)
      .def_readonly("depth", &BundleIso::depth)
      .def_readonly("max_residual", &BundleIso::max_residual)
      .def_readonly("edge_gap", &BundleIso::edge_gap)
      .def("conjugator_keys",
           [](const BundleIso& i) { return map_keys(i.conjugators); })
      .def("conjugator", [](const BundleIso& i, const Simplex& s) {
        auto it = i.conjugators.find(s);
        if (it == i.conjugators.end())
          throw InputError("no conjugator for " + simplex_str(s));
        return it->second;
      });
  m.def("iso_between", &iso_between);

  // almost representations
  py::class_<AlmostRep>(m, "AlmostRep")
      .def(py::init<>())
      .def_readwrite("pres", &AlmostRep::pres)
      .def_readwrite("images", &AlmostRep::images)
      .def("rank", &AlmostRep::rank);
  m.def("evaluate_word", &evaluate_word);
  m.def("defect", &defect);
  m.def("closeness", &closeness);
  m.def("closeness_embedded", &closeness_embedded);
  m.def("substitute", &substitute);
  m.def("bundle_to_rep", &bundle_to_rep);
  m.def("rep_to_bundle", &rep_to_bundle, py::arg("rep"), py::arg("x"),
        py::arg("tree"), py::arg("depth") = 4, py::arg("opts") = ExtendOptions{});
  m.def("clock_shift", &clock_shift);
  m.def("rep_direct_sum", &rep_direct_sum);

  py::class_<RepSequenceReport>(m, "RepSequenceReport")
      .def_readonly("ranks_nondecreasing", &RepSequenceReport::ranks_nondecreasing)
      .def_readonly("defects_nonincreasing", &RepSequenceReport::defects_nonincreasing)
      .def_readonly("defects", &RepSequenceReport::defects)
      .def_readonly("closeness_steps", &RepSequenceReport::closeness_steps)
      .def_readonly("pass_", &RepSequenceReport::pass);
  m.def("check_sequence", [](const std::vector<AlmostRep>& reps) {
    return check_sequence(RepSequence{reps});
  });

  // chern numbers and K-area probes
  py::class_<FaceFlux>(m, "FaceFlux")
      .def_readonly("face", &FaceFlux::face)
      .def_readonly("flux", &FaceFlux::flux);
  py::class_<ChernResult>(m, "ChernResult")
      .def_readonly("chern", &ChernResult::chern)
      .def_readonly("residue", &ChernResult::residue)
      .def_readonly("total_flux", &ChernResult::total_flux)
      .def_readonly("max_step_arg", &ChernResult::max_step_arg)
      .def_readonly("fluxes", &ChernResult::fluxes);
  m.def("chern_number", &chern_number, py::arg("e"), py::arg("margin") = 0.1,
        py::arg("max_residue") = 1e-6);

  py::class_<CFlatRow>(m, "CFlatRow")
      .def_readonly("loop", &CFlatRow::loop)
      .def_readonly("weight", &CFlatRow::weight)
      .def_readonly("defect", &CFlatRow::defect)
      .def_readonly("bound", &CFlatRow::bound)
      .def_readonly("pass_", &CFlatRow::pass);
  py::class_<CFlatReport>(m, "CFlatReport")
      .def_readonly("pass_", &CFlatReport::pass)
      .def_readonly("eps", &CFlatReport::eps)
      .def_readonly("rows", &CFlatReport::rows);
  m.def("c_flat_check", &c_flat_check);

  py::class_<ProbeEntry>(m, "ProbeEntry")
      .def(py::init<const std::string&, double, int, bool>(), py::arg("label"),
           py::arg("eps"), py::arg("chern"), py::arg("flat_pass") = true)
      .def_readwrite("label", &ProbeEntry::label)
      .def_readwrite("eps", &ProbeEntry::eps)
      .def_readwrite("chern", &ProbeEntry::chern)
      .def_readwrite("flat_pass", &ProbeEntry::flat_pass);
  py::class_<ProbeVerdict>(m, "ProbeVerdict")
      .def_readonly("witness", &ProbeVerdict::witness)
      .def_readonly("depth", &ProbeVerdict::depth)
      .def_readonly("chern", &ProbeVerdict::chern)
      .def_readonly("detail", &ProbeVerdict::detail);
  m.def("probe_verdict", [](const std::vector<ProbeEntry>& entries) {
    return probe_verdict(KAreaProbe{entries});
  });

  // fixtures
  m.def("torus_complex", &torus_complex);
  py::class_<SphereComplex>(m, "SphereComplex")
      .def_readonly("complex", &SphereComplex::complex)
      .def_readonly("coords", &SphereComplex::coords);
  m.def("sphere_complex", &sphere_complex);
  m.def("spherical_area", &spherical_area);
  m.def("monopole_bundle", &monopole_bundle, py::arg("s"), py::arg("q"),
        py::arg("lattice_depth") = 4);
  m.def("holonomy_oracle", &holonomy_oracle);
  m.def("random_flat_bundle", &random_flat_bundle);
  py::class_<TorusSetup>(m, "TorusSetup")
      .def_readonly("complex", &TorusSetup::complex)
      .def_readonly("tree", &TorusSetup::tree)
      .def_readonly("pres", &TorusSetup::pres)
      .def_readonly("classes", &TorusSetup::classes)
      .def_readonly("substitution", &TorusSetup::substitution);
  m.def("torus_setup", &torus_setup);
  m.def("clock_shift_torus_bundle", &clock_shift_torus_bundle, py::arg("k"),
        py::arg("depth") = 4);
  m.def("clock_shift_torus_rep", &clock_shift_torus_rep);

  // JSON bridging; python side round trips through plain strings
  m.def("complex_to_json", [](const Complex& x) { return complex_to_json(x).dump(2); });
  m.def("complex_from_json",
        [](const std::string& s) { return complex_from_json(parse_json(s)); });
  m.def("bundle_to_json", [](const CocycleBundle& e) { return bundle_to_json(e).dump(2); });
  m.def("bundle_from_json",
        [](const std::string& s) { return bundle_from_json(parse_json(s)); });
  m.def("rep_to_json", [](const AlmostRep& r) { return rep_to_json(r).dump(2); });
  m.def("rep_from_json", [](const std::string& s) { return rep_from_json(parse_json(s)); });
  m.def("trivialization_to_json",
        [](const GlobalTrivialization& t) { return trivialization_to_json(t).dump(2); });
  m.def("trivialization_from_json",
        [](const std::string& s) { return trivialization_from_json(parse_json(s)); });
}
