#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "scottflat/backforth.hpp"
#include "scottflat/corpus.hpp"
#include "scottflat/errors.hpp"
#include "scottflat/flat.hpp"
#include "scottflat/groups.hpp"
#include "scottflat/reconstruct.hpp"
#include "scottflat/reductions.hpp"
#include "scottflat/structures.hpp"

namespace py = pybind11;
using namespace scottflat;

namespace {

py::dict flat_report(const FlatReport& r) {
  py::dict d;
  d["ok"] = r.ok;
  d["axiom"] = r.axiom;
  d["detail"] = r.detail;
  d["witness"] = r.witness;
  d["amalgamation_checked"] = r.amalgamation_checked;
  d["amalgamation_skipped"] = r.amalgamation_skipped;
  return d;
}

std::vector<std::vector<Tuple>> classes(const TruncatedSystem& s, int k) {
  if (k < 0 || k > s.n_max) throw InputError("arity out of range");
  std::vector<std::vector<Tuple>> out(s.num_classes(k));
  int64_t total = tuple_count(s.size, k);
  for (int64_t code = 0; code < total; ++code)
    out[s.cls[k][static_cast<size_t>(code)]].push_back(decode_tuple(code, k, s.size));
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Back-and-forth systems, flat structures and subgroup codes on finite structures";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<GuardExceeded>(m, "GuardExceeded", PyExc_RuntimeError);
  py::register_exception<FlatnessViolation>(m, "FlatnessViolation", PyExc_RuntimeError);
  py::register_exception<TruncationTooSmall>(m, "TruncationTooSmall", PyExc_RuntimeError);

  py::class_<FinStructure>(m, "Structure")
      .def_readonly("size", &FinStructure::size)
      .def("to_text", &serialize_structure)
      .def("to_json", &serialize_structure_json)
      .def("__eq__", [](const FinStructure& a, const FinStructure& b) { return a == b; })
      .def("__repr__", [](const FinStructure& s) { return "Structure(" + serialize_structure(s) + ")"; });
  m.def("parse_structure", &parse_structure, py::arg("text"));
  m.def("parse_structure_json", &parse_structure_json, py::arg("text"));
  m.def("is_isomorphic", [](const FinStructure& a, const FinStructure& b) { return find_isomorphism(a, b).has_value(); });

  py::class_<TruncatedSystem>(m, "System")
      .def_readonly("n_max", &TruncatedSystem::n_max)
      .def_readonly("size", &TruncatedSystem::size)
      .def("num_classes", &TruncatedSystem::num_classes, py::arg("k"))
      .def("classes", &classes, py::arg("k"), "Tuples of each class at arity k, classes in id order.")
      .def("class_of", &TruncatedSystem::class_of, py::arg("tuple"))
      .def("to_json", &serialize_system_json)
      .def("__eq__", [](const TruncatedSystem& a, const TruncatedSystem& b) { return same_partitions(a, b); });
  m.def("parse_system_json", &parse_system_json, py::arg("text"));
  m.def("compute_F_infinity", &compute_F_infinity, py::arg("structure"), py::arg("n_max"),
        "Largest sharp system of the structure truncated at n_max.");
  m.def("orbit_oracle", &orbit_oracle, py::arg("structure"), py::arg("n_max"), py::arg("guard_size") = 8);
  m.def("orbit_system", &orbit_system, py::arg("size"), py::arg("n_max"), py::arg("generators"));
  m.def("validate_sharp", [](const FinStructure& s, const TruncatedSystem& sys) {
    SharpReport r = validate_sharp(s, sys);
    py::dict d;
    d["ok"] = r.ok;
    d["clause"] = r.clause;
    d["detail"] = r.detail;
    return d;
  });

  py::class_<FlatStructure>(m, "FlatStructure")
      .def_readonly("n_max", &FlatStructure::n_max)
      .def("size", &FlatStructure::size)
      .def("arity", &FlatStructure::arity, py::arg("element"))
      .def("universe_sizes",
           [](const FlatStructure& b) {
             std::vector<size_t> out;
             for (const auto& u : b.universes()) out.push_back(u.size());
             return out;
           })
      .def("to_json", &serialize_flat_json)
      .def("__eq__", [](const FlatStructure& a, const FlatStructure& b) { return a == b; });
  m.def("parse_flat_json", &parse_flat_json, py::arg("text"));
  m.def("flatten", [](const FinStructure& s, const TruncatedSystem& sys) { return flatten(s, sys); },
        py::arg("structure"), py::arg("system"));
  m.def("check_flat_axioms", [](const FlatStructure& b) { return flat_report(check_flat_axioms(b)); });
  m.def("hausdorff_check", [](const FlatStructure& b) {
    HausdorffResult h = hausdorff_check(b);
    py::dict d;
    d["hausdorff"] = h.hausdorff;
    d["pair"] = h.hausdorff ? py::object(py::none()) : py::object(py::make_tuple(h.left, h.right));
    return d;
  });
  m.def(
      "reconstruct",
      [](const FlatStructure& b, bool greatest) {
        Reconstruction r = reconstruct(b, greatest ? ChainOrder::Greatest : ChainOrder::Least);
        return py::make_tuple(r.m, r.s, r.chain.chain);
      },
      py::arg("flat"), py::arg("greatest") = false, "Returns (structure, system, covering chain).");
  m.def("roundtrip_ok", [](const FlatStructure& b) { return roundtrip_check(b).ok; });
  m.def("canonical_form", &canonical_form, py::arg("flat"));

  py::class_<PermGroup>(m, "PermGroup")
      .def_readonly("degree", &PermGroup::degree)
      .def_readonly("generators", &PermGroup::gens)
      .def_readonly("elements", &PermGroup::elements)
      .def("order", &PermGroup::order)
      .def("contains", &PermGroup::contains)
      .def("__repr__", &group_to_string);
  m.def("symmetric_group", &symmetric_group, py::arg("n"));
  m.def("parse_group", &parse_group, py::arg("text"), py::arg("degree") = 0);
  m.def("generate", [](int degree, const std::vector<Perm>& gens) { return generate(degree, gens); });
  m.def("automorphism_group", &automorphism_group, py::arg("structure"), py::arg("guard_size") = 10);
  m.def("exponent", &exponent);
  m.def("perm_to_cycles", &perm_to_cycles);
  m.def("conjugacy_test", &conjugacy_test, py::arg("h1"), py::arg("h2"), py::arg("g"),
        "Least conjugator in g carrying h1 onto h2, or None.");
  m.def("all_subgroups", &all_subgroups, py::arg("g"), py::arg("guard") = 48);
  m.def("divides", [](const PermGroup& g, const PermGroup& h) { return divides_check(g, h).has_value(); });
  m.def("code_system", [](const PermGroup& g, int n_max) { return code_to_system(code_of(g, n_max)); },
        py::arg("group"), py::arg("n_max"), "Orbit partitions of the group's code as a system.");
  m.def("is_sharp_code", [](const std::vector<Perm>& perms, int degree, int n_max) {
    return is_sharp_code(code_of(perms, degree, n_max));
  });
  m.def("bireduction_agrees", [](const FinStructure& s, const TruncatedSystem& a, const TruncatedSystem& b) {
    return bireduction_check(s, a, b).agree();
  });

  py::class_<Graph>(m, "Graph").def_readonly("k", &Graph::k).def("to_text", &serialize_graph);
  m.def("parse_graph", &parse_graph, py::arg("text"));
  m.def(
      "fs_pipeline_check",
      [](const Graph& g, const Graph& h, int p) {
        FsReport r = fs_pipeline_check(g, h, p);
        py::dict d;
        d["graphs_isomorphic"] = r.graphs_isomorphic;
        d["trees_isomorphic"] = r.trees_isomorphic;
        d["codes_conjugate"] = r.codes_conjugate;
        d["agree"] = r.agree();
        return d;
      },
      py::arg("g"), py::arg("h"), py::arg("p") = 3);
  m.def(
      "padded_tree",
      [](const Graph& g, int p) { return graph_to_padded_tree(g, p).parent; }, py::arg("g"), py::arg("p") = 3,
      "Parent array of the padded tree coding the graph.");

  m.def(
      "exponent_experiment",
      [](const std::vector<int>& h) {
        CrossCutSpec spec;
        spec.h = h;
        ExponentReport r = exponent_experiment(spec);
        py::dict d;
        d["aut_order"] = r.aut_order;
        d["exponent"] = r.exponent;
        d["k_factorial"] = r.k_factorial;
        d["divides"] = r.divides;
        d["obstruction"] = r.obstruction;
        return d;
      },
      py::arg("h"));
  m.def(
      "build_cross_cut",
      [](const std::vector<int>& h, const std::map<std::vector<int>, int>& mult) {
        CrossCutSpec spec;
        spec.h = h;
        spec.mult = mult;
        return build_cross_cut(spec);
      },
      py::arg("h"), py::arg("mult") = std::map<std::vector<int>, int>{});
  m.def("quotient_coloring", &quotient_coloring);

  m.def("corpus_hash", [](uint64_t seed) { return hex64(corpus_hash(generate_corpus(seed))); }, py::arg("seed") = 0);
}
