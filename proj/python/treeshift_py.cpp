#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "treeshift/families.hpp"
#include "treeshift/oracle.hpp"
#include "treeshift/report.hpp"
#include "treeshift/spec_format.hpp"

namespace py = pybind11;
using namespace treeshift;

namespace {

// Reports cross the boundary as plain dicts.
py::object to_python(const json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

ScopeKind scope_of(const std::string& s) {
  if (s == "interior") return ScopeKind::interior;
  if (s == "full") return ScopeKind::full;
  throw py::value_error("scope must be 'interior' or 'full'");
}

std::optional<std::pair<AtomFunction, AtomFunction>> transport(const std::optional<std::string>& phi,
                                                               const std::optional<std::string>& psi) {
  if (!phi && !psi) return std::nullopt;
  return std::make_pair(AtomFunction::parse(phi.value_or("id")), AtomFunction::parse(psi.value_or("id")));
}

std::optional<Rational> rational_or_none(const std::optional<std::string>& v) {
  return v ? std::optional(parse_rational(*v)) : std::nullopt;
}

}  // namespace

PYBIND11_MODULE(_treeshift, m) {
  m.doc() = "Weighted shifts on directed trees";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<families::ParameterError>(m, "ParameterError", PyExc_ValueError);
  py::register_exception<oracle::NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

  py::class_<WeightedShift>(m, "Shift")
      .def_property_readonly("size", &WeightedShift::size)
      .def_property_readonly("family", [](const WeightedShift& s) { return s.annotations().family; })
      .def_property_readonly("labels",
                             [](const WeightedShift& s) {
                               std::vector<std::string> out;
                               for (Vertex v = 0; v < s.size(); ++v) out.push_back(s.tree().label(v));
                               return out;
                             })
      .def("weight_sq", [](const WeightedShift& s, const std::string& v) { return to_string(s.weight_sq(s.tree().at(v))); })
      .def("norm_sq", [](const WeightedShift& s, const std::string& v) { return to_string(s.norm_sq(s.tree().at(v))); })
      .def("to_spec", &write_tree_spec)
      .def("to_dot", &export_dot)
      .def("matrix", [](const WeightedShift& s) { return oracle::from_shift(s).matrix(); });

  m.def("parse", [](const std::string& text) { return parse_tree_spec(text); }, py::arg("text"));
  m.def(
      "family",
      [](const std::string& name, std::optional<std::size_t> depth, std::optional<std::string> c,
         std::optional<std::string> q) { return families::generate(name, depth, rational_or_none(c), rational_or_none(q)); },
      py::arg("name"), py::arg("depth") = py::none(), py::arg("c") = py::none(), py::arg("q") = py::none());

  m.def(
      "classify",
      [](const WeightedShift& s, const std::string& scope, bool use_float, std::optional<std::string> phi,
         std::optional<std::string> psi) {
        return to_python(classify_report(s, scope_of(scope), use_float, transport(phi, psi)));
      },
      py::arg("shift"), py::arg("scope") = "interior", py::arg("float_mode") = false, py::arg("phi") = py::none(),
      py::arg("psi") = py::none());

  m.def(
      "oracle",
      [](const WeightedShift& s, const std::string& scope, std::uint64_t seed, std::size_t vectors,
         std::optional<std::string> phi, std::optional<std::string> psi) {
        OracleOptions opt;
        opt.scope = scope_of(scope);
        opt.seed = seed;
        opt.random_vectors = vectors;
        opt.transport = transport(phi, psi);
        return to_python(compare_with_oracle(s, opt).report);
      },
      py::arg("shift"), py::arg("scope") = "interior", py::arg("seed") = 0, py::arg("vectors") = 100,
      py::arg("phi") = py::none(), py::arg("psi") = py::none());

  m.def(
      "izonp",
      [](std::complex<double> b, std::complex<double> d) {
        return to_python(izonp_json(oracle::izonp_counterexample_check(b, d)));
      },
      py::arg("b"), py::arg("d"));
}
