#include "effop/composite.hpp"
#include "effop/json_io.hpp"

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace effop;

namespace {

ModuliPair moduli(Complex l1, Complex l2) { return ModuliPair{l1, l2}; }

std::pair<Method, int> parse_method(const std::string& name) {
  if (name == "schur") return {Method::schur, 0};
  if (name == "inverse") return {Method::inverse_formula, 0};
  if (name == "fraction") return {Method::direct, 0};
  if (name == "spectral") return {Method::spectral, 0};
  if (name.rfind("cf:", 0) == 0)
    return {Method::continued_fraction, std::stoi(name.substr(3))};
  throw std::invalid_argument("unknown method: " + name);
}

CMatrix effective(const Z2Collection& c, Complex l1, Complex l2,
                  const std::string& method) {
  const ModuliPair m = moduli(l1, l2);
  const auto [kind, cf_depth] = parse_method(method);
  switch (kind) {
    case Method::schur: return effective_schur(c, m).matrix;
    case Method::inverse_formula: return effective_inverse_formula(c, m).matrix;
    case Method::spectral: return effective_spectral(spectral_precompute(c), m).matrix;
    case Method::direct: {
      auto [y, next] = derive_y(c);
      return fractional_relation(c, y, m).matrix;
    }
    case Method::continued_fraction: {
      const RecursionHierarchy h = build_hierarchy(c, cf_depth + 1, c.tol);
      const int depth = std::min<int>(cf_depth, int(h.levels.size()) - 1);
      return continued_fraction_eval(h, m, depth, Terminal::exact()).matrix;
    }
  }
  throw std::invalid_argument("unknown method");
}

py::dict report_dict(const ValidationReport& r) {
  py::list checks;
  for (const auto& c : r.checks) {
    py::dict d;
    d["label"] = c.label;
    d["residual"] = c.residual;
    d["threshold"] = c.threshold;
    d["ok"] = c.ok;
    checks.append(d);
  }
  py::dict out;
  out["passed"] = r.passed;
  out["checks"] = checks;
  out["dims"] = r.dims;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
  mod.doc() = "effective operators on orthogonal subspace collections";

  py::register_exception<SingularL11>(mod, "SingularL11", PyExc_ArithmeticError);
  py::register_exception<SingularB>(mod, "SingularB", PyExc_ArithmeticError);
  py::register_exception<SingularF>(mod, "SingularF", PyExc_ArithmeticError);
  py::register_exception<SingularShiftedY>(mod, "SingularShiftedY",
                                           PyExc_ArithmeticError);
  py::register_exception<PoleHit>(mod, "PoleHit", PyExc_ArithmeticError);
  py::register_exception<ZeroModulus>(mod, "ZeroModulus", PyExc_ArithmeticError);
  py::register_exception<DegenerateIntersection>(mod, "DegenerateIntersection",
                                                 PyExc_ArithmeticError);

  py::class_<Z2Collection>(mod, "Collection")
      .def_readonly("ambient_dim", &Z2Collection::ambient_dim)
      .def_property_readonly("u", [](const Z2Collection& c) { return c.U.vectors; })
      .def_property_readonly("e", [](const Z2Collection& c) { return c.E.vectors; })
      .def_property_readonly("j", [](const Z2Collection& c) { return c.J.vectors; })
      .def_property_readonly("p1", [](const Z2Collection& c) { return c.P1.vectors; })
      .def_property_readonly("p2", [](const Z2Collection& c) { return c.P2.vectors; })
      .def("__repr__", [](const Z2Collection& c) {
        return "<Collection ambient=" + std::to_string(c.ambient_dim) +
               " u=" + std::to_string(c.U.dim()) + " e=" + std::to_string(c.E.dim()) +
               " j=" + std::to_string(c.J.dim()) + ">";
      });

  mod.def("series_model", &series_model);
  mod.def("parallel_model", &parallel_model);
  mod.def(
      "random_collection",
      [](Index n, Index du, Index de, Index dj, Index dp1, std::uint64_t seed) {
        return random_collection(n, du, de, dj, dp1, seed);
      },
      py::arg("ambient_dim"), py::arg("dim_u"), py::arg("dim_e"), py::arg("dim_j"),
      py::arg("dim_p1"), py::arg("seed"));

  mod.def("validate", [](const Z2Collection& c) { return report_dict(validate(c)); });

  mod.def("effective", &effective, py::arg("collection"), py::arg("l1"), py::arg("l2"),
          py::arg("method") = "schur",
          "effective operator; method: schur | inverse | fraction | spectral | cf:N");

  mod.def(
      "solve_z",
      [](const Z2Collection& c, Complex l1, Complex l2, const CVector& e) {
        const ZSolution s = solve_z_direct(c, moduli(l1, l2), e);
        py::dict d;
        d["j"] = s.j;
        d["e_field"] = s.E_field;
        d["j_field"] = s.J_field;
        d["residual"] = s.residual;
        return d;
      },
      py::arg("collection"), py::arg("l1"), py::arg("l2"), py::arg("e"));

  mod.def(
      "y_operator",
      [](const Z2Collection& c, Complex l1, Complex l2) {
        auto [y, next] = derive_y(c);
        return y_operator(y, moduli(l1, l2)).matrix;
      },
      py::arg("collection"), py::arg("l1"), py::arg("l2"));

  mod.def(
      "hierarchy_json",
      [](const Z2Collection& c, int depth) {
        const RecursionHierarchy h = build_hierarchy(c, depth, c.tol);
        const SpectralStructure s = spectral_precompute(c);
        return hierarchy_to_json(h, &s).dump();
      },
      py::arg("collection"), py::arg("depth") = 8,
      "recursion hierarchy ledger as a JSON string");

  py::class_<SpectralStructure>(mod, "Spectral")
      .def_readonly("eigenvalues", &SpectralStructure::eigenvalues)
      .def_property_readonly("couplings",
                             [](const SpectralStructure& s) { return s.couplings; });
  mod.def("spectral_precompute", &spectral_precompute);
  mod.def(
      "effective_spectral",
      [](const SpectralStructure& s, Complex l1, Complex l2) {
        return effective_spectral(s, moduli(l1, l2)).matrix;
      },
      py::arg("spectral"), py::arg("l1"), py::arg("l2"));

  py::class_<GeometryGrid>(mod, "Grid")
      .def_readonly("d", &GeometryGrid::d)
      .def_readonly("dims", &GeometryGrid::dims)
      .def_readonly("phase", &GeometryGrid::phase)
      .def("volume_fraction", &GeometryGrid::volume_fraction);
  mod.def("checkerboard", &checkerboard, py::arg("n"));
  mod.def("laminate", &laminate, py::arg("n_along"), py::arg("n_across"), py::arg("f1"),
          py::arg("axis") = 0);
  mod.def("grid_from_ascii", &grid_from_ascii_string, py::arg("text"));
  mod.def("grid_collection",
          [](const GeometryGrid& g) { return build_grid_collection(g).base; });
  mod.def(
      "effective_conductivity",
      [](const GeometryGrid& g, Complex s1, Complex s2, const std::string& method) {
        return effective_conductivity(g, s1, s2, parse_method(method).first).matrix;
      },
      py::arg("grid"), py::arg("sigma1"), py::arg("sigma2"),
      py::arg("method") = "schur");
  mod.def("degeneracy", [](const GeometryGrid& g) {
    const DegeneracyReport r = degeneracy_report(g);
    py::dict d;
    d["dim_ve"] = r.dim_VE;
    d["dim_vj"] = r.dim_VJ;
    return d;
  });

  mod.def("to_json", [](const Z2Collection& c) { return collection_to_json(c).dump(); });
  mod.def("from_json",
          [](const std::string& text) { return collection_from_json(json::parse(text)); });
}
