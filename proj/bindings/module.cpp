#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "ndep/cli.hpp"
#include "ndep/moore.hpp"
#include "ndep/shatter.hpp"
#include "ndep/valo.hpp"

namespace py = pybind11;
using namespace ndep;
using algebra::FieldPtr;
using algebra::GaloisField;
using algebra::GFElem;
using algebra::PExp;
using algebra::TruncatedSeries;

namespace {

py::object to_py(const ser::Json& j) {
  switch (j.type()) {
    case ser::Json::value_t::null:
      return py::none();
    case ser::Json::value_t::boolean:
      return py::bool_(j.get<bool>());
    case ser::Json::value_t::number_integer:
      return py::int_(j.get<long long>());
    case ser::Json::value_t::number_unsigned:
      return py::int_(j.get<unsigned long long>());
    case ser::Json::value_t::number_float:
      return py::float_(j.get<double>());
    case ser::Json::value_t::string:
      return py::str(j.get<std::string>());
    case ser::Json::value_t::array: {
      py::list out;
      for (const auto& e : j) out.append(to_py(e));
      return out;
    }
    case ser::Json::value_t::object: {
      py::dict out;
      for (const auto& [k, v] : j.items()) out[py::str(k)] = to_py(v);
      return out;
    }
    default:
      return py::none();
  }
}

std::string elem_repr(const GFElem& x) {
  std::ostringstream o;
  o << "GF(" << x.field()->size() << "):" << x.index();
  return o.str();
}

/* FieldPtr is shared_ptr-to-const, which pybind11 cannot use as a holder. */
struct PyField {
  FieldPtr f;
};

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "exact Artin-Schreier, valuation, shattering, and hypergraph kernels";

  py::register_exception<Error>(m, "EngineError");

  py::class_<PyField>(m, "Field")
      .def_property_readonly("p", [](const PyField& f) { return f.f->p(); })
      .def_property_readonly("k", [](const PyField& f) { return f.f->k(); })
      .def_property_readonly("size", [](const PyField& f) { return f.f->size(); })
      .def_property_readonly("modulus", [](const PyField& f) { return f.f->modulus(); })
      .def("element", [](const PyField& f, uint64_t i) { return f.f->from_int(i); })
      .def("zero", [](const PyField& f) { return f.f->zero(); })
      .def("one", [](const PyField& f) { return f.f->one(); })
      .def("gen", [](const PyField& f) { return f.f->gen(); })
      .def("__repr__", [](const PyField& f) {
        return "Field(p=" + std::to_string(f.f->p()) + ", k=" + std::to_string(f.f->k()) + ")";
      });
  m.def(
      "field", [](int p, int k) { return PyField{GaloisField::make(p, k)}; }, py::arg("p"),
      py::arg("k") = 1);

  py::class_<GFElem>(m, "Elem")
      .def_property_readonly("index", &GFElem::index)
      .def_property_readonly("coeffs", &GFElem::coeffs)
      .def("frobenius", &GFElem::frobenius, py::arg("i") = 1)
      .def("inverse", &GFElem::inverse)
      .def("is_zero", &GFElem::is_zero)
      .def(py::self + py::self)
      .def(py::self - py::self)
      .def(py::self * py::self)
      .def(-py::self)
      .def(py::self == py::self)
      .def(py::self != py::self)
      .def("__repr__", &elem_repr);

  m.def("wp", [](const GFElem& x) { return algebra::wp(x); },
        "Artin-Schreier map x^p - x");
  m.def("moore_det", &moore::moore_det<GFElem>);
  m.def("is_fp_independent", &moore::is_fp_independent<GFElem>);
  m.def("artin_schreier_roots",
        [](const GFElem& a) { return moore::artin_schreier_roots(a); },
        "all roots of x^p - x = a, empty when a is outside the image");
  m.def("build_iso", [](const std::vector<GFElem>& a) {
    return to_py(ser::iso_to_json(moore::build_iso(a)));
  });

  py::class_<TruncatedSeries>(m, "Series")
      .def_property_readonly("precision",
                             [](const TruncatedSeries& s) { return s.precision().str(); })
      .def_property_readonly("valuation",
                             [](const TruncatedSeries& s) -> py::object {
                               auto v = s.valuation();
                               if (!v.has_value()) return py::none();
                               return py::str(v->str());
                             })
      .def_property_readonly("terms",
                             [](const TruncatedSeries& s) {
                               py::list out;
                               for (const auto& t : s.terms())
                                 out.append(py::make_tuple(t.exp.str(), t.coeff.index()));
                               return out;
                             })
      .def(py::self + py::self)
      .def(py::self - py::self)
      .def(py::self * py::self)
      .def("__repr__", [](const TruncatedSeries& s) { return s.str(); });

  m.def(
      "series",
      [](const std::string& text, int p, int k, int cap) {
        auto f = GaloisField::make(p, k);
        return cli::parse_series_literal(text, f, cap, std::nullopt);
      },
      py::arg("text"), py::arg("p"), py::arg("k") = 1, py::arg("cap") = 6,
      "parse a series literal like 't + t^(3/2)' over F_{p^k}");
  m.def("series_wp", [](const TruncatedSeries& s) { return wp(s); });

  m.def("alpha_vals", [](const std::vector<TruncatedSeries>& a) {
    auto rep = valo::verify_alpha_vals(a);
    py::dict out;
    auto strs = [](const std::vector<PExp>& v) {
      py::list l;
      for (const auto& e : v) l.append(e.str());
      return l;
    };
    out["a_vals"] = strs(rep.a_vals);
    out["direct"] = strs(rep.direct);
    out["closed_form"] = strs(rep.closed_form);
    out["match"] = rep.match;
    out["passed"] = rep.passed();
    return out;
  });

  m.def(
      "ramsey",
      [](int l, int m_, int n, long long budget) {
        auto res = shatter::ramsey_partite(l, m_, n, budget);
        py::dict out;
        out["R"] = res.R;
        out["bad_coloring"] = res.bad_coloring;
        return out;
      },
      py::arg("l"), py::arg("m"), py::arg("n"),
      py::arg("budget") = shatter::kDefaultRamseyBudget);

  m.def(
      "run",
      [](const std::vector<std::string>& args) {
        std::vector<std::string> argv = args;
        argv.insert(argv.begin(), "ndep");
        std::ostringstream out, err;
        int code = cli::dispatch(argv, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      "invoke the CLI in-process: run(['valo','alpha','--p','2','--a','t,t^3'])");
}
