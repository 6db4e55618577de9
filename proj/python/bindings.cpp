#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <bit>

#include "bipara/error.hpp"
#include "bipara/functionals.hpp"
#include "bipara/haar.hpp"
#include "bipara/io.hpp"
#include "bipara/opnorm.hpp"
#include "bipara/paraproducts.hpp"
#include "bipara/sparse.hpp"

namespace py = pybind11;
using namespace bipara;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

int log2_exact(py::ssize_t n, const char* what) {
  if (n < 2 || !std::has_single_bit(static_cast<std::size_t>(n))) {
    throw Error(std::string(what) + " length must be a power of two >= 2", "values");
  }
  return std::countr_zero(static_cast<std::size_t>(n));
}

// A 1D array is a Signal1D; a 2D array indexed [x, y] is a Signal2D.
AnySignal to_signal(const Array& a) {
  const double* p = a.data();
  if (a.ndim() == 1) {
    const Grid1D g(log2_exact(a.shape(0), "axis"));
    return Signal1D(g, std::vector<double>(p, p + a.size()));
  }
  if (a.ndim() == 2) {
    const Grid2D g(log2_exact(a.shape(0), "axis 0"), log2_exact(a.shape(1), "axis 1"));
    return Signal2D(g, std::vector<double>(p, p + a.size()));
  }
  throw Error("signals must be 1D or 2D arrays", "values");
}

Array to_array(const AnySignal& s) {
  return std::visit(
      [](const auto& f) -> Array {
        using T = std::decay_t<decltype(f)>;
        Array out;
        if constexpr (std::is_same_v<T, Signal1D>) {
          out = Array(static_cast<py::ssize_t>(f.size()));
        } else {
          out = Array({static_cast<py::ssize_t>(f.grid().cells_x()), static_cast<py::ssize_t>(f.grid().cells_y())});
        }
        std::copy(f.values().begin(), f.values().end(), out.mutable_data());
        return out;
      },
      s);
}

// JSON documents cross the boundary as Python objects via their text form.
py::object to_python(const io::json& j) { return py::module_::import("json").attr("loads")(j.dump()); }
io::json from_python(const py::object& o) {
  return io::json::parse(py::module_::import("json").attr("dumps")(o).cast<std::string>());
}

NamedOperator make_operator(const std::string& op, const Array& g) {
  return NamedOperator(parse_operator(op), to_signal(g));
}

}  // namespace

PYBIND11_MODULE(_bipara, m) {
  m.doc() = "Dyadic Haar calculus, paraproducts and operator-norm estimates.";

  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      PyErr_SetString(PyExc_ValueError, (e.field().empty() ? std::string(e.what()) : e.field() + ": " + e.what()).c_str());
    }
  });

  m.def(
      "haar_forward",
      [](const Array& f) {
        const AnySignal s = to_signal(f);
        if (const auto* f1 = std::get_if<Signal1D>(&s)) return to_python(io::coeffs_to_json(haar_forward_1d(*f1)));
        return to_python(io::coeffs_to_json(haar_forward_2d(std::get<Signal2D>(s))));
      },
      py::arg("values"), "Haar coefficients as a coefficient document (dict).");

  m.def(
      "haar_inverse",
      [](const py::object& doc) {
        const auto c = io::coeffs_from_json(from_python(doc));
        if (const auto* c1 = std::get_if<HaarCoeffs1D>(&c)) return to_array(AnySignal(haar_inverse_1d(*c1)));
        return to_array(AnySignal(haar_inverse_2d(std::get<HaarCoeffs2D>(c))));
      },
      py::arg("coeffs"));

  m.def(
      "apply",
      [](const std::string& op, const Array& g, const Array& f) { return to_array(make_operator(op, g).apply(to_signal(f))); },
      py::arg("op"), py::arg("g"), py::arg("f"), "Apply pi1|pi1t|pi2|pi3|pi4|pig|pigp|pigpp with symbol g to f.");

  m.def(
      "norm",
      [](const Array& f, const std::string& kind, double p) {
        const NormKind k = NormKind::parse(kind, p);
        k.validate();
        return norm(to_signal(f), k);
      },
      py::arg("f"), py::arg("kind") = "hp-square", py::arg("p") = 2.0);

  m.def(
      "opnorm_l2",
      [](const std::string& op, const Array& g, std::uint64_t seed) {
        PowerOptions o;
        o.seed = seed;
        return to_python(io::report_to_json(opnorm_l2(make_operator(op, g), o)));
      },
      py::arg("op"), py::arg("g"), py::arg("seed") = 1);

  m.def(
      "opnorm_search",
      [](const std::string& op, const Array& g, const std::string& in_kind, double in_p, const std::string& out_kind,
         double out_p, int restarts, int iterations, std::uint64_t seed) {
        SearchBudget b;
        b.restarts = restarts;
        b.iterations = iterations;
        b.seed = seed;
        return to_python(io::report_to_json(
            opnorm_search(make_operator(op, g), NormKind::parse(in_kind, in_p), NormKind::parse(out_kind, out_p), b)));
      },
      py::arg("op"), py::arg("g"), py::arg("in_kind") = "hp-square", py::arg("in_p") = 2.0,
      py::arg("out_kind") = "hp-square", py::arg("out_p") = 2.0, py::arg("restarts") = 16, py::arg("iterations") = 500,
      py::arg("seed") = 1);

  m.def(
      "pi4_matrix_bound", [](const Array& g) {
        return pi4_matrix_bound(haar_forward_2d(std::get<Signal2D>(to_signal(g)))).value;
      },
      py::arg("g"));

  m.def(
      "construct",
      [](const std::string& example, int n, int resolution) {
        if (example == "hadamard") return to_array(AnySignal(haar_inverse_2d(build_hadamard_example(n, resolution))));
        if (example == "identity") return to_array(AnySignal(haar_inverse_2d(build_identity_example(n, resolution))));
        throw Error("example must be hadamard or identity", "example");
      },
      py::arg("example"), py::arg("n"), py::arg("resolution") = 0, "Example symbol as a signal array.");

  m.def(
      "sparse_extract",
      [](const py::object& family) { return to_python(io::sparse_to_json(sparse_extract(io::family_from_json(from_python(family))))); },
      py::arg("family"), "Greedy half-sparse extraction of a family document.");

  m.def(
      "carleson_constant",
      [](const py::object& family, bool exact) {
        return carleson_constant(io::family_from_json(from_python(family)), exact ? CarlesonMode::Exact : CarlesonMode::Restricted)
            .value;
      },
      py::arg("family"), py::arg("exact") = true);
}
