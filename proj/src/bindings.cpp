#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "popa/cli.hpp"
#include "popa/json_io.hpp"
#include "popa/special.hpp"
#include "popa/structure.hpp"
#include "popa/tilting.hpp"

namespace py = pybind11;
using popa::Element;
using popa::GsSolution;
using popa::json_io::Json;

namespace {

// Reports cross the boundary as JSON text; the Python package decodes them.
std::string dumped(const Json& j) { return popa::json_io::dump(j); }

Element at(const GsSolution& sol, std::vector<double> coords) { return Element(sol.algebra(), std::move(coords)); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Goldie-Sekhar solutions on commutative Banach algebras";

  static py::exception<popa::Error> error(m, "PopaError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const popa::Error& e) {
      const std::string msg = std::string(popa::to_string(e.code())) + ": " + e.what();
      PyErr_SetString(error.ptr(), msg.c_str());
    }
  });

  py::class_<GsSolution>(m, "Solution")
      .def_static("from_json", [](const std::string& text) {
        return popa::json_io::solution_from_json(popa::json_io::parse(text));
      })
      .def("to_json", [](const GsSolution& s) { return dumped(popa::json_io::to_json(s)); })
      .def_property_readonly("variant", [](const GsSolution& s) { return std::string(s.name()); })
      .def_property_readonly("dim", [](const GsSolution& s) { return s.algebra().dim(); })
      .def("S", [](const GsSolution& s, std::vector<double> x) { return popa::eval_S(s, at(s, std::move(x))).coords(); })
      .def("N", [](const GsSolution& s, std::vector<double> x) {
        return popa::adjustor_N(s, at(s, std::move(x))).coords();
      })
      .def("gamma", [](const GsSolution& s, std::vector<double> u) {
        return popa::gamma(s, at(s, std::move(u))).coords();
      })
      .def("rho", [](const GsSolution& s) { return popa::rho_of(s).coords(); })
      .def("circle", [](const GsSolution& s, std::vector<double> x, std::vector<double> y) {
        return popa::circle_op(s, at(s, std::move(x)), at(s, std::move(y))).coords();
      });

  m.def(
      "verify",
      [](const GsSolution& s, std::size_t n_samples, std::uint64_t seed, double box_radius, unsigned threads) {
        popa::VerifyOptions o;
        o.n_samples = n_samples;
        o.seed = seed;
        o.box_radius = box_radius;
        o.threads = threads;
        py::gil_scoped_release release;
        return dumped(popa::json_io::to_json(popa::verify_gs(s, o)));
      },
      py::arg("solution"), py::arg("n_samples") = 10000, py::arg("seed") = 0, py::arg("box_radius") = 0.4,
      py::arg("threads") = 0);

  m.def("tilt", [](const GsSolution& s, std::vector<double> u) { return popa::tilt_T(s, at(s, std::move(u))).coords(); });
  m.def("invert_tilt",
        [](const GsSolution& s, std::vector<double> v) { return popa::tilt_inverse(s, at(s, std::move(v))).coords(); });
  m.def("lambda_scale", [](const GsSolution& s, std::vector<double> u, double t) {
    return popa::lambda_scale(s, at(s, std::move(u)), t).coords();
  });
  m.def(
      "solve_tilt",
      [](const GsSolution& s, std::vector<double> v, std::size_t max_iter) {
        return dumped(popa::json_io::to_json(popa::tilt_solve_fixed_point(s, at(s, std::move(v)), max_iter)));
      },
      py::arg("solution"), py::arg("v"), py::arg("max_iter") = popa::kDefaultMaxIter);

  m.def("factorize", [](const std::string& sigma) {
    return dumped(popa::json_io::to_json(popa::factorize(popa::json_io::matrix_from_json(popa::json_io::parse(sigma), "sigma"))));
  });
  m.def("kernel_basis", [](const GsSolution& s) {
    std::vector<std::vector<double>> out;
    for (const auto& e : popa::kernel_basis(s)) out.push_back(e.coords());
    return out;
  });

  m.def("st_roots", [](std::size_t n) { return dumped(popa::json_io::to_json(popa::st_roots(n))); }, py::arg("n") = 10);
  m.def("xi", &popa::xi_root);

  m.def("run_cli", [](const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = popa::cli::run(args, out, err);
    return py::make_tuple(code, out.str(), err.str());
  });
}
