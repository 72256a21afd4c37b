#include "dsigma/engine.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace dsigma;

namespace {

// Reports cross the boundary as JSON text; the python wrapper decodes them.
std::pair<int, std::string> run(const ModelSpec& model, const std::string& command,
                                const std::string& sub, int degree, const std::string& algebra,
                                bool assert_orbit, const std::string& emit, int samples,
                                uint64_t seed) {
    RunOptions opt;
    opt.command = command;
    opt.sub = sub;
    opt.degree = degree;
    opt.algebra = algebra;
    opt.assert_orbit = assert_orbit;
    opt.emit = emit;
    opt.samples = samples;
    opt.seed = seed;
    RunResult res = run_command(model, opt);
    if (!res.latex.empty())
        return {res.exit_code, res.latex};
    return {res.exit_code, res.report.dump()};
}

}  // namespace

PYBIND11_MODULE(_dsigma, m) {
    m.doc() = "Exact symbolic engine for gauging sigma models on Dirac structures";

    py::class_<ModelSpec>(m, "Model")
        .def_property_readonly("name", [](const ModelSpec& s) { return s.name; })
        .def_property_readonly("dim", [](const ModelSpec& s) { return s.dim; })
        .def_property_readonly("coords", [](const ModelSpec& s) { return s.coords; })
        .def_property_readonly("degree", [](const ModelSpec& s) { return s.degree; })
        .def("render", &render_model);

    m.def("parse_model", [](const std::string& text) { return parse_model(text); },
          py::arg("text"), "Parse a model description; raises ValueError on syntax errors");
    m.def("run", &run, py::arg("model"), py::arg("command"), py::arg("sub") = "",
          py::arg("degree") = -1, py::arg("algebra") = "g", py::arg("assert_orbit") = false,
          py::arg("emit") = "json", py::arg("samples") = 20, py::arg("seed") = 1,
          "Run a command; returns (exit_code, report_json_or_latex)");

    py::register_exception<ParseError>(m, "ModelParseError", PyExc_ValueError);
}
