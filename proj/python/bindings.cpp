#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cbs/acceptance.hpp"
#include "cbs/assembler.hpp"
#include "cbs/config.hpp"
#include "cbs/io.hpp"
#include "cbs/observables.hpp"

namespace py = pybind11;
using namespace cbs;

namespace {

ModelParams make_params(const std::string& Jg, double Omega, double delta, const std::string& mode, double rel_tol,
                        int threads) {
    RunConfig c;
    c.Jg = Jg;
    c.mode = mode;
    c.Omega = Omega;
    c.delta = delta;
    c.rel_tol = rel_tol;
    c.threads = threads;
    validate(c);
    return model_params(c);
}

py::dict totals_dict(const SpectrumResult& r) {
    py::dict d;
    d["L_el"] = r.L_el;
    d["C_el"] = r.C_el;
    d["L_in"] = r.L_in;
    d["C_in"] = r.C_in;
    d["alpha"] = r.alpha;
    d["quad_evals"] = r.diag.evals;
    d["quad_unconverged"] = r.diag.unconverged;
    return d;
}

}  // namespace

PYBIND11_MODULE(_cbs, m) {
    m.doc() = "Double-scattering CBS spectra for Jg -> Jg+1 atoms";
    m.attr("__version__") = version();

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

    m.def(
        "clebsch_gordan",
        [](const std::string& j1, const std::string& m1, const std::string& j2, const std::string& m2,
           const std::string& J, const std::string& M) {
            return clebsch_gordan(HalfInt::parse(j1), HalfInt::parse(m1), HalfInt::parse(j2), HalfInt::parse(m2),
                                  HalfInt::parse(J), HalfInt::parse(M));
        },
        py::arg("j1"), py::arg("m1"), py::arg("j2"), py::arg("m2"), py::arg("J"), py::arg("M"));
    m.def(
        "configuration_average",
        [](int r, int q, int qp, int rp) { return configuration_average(r, q, qp, rp); }, py::arg("r"), py::arg("q"),
        py::arg("qprime"), py::arg("rprime"));
    m.def("saturation", &saturation, py::arg("Omega"), py::arg("delta"));
    m.def(
        "elastic_intensity_analytic",
        [](const std::string& Jg, double delta, double s) { return elastic_intensity_analytic(HalfInt::parse(Jg), delta, s); },
        py::arg("Jg"), py::arg("delta"), py::arg("s"));
    m.def(
        "dressed_resonances",
        [](const std::string& Jg, double Omega, double delta) {
            const auto d = dressed_resonances(HalfInt::parse(Jg), Omega, delta);
            return std::vector<double>(d.nu.begin(), d.nu.end());
        },
        py::arg("Jg"), py::arg("Omega"), py::arg("delta"));
    m.def(
        "steady_state",
        [](const std::string& Jg, double Omega, double delta, const std::string& mode) {
            const ModelParams p = make_params(Jg, Omega, delta, mode, 1e-6, 1);
            const auto sys = make_system(p.Jg, p.mode, Omega, delta);
            return CMatrix(sys->basis.density(sys->Q0));
        },
        py::arg("Jg"), py::arg("Omega"), py::arg("delta") = 0.0, py::arg("mode") = "auto");

    py::class_<CBSModel>(m, "Model")
        .def(py::init([](const std::string& Jg, double Omega, double delta, const std::string& mode, double rel_tol,
                         int threads) {
                 return std::make_unique<CBSModel>(make_params(Jg, Omega, delta, mode, rel_tol, threads));
             }),
             py::arg("Jg"), py::arg("Omega"), py::arg("delta") = 0.0, py::arg("mode") = "auto",
             py::arg("rel_tol") = 1e-6, py::arg("threads") = 1)
        .def_property_readonly("dimension", [](const CBSModel& s) { return s.system().dimension(); })
        .def("ladder_elastic", &CBSModel::ladder_elastic)
        .def("crossed_elastic", &CBSModel::crossed_elastic)
        .def(
            "ladder_inelastic", [](const CBSModel& s, double nu) { return s.ladder_inelastic(nu); }, py::arg("nu"),
            py::call_guard<py::gil_scoped_release>())
        .def(
            "crossed_inelastic", [](const CBSModel& s, double nu) { return s.crossed_inelastic(nu); }, py::arg("nu"),
            py::call_guard<py::gil_scoped_release>())
        .def(
            "totals",
            [](const CBSModel& s) {
                SpectrumResult r;
                {
                    py::gil_scoped_release release;
                    r = assemble_totals(s);
                }
                return totals_dict(r);
            })
        .def(
            "spectrum",
            [](const CBSModel& s, const std::vector<double>& grid, bool with_crossed) {
                SpectrumResult r;
                {
                    py::gil_scoped_release release;
                    r = assemble_spectra(s, grid, with_crossed);
                }
                py::dict d = totals_dict(r);
                d["nu"] = r.grid;
                d["ladder_inelastic"] = r.ladder_in;
                d["crossed_inelastic"] = r.crossed_in;
                return d;
            },
            py::arg("grid"), py::arg("with_crossed") = true);

    m.def(
        "run_criterion",
        [](const std::string& id) {
            CriterionResult r;
            {
                py::gil_scoped_release release;
                r = run_criterion(id, AcceptanceOptions{});
            }
            py::dict d;
            d["id"] = r.id;
            d["passed"] = r.passed;
            d["measured"] = r.measured;
            d["detail"] = r.detail;
            d["seconds"] = r.seconds;
            return d;
        },
        py::arg("id"));
    m.def("acceptance_ids", &acceptance_ids);
}
