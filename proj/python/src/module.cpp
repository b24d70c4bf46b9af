#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gcot/io.hpp"

namespace py = pybind11;
using namespace gcot;

namespace {

DiscreteDensity density_arg(const std::string& text) { return density_from_json(json::parse(text)); }

std::string lp_json(const std::string& density, const std::string& cost, int nmax, bool exact) {
    auto rho = density_arg(density);
    auto c = pairwise_family(parse_kernel(cost), rho);
    LPOptions o;
    o.exact = exact;
    return dump(to_json(solve_lp(rho, nmax, c, o)));
}

std::string diamond_json(double t) {
    return dump(to_json(solve_half_filling(HalfFillInstance(diamond_geometry(t), coulomb()))));
}

std::string multiscale_json(int k, const std::vector<double>& scales) {
    return dump(to_json(multiscale_support(diamond_geometry(0.7), k, scales, coulomb())));
}

std::string monge_json(const std::vector<double>& breakpoints, const std::vector<double>& densities,
                       const std::string& kernel) {
    auto plan = build_monge_plan(GridDensity1D(breakpoints, densities));
    auto j = to_json(plan);
    auto c = monge_cost(plan, parse_kernel(kernel));
    j["cost"] = c.value;
    j["quadrature_error"] = c.error;
    return dump(j);
}

std::string bound_json(const std::string& theorem, double mass, double a, double b) {
    if (theorem == "bounded") return dump(to_json(bound_bounded(mass, a, b)));
    if (theorem == "triangle") return dump(to_json(bound_triangle(mass, a)));
    if (theorem == "coulomb") return dump(to_json(bound_coulomb(mass)));
    throw Error(ErrorKind::Usage, "unknown theorem '" + theorem + "'");
}

std::string entropic_json(const std::string& density, const std::string& cost, int nmax, double T, double tol) {
    auto rho = density_arg(density);
    auto c = pairwise_family(parse_kernel(cost), rho);
    EntropicOptions o;
    o.tol = tol;
    return dump(to_json(solve_entropic(rho, nmax, c, T, o)));
}

std::string kind_name(ErrorKind k) {
    switch (k) {
        case ErrorKind::Usage: return "usage";
        case ErrorKind::Infeasible: return "infeasible";
        case ErrorKind::SizeCap: return "size-cap";
        case ErrorKind::NonConvergence: return "non-convergence";
    }
    return "error";
}

}  // namespace

PYBIND11_MODULE(_gcot, m) {
    m.doc() = "grand-canonical optimal transport solvers (JSON in, JSON out)";
    static py::exception<Error> err(m, "GcotError");
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            PyErr_SetString(err.ptr(), (kind_name(e.kind()) + ": " + e.what()).c_str());
        }
    });
    m.attr("schema") = kSchema;
    m.def("solve_lp", &lp_json, py::arg("density"), py::arg("cost") = "coulomb", py::arg("nmax"),
          py::arg("exact") = false);
    m.def("diamond", &diamond_json, py::arg("t") = 0.7);
    m.def("multiscale", &multiscale_json, py::arg("k"), py::arg("scales"));
    m.def("monge1d", &monge_json, py::arg("breakpoints"), py::arg("densities"), py::arg("kernel") = "inv");
    m.def("bound", &bound_json, py::arg("theorem"), py::arg("mass"), py::arg("a") = 1.0, py::arg("b") = 1.0);
    m.def("entropic", &entropic_json, py::arg("density"), py::arg("cost") = "coulomb", py::arg("nmax"),
          py::arg("temp"), py::arg("tol") = 1e-8);
}
