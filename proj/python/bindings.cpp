#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "egf/companion.hpp"
#include "egf/errors.hpp"
#include "egf/config.hpp"
#include "egf/flows.hpp"
#include "egf/geometry.hpp"
#include "egf/scenarios.hpp"
#include "egf/solvers.hpp"
#include "egf/symmetric.hpp"

namespace py = pybind11;
using namespace egf;

namespace {

ScalarField make_field(double x_min, double x_max, const std::vector<double>& values,
                       bool periodic) {
    const Grid g = Grid::over(x_min, x_max, values.size(),
                              periodic ? Boundary::Periodic : Boundary::Extrapolate);
    return ScalarField(g, values);
}

std::vector<std::vector<double>> mat_rows(const Mat& m) {
    std::vector<std::vector<double>> rows(m.n(), std::vector<double>(m.n()));
    for (std::size_t i = 0; i < m.n(); ++i)
        for (std::size_t j = 0; j < m.n(); ++j) rows[i][j] = m(i, j);
    return rows;
}

ScalarFlux flux_from_poly(const std::vector<double>& coeffs) {
    if (coeffs.empty()) throw InvalidInput("flux polynomial needs coefficients");
    ScalarFlux flux;
    flux.psi = [coeffs](double l) {
        double acc = 0.0;
        for (std::size_t k = coeffs.size(); k-- > 0;) acc = acc * l + coeffs[k];
        return acc;
    };
    flux.dpsi = [coeffs](double l) {
        double acc = 0.0;
        for (std::size_t k = coeffs.size(); k-- > 1;)
            acc = acc * l + coeffs[k] * static_cast<double>(k);
        return acc;
    };
    return flux;
}

} // namespace

PYBIND11_MODULE(_egflow, m) {
    m.doc() = "Extrinsic geometric flows on codimension-one foliations";

    py::register_exception<InvalidInput>(m, "InvalidInputError", PyExc_ValueError);
    py::register_exception<NotHyperbolicError>(m, "NotHyperbolicError", PyExc_RuntimeError);
    py::register_exception<BlowupError>(m, "BlowupError", PyExc_RuntimeError);
    py::register_exception<NumericalError>(m, "NumericalSolveError", PyExc_RuntimeError);

    // symmetric-function algebra
    m.def("sigma_from_tau", &sigma_from_tau, py::arg("tau"));
    m.def("tau_from_sigma", &tau_from_sigma, py::arg("sigma"), py::arg("count"));
    m.def(
        "profile_from_roots",
        [](const std::vector<double>& roots, std::size_t extend_to) {
            const auto p = profile_from_roots(roots, extend_to);
            return py::make_tuple(p.tau, p.sigma);
        },
        py::arg("roots"), py::arg("extend_to"));
    m.def("beta_coefficient", &beta_coefficient, py::arg("n"), py::arg("m"), py::arg("i"),
          py::arg("sigma"));
    m.def("dtau_decomposition", &dtau_decomposition, py::arg("n"), py::arg("m"),
          py::arg("sigma"));

    // companion matrices
    m.def(
        "closure_matrix",
        [](const std::vector<double>& sigma, unsigned power) {
            return mat_rows(b_nm(sigma, power));
        },
        py::arg("sigma"), py::arg("power") = 1,
        "B-family matrix ((power+1)/2) * B^power as nested lists");
    m.def(
        "closure_eigensystem",
        [](const std::vector<double>& roots, unsigned power) {
            py::list out;
            for (const auto& pair : b_family_eigensystem(roots, power))
                out.append(py::make_tuple(pair.value, pair.vector, pair.residual));
            return out;
        },
        py::arg("roots"), py::arg("power") = 1);

    // flow analysis
    m.def(
        "analyze_flow",
        [](const std::string& flow, std::size_t n, const std::vector<double>& tau) {
            const auto family = parse_flow(flow, n);
            const auto sys = assemble_type_b(family, tau, 0.0);
            const auto cls = classify_hyperbolicity(sys);
            py::dict out;
            out["classification"] = to_string(cls.kind);
            out["eigenvalues"] = cls.eigenvalues;
            out["matrix"] = mat_rows(sys.matrix());
            return out;
        },
        py::arg("flow"), py::arg("n"), py::arg("tau"));
    m.def(
        "ricci_discriminant_n3",
        [](double s1, double s2, double s3) {
            const auto r = ricci_discriminant_n3(s1, s2, s3);
            return py::make_tuple(r.d, to_string(r.classification.kind));
        },
        py::arg("sigma1"), py::arg("sigma2"), py::arg("sigma3"));
    m.def(
        "umbilical_psi",
        [](const std::string& flow, std::size_t n, double lam) {
            return umbilical_psi(parse_flow(flow, n), lam, 0.0);
        },
        py::arg("flow"), py::arg("n"), py::arg("lam"));

    // solvers along an N-curve
    m.def(
        "solve_transport",
        [](double x_min, double x_max, const std::vector<double>& values, bool periodic,
           double speed, double t) {
            return solve_transport(speed, make_field(x_min, x_max, values, periodic), t)
                .values();
        },
        py::arg("x_min"), py::arg("x_max"), py::arg("values"), py::arg("periodic"),
        py::arg("speed"), py::arg("t"));
    m.def(
        "solve_conservation_law",
        [](const std::vector<double>& psi_poly, double x_min, double x_max,
           const std::vector<double>& values, bool periodic, double t, int orientation) {
            return solve_conservation_law(flux_from_poly(psi_poly),
                                          make_field(x_min, x_max, values, periodic), t,
                                          orientation)
                .values();
        },
        py::arg("psi_poly"), py::arg("x_min"), py::arg("x_max"), py::arg("values"),
        py::arg("periodic"), py::arg("t"), py::arg("orientation") = 1,
        "Implicit pre-blow-up solution; psi_poly lists polynomial coefficients, "
        "low order first");
    m.def(
        "blowup_time_conservation",
        [](const std::vector<double>& psi_poly, double x_min, double x_max,
           const std::vector<double>& values, bool periodic, int orientation) {
            return blowup_time_conservation(flux_from_poly(psi_poly),
                                            make_field(x_min, x_max, values, periodic),
                                            orientation);
        },
        py::arg("psi_poly"), py::arg("x_min"), py::arg("x_max"), py::arg("values"),
        py::arg("periodic"), py::arg("orientation") = 1);
    m.def(
        "ricci_umbilical_blowup_time",
        [](double x_min, double x_max, const std::vector<double>& values, bool periodic,
           std::size_t n, int orientation) {
            return ricci_umbilical_blowup_time(make_field(x_min, x_max, values, periodic),
                                               n, orientation);
        },
        py::arg("x_min"), py::arg("x_max"), py::arg("values"), py::arg("periodic"),
        py::arg("n"), py::arg("orientation") = 1);

    // curvature of surface metrics
    m.def(
        "gauss_curvature_rotational",
        [](double x_min, double x_max, const std::vector<double>& phi, bool periodic) {
            return gauss_curvature_rotational(
                       RotationalMetric{make_field(x_min, x_max, phi, periodic)})
                .values();
        },
        py::arg("x_min"), py::arg("x_max"), py::arg("phi"), py::arg("periodic") = false);
    m.def(
        "gauss_curvature_efg",
        [](double x_min, double x_max, const std::vector<double>& e,
           const std::vector<double>& f, const std::vector<double>& g, bool periodic) {
            SurfaceMetric metric;
            metric.e = make_field(x_min, x_max, e, periodic);
            metric.f = make_field(x_min, x_max, f, periodic);
            metric.g = make_field(x_min, x_max, g, periodic);
            return gauss_curvature_efg(metric).values();
        },
        py::arg("x_min"), py::arg("x_max"), py::arg("e"), py::arg("f"), py::arg("g"),
        py::arg("periodic") = false);

    // scenario runner; returns the run report as a JSON string
    m.def(
        "run_scenario_json",
        [](const std::string& name, const std::string& out_dir, std::size_t cells,
           double x_min, double x_max, double t_end, std::size_t t_samples,
           int orientation) {
            ScenarioConfig cfg;
            cfg.name = name;
            cfg.out_dir = out_dir;
            if (cells) {
                cfg.cells = cells;
                cfg.x_min = x_min;
                cfg.x_max = x_max;
            }
            cfg.t_end = t_end;
            cfg.t_samples = t_samples;
            cfg.orientation = orientation;
            return run_scenario(cfg).to_json_string();
        },
        py::arg("name"), py::arg("out_dir") = "", py::arg("cells") = 0,
        py::arg("x_min") = 0.0, py::arg("x_max") = 0.0, py::arg("t_end") = -1.0,
        py::arg("t_samples") = 0, py::arg("orientation") = 0);
    m.def("scenario_names", &scenario_names);
}
