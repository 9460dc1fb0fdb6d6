#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rodbif/cardan.hpp"
#include "rodbif/io.hpp"

namespace py = pybind11;
using namespace rodbif;

namespace {

// Paths cross the boundary as (N+1, 3) numpy arrays, nodes along rows.
Eigen::MatrixXd path_to_array(const CardanPath& p) { return p.values.transpose(); }

CardanPath array_to_path(const Eigen::MatrixXd& a) {
    if (a.cols() != 3) throw ValidationError("path array must have shape (N+1, 3)");
    return CardanPath(a.transpose());
}

py::dict report_to_dict(const SolveReport& r) {
    py::dict d;
    d["converged"] = r.converged;
    d["iterations"] = r.iterations;
    d["final_gradient_norm"] = r.final_gradient_norm;
    d["classification"] = std::string(to_string(r.classification));
    d["mu_min"] = r.mu_min;
    return d;
}

}  // namespace

PYBIND11_MODULE(_rodbif, m) {
    m.doc() = "Kirchhoff rod with intrinsic curvature: critical force, kernel mode, "
              "pitchfork branch continuation, stability classification";

    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<ChartError>(m, "ChartError", PyExc_ValueError);
    py::register_exception<AssumptionError>(m, "AssumptionError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);

    py::class_<ElasticConstants>(m, "ElasticConstants")
        .def(py::init<double, double, double, double, double>(), py::arg("c12"),
             py::arg("c13"), py::arg("c23"), py::arg("k"), py::arg("L"))
        .def_readonly("c12", &ElasticConstants::c12)
        .def_readonly("c13", &ElasticConstants::c13)
        .def_readonly("c23", &ElasticConstants::c23)
        .def_readonly("k", &ElasticConstants::k)
        .def_readonly("L", &ElasticConstants::L)
        .def("ass0_holds", &ElasticConstants::ass0_holds)
        .def("__repr__", [](const ElasticConstants& c) {
            return "ElasticConstants(c12=" + fmt17(c.c12) + ", c13=" + fmt17(c.c13) +
                   ", c23=" + fmt17(c.c23) + ", k=" + fmt17(c.k) + ", L=" + fmt17(c.L) + ")";
        });

    m.def("cardan_to_rotation", &cardan_to_rotation, py::arg("phi"),
          "Chart map from a Cardan angle triple to a rotation matrix.");
    m.def("rotation_to_cardan", &rotation_to_cardan, py::arg("R"),
          "Chart inverse near the identity.");
    m.def(
        "angular_strain",
        [](const Eigen::Vector3d& u, const Eigen::Vector3d& xi) {
            const AngularStrain s = angular_strain(u, xi);
            return py::make_tuple(s.a12, s.a13, s.a23);
        },
        py::arg("u"), py::arg("xi"), "Strain components (a12, a13, a23).");

    m.def(
        "energy_cardan",
        [](const Eigen::MatrixXd& path, double f, const ElasticConstants& c) {
            return energy_cardan(array_to_path(path), f, c);
        },
        py::arg("path"), py::arg("f"), py::arg("consts"));
    m.def(
        "gradient",
        [](const Eigen::MatrixXd& path, double f, const ElasticConstants& c) {
            return gradient(array_to_path(path), f, c);
        },
        py::arg("path"), py::arg("f"), py::arg("consts"),
        "First variation w.r.t. interior nodal angles, flattened node-major.");
    m.def(
        "hessian",
        [](const Eigen::MatrixXd& path, double f, const ElasticConstants& c) {
            return Eigen::MatrixXd(hessian(array_to_path(path), f, c));
        },
        py::arg("path"), py::arg("f"), py::arg("consts"));
    m.def(
        "centerline",
        [](const Eigen::MatrixXd& path, const ElasticConstants& c) {
            return Eigen::MatrixXd(centerline(array_to_path(path), c).transpose());
        },
        py::arg("path"), py::arg("consts"), "Centerline points, shape (N+1, 3).");

    m.def("critical_force", &critical_force, py::arg("consts"));
    m.def("critical_force_numeric", &critical_force_numeric, py::arg("consts"),
          py::arg("n_elems"), py::arg("bracket_lo"), py::arg("bracket_hi"));
    m.def(
        "kernel_mode",
        [](const ElasticConstants& c, int n) { return path_to_array(kernel_mode(c, n)); },
        py::arg("consts"), py::arg("n_elems"));
    m.def(
        "coefficients_closed",
        [](const ElasticConstants& c) {
            const Coefficients co = coefficients_closed(c);
            return py::make_tuple(co.a, co.b, co.c);
        },
        py::arg("consts"), "Closed-form (a, b, c) as printed in the model.");
    m.def(
        "coefficients_numeric",
        [](const ElasticConstants& c, int n, double step) {
            const Coefficients co = coefficients_numeric(c, n, step);
            return py::make_tuple(co.a, co.b, co.c);
        },
        py::arg("consts"), py::arg("n_elems") = 256, py::arg("fd_step") = 1e-3);

    m.def(
        "constrained_spectrum",
        [](const Eigen::MatrixXd& path, double f, const ElasticConstants& c, int n_eigs) {
            const SpectralResult r = constrained_spectrum(array_to_path(path), f, c, n_eigs);
            return py::make_tuple(r.eigenvalues, r.modes);
        },
        py::arg("path"), py::arg("f"), py::arg("consts"), py::arg("n_eigs") = 6);

    m.def(
        "continue_branch",
        [](const ElasticConstants& c, int n, const std::vector<double>& s_values) {
            py::list out;
            for (const auto& p : continue_branch(c, n, s_values)) {
                py::dict d;
                d["s"] = p.s;
                d["f"] = p.f;
                d["path"] = path_to_array(p.path);
                d["mu_min"] = p.mu_min;
                d["energy_gap"] = p.energy_gap;
                out.append(d);
            }
            return out;
        },
        py::arg("consts"), py::arg("n_elems"), py::arg("s_values"));

    m.def(
        "newton_solve",
        [](const Eigen::MatrixXd& seed, double f, const ElasticConstants& c, double tol) {
            auto [path, report] = newton_solve(array_to_path(seed), f, c, tol);
            return py::make_tuple(path_to_array(path), report_to_dict(report));
        },
        py::arg("seed"), py::arg("f"), py::arg("consts"), py::arg("tol") = 1e-10);
    m.def(
        "minimize",
        [](const Eigen::MatrixXd& seed, double f, const ElasticConstants& c, double tol) {
            auto [path, report] = minimize(array_to_path(seed), f, c, tol);
            return py::make_tuple(path_to_array(path), report_to_dict(report));
        },
        py::arg("seed"), py::arg("f"), py::arg("consts"), py::arg("tol") = 1e-10);

    m.def(
        "count_stationary",
        [](const ElasticConstants& c, double f, double radius, int n_seeds, int n_elems,
           unsigned seed) {
            CountOptions opts;
            opts.n_elems = n_elems;
            opts.rng_seed = seed;
            py::list out;
            for (const auto& p : count_stationary(c, f, radius, n_seeds, opts))
                out.append(path_to_array(p));
            return out;
        },
        py::arg("consts"), py::arg("f"), py::arg("radius") = 0.1, py::arg("n_seeds") = 64,
        py::arg("n_elems") = 256, py::arg("seed") = 42);

    m.def(
        "energy_gap",
        [](const Eigen::MatrixXd& path, double f, const ElasticConstants& c) {
            return energy_gap(array_to_path(path), f, c);
        },
        py::arg("path"), py::arg("f"), py::arg("consts"));
    m.def(
        "sign_changes_third_angle",
        [](const Eigen::MatrixXd& path) {
            return sign_changes_third_angle(array_to_path(path));
        },
        py::arg("path"));
}
