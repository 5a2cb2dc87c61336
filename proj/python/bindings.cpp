#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hk/bessel.hpp"
#include "hk/branch_io.hpp"
#include "hk/contour.hpp"
#include "hk/dispersion.hpp"
#include "hk/errors.hpp"
#include "hk/greens.hpp"

namespace py = pybind11;
using namespace hk;

namespace {

dispersion::Branch parse_branch(const std::string& b) {
    if (b == "+") return dispersion::Branch::Plus;
    if (b == "-") return dispersion::Branch::Minus;
    throw InvalidArgument("branch must be '+' or '-'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Helical Kelvin waves: Bessel kernels, dispersion relations and contour continuation";

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
    py::register_exception<RangeError>(m, "RangeError", base.ptr());
    py::register_exception<AccuracyError>(m, "AccuracyError", base.ptr());
    py::register_exception<DegenerateSpectrum>(m, "DegenerateSpectrum", base.ptr());
    py::register_exception<GeometryError>(m, "GeometryError", base.ptr());
    py::register_exception<StepSizeError>(m, "StepSizeError", PyExc_ValueError);
    py::register_exception<ContinuationError>(m, "ContinuationError", base.ptr());

    m.def("bessel_i", [](int n, double z) { return bessel::bessel_i(n, z).to_double(); });
    m.def("bessel_k", [](int n, double z) { return bessel::bessel_k(n, z).to_double(); });
    m.def("bessel_i_prime", [](int n, double z) { return bessel::bessel_i_prime(n, z).to_double(); });
    m.def("bessel_k_prime", [](int n, double z) { return bessel::bessel_k_prime(n, z).to_double(); });
    m.def("log_bessel_i", [](int n, double z) { return bessel::bessel_i(n, z).log_mag(); });
    m.def("log_bessel_k", [](int n, double z) { return bessel::bessel_k(n, z).log_mag(); });
    m.def("product_iprime_kprime", &bessel::product_iprime_kprime, py::arg("n"), py::arg("z"),
          "I_n'(n z) K_n'(n z)");

    m.def("green_mode", [](int k, double rho, double rho0, double h) {
        return greens::green_mode(k, rho, rho0, HelicalDomain(h));
    }, py::arg("m"), py::arg("rho"), py::arg("rho0"), py::arg("h"));
    m.def("stream_disk", [](double rho, double a, double h) { return greens::stream_disk(rho, a, HelicalDomain(h)); },
          py::arg("rho"), py::arg("a"), py::arg("h"));
    m.def("stream_disk_dr",
          [](double rho, double a, double h) { return greens::stream_disk_dr(rho, a, HelicalDomain(h)); },
          py::arg("rho"), py::arg("a"), py::arg("h"));

    m.def("omega_simply", [](int n, double a, double h) { return dispersion::omega_simply(n, DiskConfig(a, HelicalDomain(h))); },
          py::arg("n"), py::arg("a"), py::arg("h"));
    m.def("omega_doubly", [](int n, double a1, double a2, double h) {
        const auto r = dispersion::omega_doubly(n, AnnulusConfig(a1, a2, HelicalDomain(h)));
        return py::make_tuple(r.plus, r.minus);
    }, py::arg("n"), py::arg("a1"), py::arg("a2"), py::arg("h"), "(Omega^+, Omega^-)");
    m.def("discriminant", [](int n, double a1, double a2, double h) {
        return dispersion::discriminant(n, AnnulusConfig(a1, a2, HelicalDomain(h)));
    }, py::arg("n"), py::arg("a1"), py::arg("a2"), py::arg("h"));
    m.def("upsilon", [](double a, double b, double h) { return dispersion::upsilon(a, b, HelicalDomain(h)); },
          py::arg("a"), py::arg("b"), py::arg("h"));
    m.def("gamma", [](int n, double a, double b, double h) { return dispersion::gamma(n, a, b, HelicalDomain(h)); },
          py::arg("n"), py::arg("a"), py::arg("b"), py::arg("h"));
    m.def("kernel_vector", [](int n, double a1, double a2, double h, const std::string& branch) {
        return dispersion::kernel_vector(n, AnnulusConfig(a1, a2, HelicalDomain(h)), parse_branch(branch));
    }, py::arg("n"), py::arg("a1"), py::arg("a2"), py::arg("h"), py::arg("branch"));
    m.def("f_z", &dispersion::f_z, py::arg("nu"), py::arg("z"));
    m.def("scan_monotonicity", [](const std::vector<double>& z_grid, int nu_min, int nu_max) {
        const auto r = dispersion::scan_monotonicity(z_grid, nu_min, nu_max);
        py::dict d;
        d["min_f"] = r.min_f;
        d["min_f_per_z"] = r.min_f_per_z;
        d["min_product_gap"] = r.min_product_gap;
        d["violations"] = r.violations.size();
        d["product_violations"] = r.product_violations.size();
        return d;
    }, py::arg("z_grid"), py::arg("nu_min"), py::arg("nu_max"));
    m.def("log_grid", &dispersion::log_grid, py::arg("lo"), py::arg("hi"), py::arg("points"));

    py::class_<Contour>(m, "Contour")
        .def(py::init([](double a, int m_fold, std::vector<double> coeffs) {
                 Contour c;
                 c.base_radius = a;
                 c.m_fold = m_fold;
                 c.cos_coeffs = std::move(coeffs);
                 c.validate();
                 return c;
             }),
             py::arg("base_radius"), py::arg("m_fold"), py::arg("cos_coeffs"))
        .def_static("circle", &Contour::circle, py::arg("a"), py::arg("m_fold"), py::arg("n_modes"))
        .def_readwrite("base_radius", &Contour::base_radius)
        .def_readwrite("m_fold", &Contour::m_fold)
        .def_readwrite("cos_coeffs", &Contour::cos_coeffs)
        .def("radius", &Contour::radius, py::arg("theta"));

    py::class_<Discretization>(m, "Discretization")
        .def(py::init<>())
        .def_readwrite("n_modes", &Discretization::n_modes)
        .def_readwrite("n_theta", &Discretization::n_theta)
        .def_readwrite("n_rho", &Discretization::n_rho)
        .def_readwrite("k_max", &Discretization::k_max)
        .def_readwrite("tol", &Discretization::tol)
        .def_readwrite("newton_tol", &Discretization::newton_tol)
        .def_readwrite("newton_max_iter", &Discretization::newton_max_iter)
        .def("refined", &Discretization::refined);

    py::class_<BranchPoint>(m, "BranchPoint")
        .def_readonly("s", &BranchPoint::s)
        .def_readonly("omega", &BranchPoint::omega)
        .def_readonly("contours", &BranchPoint::contours)
        .def_readonly("residual", &BranchPoint::residual)
        .def_readonly("k_max_used", &BranchPoint::k_max_used)
        .def_readonly("newton_history", &BranchPoint::newton_history)
        .def("to_json", [](const BranchPoint& p) { return io::to_json(p).dump(); });

    m.def("eval_f", [](double omega, const Contour& c, double h, const Discretization& d) {
        return contour::eval_f(omega, c, HelicalDomain(h), d).sin_coeffs;
    }, py::arg("omega"), py::arg("contour"), py::arg("h"), py::arg("disc") = Discretization{});
    m.def("eval_f_doubly", [](double omega, const Contour& outer, const Contour& inner, double h, const Discretization& d) {
        const auto r = contour::eval_f_doubly(omega, outer, inner, HelicalDomain(h), d);
        return py::make_tuple(r.first.sin_coeffs, r.second.sin_coeffs);
    }, py::arg("omega"), py::arg("outer"), py::arg("inner"), py::arg("h"), py::arg("disc") = Discretization{});
    m.def("bifurcate_simply", [](double a, double h, int m_fold, const std::vector<double>& s, const Discretization& d) {
        py::gil_scoped_release release;
        return contour::bifurcate_simply(DiskConfig(a, HelicalDomain(h)), m_fold, s, d);
    }, py::arg("a"), py::arg("h"), py::arg("m"), py::arg("s"), py::arg("disc") = Discretization{});
    m.def("bifurcate_doubly", [](double a1, double a2, double h, int m_fold, const std::string& branch,
                                 const std::vector<double>& s, const Discretization& d) {
        const auto br = parse_branch(branch);
        py::gil_scoped_release release;
        return contour::bifurcate_doubly(AnnulusConfig(a1, a2, HelicalDomain(h)), m_fold, br, s, d);
    }, py::arg("a1"), py::arg("a2"), py::arg("h"), py::arg("m"), py::arg("branch"), py::arg("s"),
       py::arg("disc") = Discretization{});
    m.def("boundary_residual", [](const BranchPoint& p, double h, const Discretization& d) {
        return contour::boundary_residual(p, HelicalDomain(h), d);
    }, py::arg("point"), py::arg("h"), py::arg("disc"));
}
