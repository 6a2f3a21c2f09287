// Python bindings for the main operations.
#include "pinlab/coarse_grain.hpp"
#include "pinlab/continuum.hpp"
#include "pinlab/dickman.hpp"
#include "pinlab/disorder.hpp"
#include "pinlab/hit_table.hpp"
#include "pinlab/kernel_table.hpp"
#include "pinlab/partition.hpp"
#include "pinlab/she.hpp"
#include "pinlab/steplaw.hpp"

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace pinlab;

PYBIND11_MODULE(_pinlab, m) {
    m.doc() = "Numerics for marginally relevant disordered pinning models";

    // ---- walks ----
    py::class_<walks::StepLaw>(m, "StepLaw")
        .def_property_readonly("name", [](const walks::StepLaw& l) { return l.name; })
        .def("max_step", &walks::StepLaw::max_step)
        .def("prob", &walks::StepLaw::prob);
    m.def("step_law", &walks::law_by_name, py::arg("name") = "default");
    py::class_<walks::MomentReport>(m, "MomentReport")
        .def_readonly("mean", &walks::MomentReport::mean)
        .def_readonly("variance", &walks::MomentReport::variance)
        .def_readonly("third", &walks::MomentReport::third)
        .def_readonly("fourth", &walks::MomentReport::fourth)
        .def_readonly("period", &walks::MomentReport::period)
        .def_readonly("accepted", &walks::MomentReport::accepted)
        .def_readonly("violation", &walks::MomentReport::violation);
    m.def("validate_step_law", &walks::validate_step_law);
    py::class_<walks::KernelTable>(m, "KernelTable")
        .def_readonly("n_max", &walks::KernelTable::n_max)
        .def_readonly("p0", &walks::KernelTable::p0)
        .def_readonly("K", &walks::KernelTable::K)
        .def_readonly("u", &walks::KernelTable::u)
        .def_readonly("R", &walks::KernelTable::R);
    m.def("build_kernel_table", &walks::build_kernel_table, py::arg("law"),
          py::arg("n_max"));
    m.def("build_return_table", &walks::build_return_table, py::arg("law"),
          py::arg("n_max"));
    m.def(
        "hit_probabilities",
        [](const walks::StepLaw& law, int x, std::int64_t n_max) {
            auto t = walks::build_hit_table(law, x, x, n_max);
            return t.q[0];
        },
        py::arg("law"), py::arg("x"), py::arg("n_max"));

    // ---- continuum kernels ----
    m.def("heat_kernel", &cont::heat_kernel);
    m.def("bm_first_hit", &cont::bm_first_hit);
    m.def("bm_no_hit", &cont::bm_no_hit);
    py::class_<cont::TestFn>(m, "TestFn")
        .def_readonly("lo", &cont::TestFn::lo)
        .def_readonly("hi", &cont::TestFn::hi)
        .def_readonly("name", &cont::TestFn::name)
        .def("__call__", [](const cont::TestFn& f, double x) { return f(x); });
    m.def("test_fn", &cont::test_fn);
    m.def("pairing", &cont::pair_phi_psi, py::arg("phi"), py::arg("psi"),
          py::arg("t") = 1.0, py::arg("tol") = 1e-9);
    m.def("sE", &cont::sE, py::arg("phi"), py::arg("psi"), py::arg("tol") = 1e-7);
    m.def(
        "project_onto_hitting_basis",
        [](const std::function<double(double)>& f, int K) {
            auto p = cont::project_onto_hitting_basis(f, K);
            return py::make_tuple(p.coeffs, p.sup_error, p.cond_estimate);
        },
        py::arg("f"), py::arg("K"));

    // ---- disorder ----
    py::class_<disorder::DisorderLaw>(m, "DisorderLaw")
        .def("log_mgf", &disorder::DisorderLaw::log_mgf);
    m.def("disorder_law", &disorder::disorder_by_name, py::arg("name") = "gaussian");
    py::class_<disorder::CriticalWindow>(m, "CriticalWindow")
        .def_readonly("N", &disorder::CriticalWindow::N)
        .def_readonly("vartheta", &disorder::CriticalWindow::vartheta)
        .def_readonly("R_N", &disorder::CriticalWindow::R_N)
        .def_readonly("sigma2", &disorder::CriticalWindow::sigma2)
        .def_readonly("beta", &disorder::CriticalWindow::beta)
        .def_readonly("lambda_N", &disorder::CriticalWindow::lambda_N)
        .def_readonly("residual", &disorder::CriticalWindow::residual);
    m.def("solve_critical_beta", &disorder::solve_critical_beta, py::arg("law"),
          py::arg("N"), py::arg("vartheta"), py::arg("R_N"));
    py::class_<disorder::ChaosField>(m, "ChaosField")
        .def_readonly("zeta", &disorder::ChaosField::zeta)
        .def_readonly("lo", &disorder::ChaosField::lo)
        .def_readonly("beta", &disorder::ChaosField::beta)
        .def_readonly("seed", &disorder::ChaosField::seed);
    m.def("zeta_field", &disorder::zeta_field, py::arg("law"), py::arg("beta"),
          py::arg("lo"), py::arg("hi"), py::arg("seed"), py::arg("stream") = 0);

    // ---- partition ----
    py::class_<partition::PolymerKernels>(m, "PolymerKernels")
        .def_readonly("N", &partition::PolymerKernels::N)
        .def_readonly("a", &partition::PolymerKernels::a)
        .def_readonly("b", &partition::PolymerKernels::b)
        .def_readonly("c", &partition::PolymerKernels::c);
    m.def("build_polymer_kernels", &partition::build_polymer_kernels);
    m.def(
        "pin_partition",
        [](const std::vector<double>& zeta, double h, std::int64_t M, std::int64_t K,
           const walks::KernelTable& kt) {
            return partition::pin_partition(zeta, h, M, K, kt);
        },
        py::arg("zeta"), py::arg("h"), py::arg("M"), py::arg("K"), py::arg("kernels"));
    m.def("chaos_eval", &partition::chaos_eval, py::arg("field"), py::arg("N"),
          py::arg("kernels"), py::arg("use_fft") = true);
    m.def("polymer_integral", &partition::polymer_integral, py::arg("field"),
          py::arg("kernels"), py::arg("table"), py::arg("use_fft") = true);
    m.def("decomposition_identity_gap", &partition::decomposition_identity_gap);
    m.def("exact_second_moment", &partition::exact_second_moment);
    m.def(
        "v1_theta",
        [](const cont::TestFn& phi, const cont::TestFn& psi, double vartheta) {
            dickman::GTheta g(vartheta, 1.0);
            return partition::v1_theta(phi, psi, g);
        },
        py::arg("phi"), py::arg("psi"), py::arg("vartheta"));

    // ---- dickman ----
    m.def("dickman_density", &dickman::dickman_density, py::arg("s"), py::arg("t"),
          py::arg("t_max") = 4.0);
    m.def(
        "dickman_cdf",
        [](double s, double t, double t_max) {
            dickman::DickmanDensity d(s, std::max(t_max, t));
            return d.cdf(t);
        },
        py::arg("s"), py::arg("t"), py::arg("t_max") = 4.0);
    m.def(
        "g_theta",
        [](double vartheta, double t) {
            dickman::GTheta g(vartheta, std::max(4.0, t));
            return g.value(t);
        },
        py::arg("vartheta"), py::arg("t"));
    py::class_<dickman::UbarTable>(m, "UbarTable")
        .def_readonly("N", &dickman::UbarTable::N)
        .def_readonly("sigma2", &dickman::UbarTable::sigma2)
        .def_readonly("vals", &dickman::UbarTable::vals);
    m.def("build_ubar", &dickman::build_ubar, py::arg("N"), py::arg("sigma2"),
          py::arg("kernels"), py::arg("use_fft") = true);

    // ---- coarse graining ----
    py::class_<cg::MesoGrid>(m, "MesoGrid")
        .def_readonly("N", &cg::MesoGrid::N)
        .def_readonly("eps", &cg::MesoGrid::eps)
        .def_readonly("M", &cg::MesoGrid::M)
        .def_readonly("L", &cg::MesoGrid::L)
        .def_readonly("K_eps", &cg::MesoGrid::K_eps)
        .def_readonly("r_max", &cg::MesoGrid::r_max);
    m.def("make_meso_grid", &cg::make_meso_grid, py::arg("N"), py::arg("eps"),
          py::arg("K_eps") = -1, py::arg("r_max") = -1);
    m.def("enumerate_no_triple", &cg::enumerate_no_triple);
    m.def("theta", &cg::theta, py::arg("field"), py::arg("grid"), py::arg("block"),
          py::arg("kernels"), py::arg("use_fft") = true);

    // ---- she ----
    py::class_<she::Mollifier>(m, "Mollifier")
        .def(py::init<>())
        .def("rho", &she::Mollifier::rho)
        .def("rho2", &she::Mollifier::rho2);
    m.def("r_of_t", &she::r_of_t, py::arg("rho"), py::arg("t"), py::arg("tol") = 1e-11);
    m.def("vartheta_from_theta", &she::vartheta_from_theta);
    py::class_<she::ContinuumWindow>(m, "ContinuumWindow")
        .def_readonly("beta2", &she::ContinuumWindow::beta2)
        .def_readonly("vartheta", &she::ContinuumWindow::vartheta)
        .def_readonly("R", &she::ContinuumWindow::R)
        .def_readonly("residual", &she::ContinuumWindow::residual);
    m.def("make_continuum_window", &she::make_continuum_window);

#ifdef VERSION_INFO
    m.attr("__version__") = VERSION_INFO;
#else
    m.attr("__version__") = "dev";
#endif
}
