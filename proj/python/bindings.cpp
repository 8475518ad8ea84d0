#include <algorithm>

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "erps/dynamics.hpp"
#include "erps/ensemble.hpp"
#include "erps/error.hpp"
#include "erps/estimation.hpp"
#include "erps/measurement.hpp"
#include "erps/polar.hpp"
#include "erps/state_spec.hpp"
#include "erps/superposition.hpp"
#include "erps/xi_model.hpp"

namespace py = pybind11;
using namespace erps;

namespace {

template <class T>
py::array_t<T> to_array(const T* data, std::size_t n) {
    py::array_t<T> out(static_cast<py::ssize_t>(n));
    std::copy(data, data + n, out.mutable_data());
    return out;
}

template <class T>
py::array_t<T> to_array(const std::vector<T>& v) {
    return to_array(v.data(), v.size());
}

py::array_t<bool> mask_array(const std::vector<bool>& mask) {
    py::array_t<bool> out(static_cast<py::ssize_t>(mask.size()));
    auto m = out.mutable_unchecked<1>();
    for (std::size_t i = 0; i < mask.size(); ++i) m(static_cast<py::ssize_t>(i)) = mask[i];
    return out;
}

WaveFunction wave_from_array(const Grid1D& grid, py::array_t<cplx, py::array::c_style | py::array::forcecast> amp,
                             double hbar) {
    if (amp.ndim() != 1) throw py::value_error("amplitudes must be one-dimensional");
    std::vector<cplx> v(amp.data(), amp.data() + amp.size());
    return WaveFunction(grid, std::move(v), hbar);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Core numerics of erpslab";

    auto base = py::register_exception<Error>(m, "ErpsError", PyExc_RuntimeError);
    auto pre = py::register_exception<PreconditionError>(m, "PreconditionError", base.ptr());
    py::register_exception<BoundarySupportError>(m, "BoundarySupportError", pre.ptr());
    py::register_exception<NodeQueryError>(m, "NodeQueryError", base.ptr());
    py::register_exception<NumericalError>(m, "NumericalError", base.ptr());
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());

    py::enum_<Boundary>(m, "Boundary").value("periodic", Boundary::periodic).value("truncated", Boundary::truncated);

    py::class_<Grid1D>(m, "Grid1D")
        .def(py::init<std::size_t, double, double, Boundary>(), py::arg("n_points"), py::arg("spacing"),
             py::arg("origin"), py::arg("boundary") = Boundary::periodic)
        .def_static("centered", &Grid1D::centered, py::arg("n_points"), py::arg("length"),
                    py::arg("boundary") = Boundary::periodic)
        .def_static("periodic_for_momentum", &Grid1D::periodic_for_momentum, py::arg("p0"), py::arg("hbar"),
                    py::arg("n_periods"), py::arg("n_points"), py::arg("nodes_between_points") = false)
        .def_property_readonly("size", &Grid1D::size)
        .def_property_readonly("spacing", &Grid1D::spacing)
        .def_property_readonly("origin", &Grid1D::origin)
        .def_property_readonly("extent", &Grid1D::extent)
        .def_property_readonly("boundary", &Grid1D::boundary)
        .def("coordinates", [](const Grid1D& g) { return to_array(g.coordinates()); });

    py::class_<GaussianSpec>(m, "GaussianSpec")
        .def(py::init<double, double, double>(), py::arg("q0"), py::arg("sigma"), py::arg("p0"))
        .def_readwrite("q0", &GaussianSpec::q0)
        .def_readwrite("sigma", &GaussianSpec::sigma)
        .def_readwrite("p0", &GaussianSpec::p0);

    py::class_<StateSpec>(m, "StateSpec")
        .def_static("plane_wave", &StateSpec::plane_wave, py::arg("p0"))
        .def_static("gaussian", &StateSpec::gaussian, py::arg("q0"), py::arg("sigma"), py::arg("p0") = 0.0)
        .def_static("cosine", &StateSpec::cosine, py::arg("p0"))
        .def_static("superposition", &StateSpec::superposition, py::arg("first"), py::arg("second"),
                    py::arg("w1") = cplx{1.0}, py::arg("w2") = cplx{1.0})
        .def("__repr__", [](const StateSpec& s) { return "StateSpec(" + describe(s) + ")"; });

    py::class_<WaveFunction>(m, "WaveFunction")
        .def(py::init(&wave_from_array), py::arg("grid"), py::arg("amplitudes"), py::arg("hbar") = 1.0)
        .def_property_readonly("grid", &WaveFunction::grid)
        .def_property_readonly("hbar", &WaveFunction::hbar)
        .def("amplitudes",
             [](const WaveFunction& w) {
                 const auto a = w.amplitudes();
                 return to_array(a.data(), a.size());
             })
        .def("density", [](const WaveFunction& w) { return to_array(w.density()); })
        .def("norm", &WaveFunction::norm);

    m.def("build_state", &build_state, py::arg("spec"), py::arg("grid"), py::arg("hbar") = 1.0);

    py::class_<PolarFields>(m, "PolarFields")
        .def_readonly("grid", &PolarFields::grid)
        .def_readonly("hbar", &PolarFields::hbar)
        .def_readonly("rho_floor", &PolarFields::rho_floor)
        .def_property_readonly("rho", [](const PolarFields& f) { return to_array(f.rho); })
        .def_property_readonly("s_action", [](const PolarFields& f) { return to_array(f.s_action); })
        .def_property_readonly("grad_s", [](const PolarFields& f) { return to_array(f.grad_s); })
        .def_property_readonly("grad_log_rho", [](const PolarFields& f) { return to_array(f.grad_log_rho); })
        .def_property_readonly("node_mask", [](const PolarFields& f) { return mask_array(f.node_mask); });

    m.def("polar_decompose", [](const WaveFunction& psi) { return polar_decompose(psi); }, py::arg("psi"));

    py::class_<XiModel>(m, "XiModel")
        .def_static("two_point", &XiModel::two_point, py::arg("hbar") = 1.0)
        .def_static("gaussian", &XiModel::gaussian, py::arg("hbar") = 1.0)
        .def_static("custom_discrete", &XiModel::custom_discrete, py::arg("atoms"), py::arg("weights"),
                    py::arg("hbar") = 1.0);

    m.def("momentum_field", &momentum_field, py::arg("fields"), py::arg("xi"), py::arg("q"));
    m.def("ms_error_p", &ms_error_p, py::arg("fields"));
    m.def("fisher_q", &fisher_q, py::arg("fields"));
    m.def(
        "variance_decomposition",
        [](const WaveFunction& psi) {
            const auto d = variance_decomposition(psi, polar_decompose(psi));
            return py::dict(py::arg("ms_error_p") = d.ms_error_p, py::arg("dispersion_p") = d.dispersion_p,
                            py::arg("var_p") = d.var_p);
        },
        py::arg("psi"));
    m.def(
        "uncertainty_suite",
        [](const WaveFunction& psi) {
            const auto u = uncertainty_suite(psi, polar_decompose(psi));
            return py::dict(py::arg("ms_error_p") = u.ms_error_p, py::arg("ms_error_q") = u.ms_error_q,
                            py::arg("var_p") = u.var_p, py::arg("var_q") = u.var_q,
                            py::arg("product_pq") = u.product_pq, py::arg("hk_product") = u.hk_product,
                            py::arg("grid_limited") = u.grid_limited, py::arg("tradeoff_holds") = u.tradeoff_holds,
                            py::arg("kennard_holds") = u.kennard_holds);
        },
        py::arg("psi"));
    m.def(
        "weak_value", [](const WaveFunction& psi, double q) { return weak_value(psi, polar_decompose(psi), q); },
        py::arg("psi"), py::arg("q"));

    m.def(
        "sample_ensemble",
        [](const WaveFunction& psi, const XiModel& xi, std::size_t n, std::uint64_t seed, unsigned workers) {
            const auto ens = sample_ensemble(polar_decompose(psi), xi, n, seed, workers);
            return py::make_tuple(to_array(ens.q), to_array(ens.p), to_array(ens.xi));
        },
        py::arg("psi"), py::arg("xi_model"), py::arg("n"), py::arg("seed"), py::arg("workers") = 1,
        "Returns (q, p, xi) arrays drawn from the restricted phase-space ensemble.");

    py::class_<HamiltonianSpec>(m, "HamiltonianSpec")
        .def_static("free", &HamiltonianSpec::free, py::arg("mass") = 1.0)
        .def_static("harmonic", &HamiltonianSpec::harmonic, py::arg("grid"), py::arg("mass"), py::arg("omega"),
                    py::arg("center") = 0.0);
    m.def("propagate", &propagate, py::arg("psi"), py::arg("hamiltonian"), py::arg("dt"), py::arg("n_steps"));
    m.def("average_energy", &average_energy, py::arg("psi"), py::arg("hamiltonian"));

    m.def(
        "classical_limit_scan",
        [](const StateSpec& spec, const Grid1D& grid, const std::vector<double>& hbars) {
            const auto r = classical_limit_scan(spec, grid, hbars);
            return py::dict(py::arg("status") = std::string(to_string(r.status)), py::arg("ratios") = r.ratios,
                            py::arg("slope") = r.slope);
        },
        py::arg("spec"), py::arg("grid"), py::arg("hbar_values"));

    m.def(
        "superposition_ms_error",
        [](const StateSpec& spec, const Grid1D& grid, double hbar) {
            const auto* sp = std::get_if<SuperpositionSpec>(&spec.kind);
            if (!sp) throw py::value_error("spec must be a superposition");
            const auto r = overlap_analysis(*sp, grid, hbar);
            return py::dict(py::arg("total") = r.ms_error_total, py::arg("branch_1") = r.ms_error_branch_1,
                            py::arg("branch_2") = r.ms_error_branch_2, py::arg("additivity_gap") = r.ms_additivity_gap,
                            py::arg("overlap_points") = r.overlap_set.size());
        },
        py::arg("spec"), py::arg("grid"), py::arg("hbar") = 1.0);

    m.def(
        "born_frequencies",
        [](double weight_plus, std::size_t n_runs, std::uint64_t seed) {
            const auto spec = StateSpec::superposition(StateSpec::plane_wave(1.0), StateSpec::plane_wave(-1.0),
                                                       std::sqrt(weight_plus), std::sqrt(1.0 - weight_plus));
            const auto b = born_statistics(spec, MeasurementConfig{}, n_runs, seed);
            return py::dict(py::arg("freq_plus") = b.freq_plus, py::arg("expected_plus") = b.expected_plus,
                            py::arg("z_score") = b.z_score);
        },
        py::arg("weight_plus"), py::arg("n_runs"), py::arg("seed"),
        "Pointer measurement of sqrt(w)|+1> + sqrt(1-w)|-1> with the default measurement setup.");

    m.def(
        "prep_independence_tv",
        [](const GaussianSpec& a, const GaussianSpec& b, double q_a, double q_b, bool global_xi, double hbar) {
            const auto r = preparation_independence_diagnostic(
                a, b, XiModel::two_point(hbar), global_xi ? XiCorrelation::global_xi : XiCorrelation::separable_xi,
                q_a, q_b);
            return py::make_tuple(r.tv_distance, r.degenerate);
        },
        py::arg("state_a"), py::arg("state_b"), py::arg("q_a"), py::arg("q_b"), py::arg("global_xi") = true,
        py::arg("hbar") = 1.0);
}
