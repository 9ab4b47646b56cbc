#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "momrep/condensate.hpp"
#include "momrep/config.hpp"
#include "momrep/core.hpp"
#include "momrep/fluid.hpp"

namespace py = pybind11;

namespace {

momrep::Vec3 to_vec3(const std::array<double, 3>& p) {
    return momrep::Vec3(p[0], p[1], p[2]);
}

std::array<double, 3> from_vec3(const momrep::Vec3& v) {
    return {v.x(), v.y(), v.z()};
}

} // namespace

PYBIND11_MODULE(_momrep, m) {
    m.doc() = "equilibrium momentum distributions: C++ core bindings";

    py::class_<momrep::PhysicalParams>(m, "PhysicalParams")
        .def_readonly("hbar", &momrep::PhysicalParams::hbar)
        .def_readonly("mass", &momrep::PhysicalParams::mass)
        .def_readonly("tau", &momrep::PhysicalParams::tau)
        .def_readonly("density", &momrep::PhysicalParams::density)
        .def_readonly("volume", &momrep::PhysicalParams::volume)
        .def_readonly("n_particles", &momrep::PhysicalParams::n_particles)
        .def("__repr__", [](const momrep::PhysicalParams& p) {
            return "PhysicalParams(tau=" + std::to_string(p.tau) +
                   ", N=" + std::to_string(p.n_particles) +
                   ", V=" + std::to_string(p.volume) + ")";
        });

    m.def(
        "make_params",
        [](double tau, std::int64_t n_particles, double volume, const std::string& statistics,
           double hbar, double mass) {
            return momrep::make_params(tau, n_particles, volume,
                                       statistics == "fermi" ? momrep::Statistics::fermi
                                                             : momrep::Statistics::bose,
                                       hbar, mass);
        },
        py::arg("tau"), py::arg("n_particles"), py::arg("volume"),
        py::arg("statistics") = "bose", py::arg("hbar") = 1.0, py::arg("mass") = 1.0,
        "Bundle of physical constants shared by every computation.");

    m.def(
        "rho1_momentum_fluid",
        [](const std::array<double, 3>& p, const momrep::PhysicalParams& params, int dim) {
            return momrep::fluid::rho1_momentum_fluid_dim(to_vec3(p), params, dim);
        },
        py::arg("p"), py::arg("params"), py::arg("dim") = 3,
        "Single-particle momentum distribution of the uniform fluid "
        "(gaussian, normalized to N).");

    m.def("normalization_constant_fluid",
          &momrep::fluid::normalization_constant_fluid_closed_form, py::arg("params"),
          "Closed-form normalization constant of the uniform fluid.");

    m.def("fermi_energy", &momrep::fluid::fermi_energy_spinless, py::arg("params"),
          "Fermi energy of the spinless ideal gas at the given density.");

    m.def("tau_ideal_fermi_zero_temp", &momrep::fluid::tau_ideal_fermi_zero_temp,
          py::arg("params"),
          "Degeneracy temperature-scale parameter of the zero-temperature ideal Fermi gas.");

    m.def(
        "condensate_peaks",
        [](double n_condensate, const std::array<double, 3>& p0) {
            momrep::condensate::CondensateSpec spec;
            spec.n_condensate = n_condensate;
            spec.p0 = to_vec3(p0);
            const momrep::DeltaPeakMeasure measure =
                momrep::condensate::condensate_fluid_distribution(spec);
            std::vector<std::pair<double, std::array<double, 3>>> out;
            for (const momrep::DeltaPeak& peak : measure.peaks()) {
                out.emplace_back(peak.weight, from_vec3(peak.location));
            }
            return out;
        },
        py::arg("n_condensate"), py::arg("p0") = std::array<double, 3>{0.0, 0.0, 0.0},
        "Exact (weight, momentum) peak list of a uniform condensate.");

    m.def("config_digest", &momrep::config::fnv1a_digest, py::arg("text"),
          "Stable 16-hex-digit digest of a config document, as embedded in exports.");
}
