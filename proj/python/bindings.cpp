#include "mqc/validation.hpp"

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace mqc;

namespace {

PolarizationChannel channel_of(const std::string& s) {
    return config_from_json("{\"channels\": [\"" + s + "\"]}").channels.at(0);
}

Direction direction_of(const std::string& s) {
    return config_from_json("{\"directions\": [\"" + s + "\"]}").directions.at(0);
}

TensorMode mode_of(const std::string& s) {
    return config_from_json("{\"tensor_mode\": \"" + s + "\"}").tensor_mode;
}

py::list peaks(const std::vector<PeakEntry>& v) {
    py::list out;
    for (const auto& e : v) {
        py::dict d;
        d["kappa"] = e.kappa;
        d["direction"] = to_string(e.direction);
        d["channel"] = to_string(e.channel);
        d["value"] = e.value;
        out.append(d);
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(_mqc, m) {
    m.doc() = "MQC fluorescence spectra of two dipole-coupled atoms";
    m.attr("__version__") = MQC_VERSION;

    py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
    py::register_exception<PoleError>(m, "PoleError", PyExc_ArithmeticError);
    py::register_exception<NumericError>(m, "NumericError", PyExc_RuntimeError);

    m.def(
        "spectrum",
        [](int kappa, const std::string& direction, const std::string& channel, std::vector<double> detuning,
           double area, double xibar, bool gamma_zero, bool interaction_during_delay) {
            SpectrumRequest r;
            r.kappa = kappa;
            r.channel = {direction_of(direction), channel_of(channel)};
            r.detuning = std::move(detuning);
            r.area = area;
            r.xibar = xibar;
            r.gamma_zero = gamma_zero;
            r.interaction_during_delay = interaction_during_delay;
            py::gil_scoped_release release;
            return spectrum(r).values;
        },
        py::arg("kappa"), py::arg("direction"), py::arg("channel"), py::arg("detuning"),
        py::arg("area") = 0.14 * 3.141592653589793, py::arg("xibar") = 80.0, py::arg("gamma_zero") = false,
        py::arg("interaction_during_delay") = true,
        "configuration-averaged S(omega) in units of f^2/gamma^2; detuning in units of gamma");

    m.def(
        "table1",
        [](double area, double xibar, bool gamma_zero) { return peaks(table1_computed(area, xibar, true, gamma_zero)); },
        py::arg("area"), py::arg("xibar") = 80.0, py::arg("gamma_zero") = false);
    m.def(
        "table1_closed_form", [](double area, double xibar) { return peaks(table1_leading_order(area, xibar)); },
        py::arg("area"), py::arg("xibar") = 80.0);

    m.def(
        "coupling_tensor",
        [](double xi, double theta, double phi, const std::string& mode) {
            return coupling_tensor(Configuration{xi, theta, phi}, mode_of(mode), 1.0).t;
        },
        py::arg("xi"), py::arg("theta") = 0.0, py::arg("phi") = 0.0, py::arg("mode") = "exact");
    m.def("angular_average", &angular_average, py::arg("k"), py::arg("l"), py::arg("m"), py::arg("n"),
          py::arg("scale") = 1.0);

    m.def("mean_scattering_cross_section", &mean_scattering_cross_section, py::arg("lambda0"), py::arg("gamma"),
          py::arg("doppler_rms"));
    m.def("resonant_cross_section", &resonant_cross_section, py::arg("lambda0"));
    m.def("mean_free_path", &mean_free_path, py::arg("density"), py::arg("cross_section"));

    m.def(
        "oracle_compare",
        [](double xi, double theta, double phi, double area, const std::string& channel, std::vector<double> tau) {
            OracleRun run;
            run.configuration = {xi, theta, phi};
            run.area = area;
            run.channel = channel_of(channel);
            run.tau = std::move(tau);
            OracleComparison c;
            {
                py::gil_scoped_release release;
                c = compare_with_oracle(run);
            }
            py::dict d;
            d["tau"] = c.tau;
            d["oracle"] = c.oracle;
            d["analytic"] = c.analytic;
            d["relative_error"] = c.relative_error;
            return d;
        },
        py::arg("xi"), py::arg("theta"), py::arg("phi"), py::arg("area"), py::arg("channel") = "par",
        py::arg("tau") = std::vector<double>{0.5, 1.0, 2.0},
        "time-domain oracle vs analytic demodulated components; arrays indexed [direction][l-1][tau]");

    m.def(
        "monte_carlo_spectrum",
        [](int kappa, const std::string& direction, const std::string& channel, std::vector<double> detuning,
           std::size_t samples, std::uint64_t seed, double area, bool mixed_only) {
            MonteCarloRequest r;
            r.kappa = kappa;
            r.channel = {direction_of(direction), channel_of(channel)};
            r.detuning = std::move(detuning);
            r.samples = samples;
            r.seed = seed;
            r.area = area;
            r.mixed_only = mixed_only;
            MonteCarloResult res;
            {
                py::gil_scoped_release release;
                res = monte_carlo_spectrum(r);
            }
            py::dict d;
            d["mean"] = res.mean.values;
            d["stderr_re"] = res.mean.stderr_re;
            d["stderr_im"] = res.mean.stderr_im;
            return d;
        },
        py::arg("kappa"), py::arg("direction"), py::arg("channel"), py::arg("detuning"), py::arg("samples") = 100,
        py::arg("seed") = 1, py::arg("area") = 0.14 * 3.141592653589793, py::arg("mixed_only") = false);

    m.def(
        "validate",
        [](std::vector<std::string> only, std::size_t mc_samples, std::uint64_t seed) {
            ValidationOptions o;
            o.only = std::move(only);
            o.mc_samples = mc_samples;
            o.seed = seed;
            ValidationReport rep;
            {
                py::gil_scoped_release release;
                rep = run_validation(o);
            }
            py::list out;
            for (const auto& r : rep.results) {
                py::dict d;
                d["id"] = r.id;
                d["name"] = r.name;
                d["passed"] = r.passed;
                d["measured"] = r.measured;
                d["tolerance"] = r.tolerance;
                d["detail"] = r.detail;
                out.append(d);
            }
            return out;
        },
        py::arg("only") = std::vector<std::string>{}, py::arg("mc_samples") = 100000, py::arg("seed") = 1);
}
