#include "mqc/validation.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

using namespace mqc;

namespace {

constexpr int kExitInvalid = 2;
constexpr int kExitNumeric = 3;

std::string read_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw InputError("cannot read config file " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

// command-line values; unset optionals leave the config untouched
struct Flags {
    std::string config_file;
    std::string preset;
    std::optional<double> gamma, lambda0, area, area_pi, energy, duration, waist, xibar, density, mean_distance;
    std::optional<std::vector<std::string>> channels, directions;
    std::optional<std::vector<int>> kappa;
    bool empty_kappa = false;
    std::optional<int> grid_points;
    std::optional<double> half_width;
    std::optional<std::string> tensor_mode;
    std::optional<bool> gamma_zero, inset, interpulse, monte_carlo;
    std::optional<std::size_t> samples, traces;
    std::optional<double> xi_lo, xi_hi;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
};

void add_config_flags(CLI::App* app, Flags& f) {
    app->add_option("--config", f.config_file, "JSON config file; flags override its values");
    app->add_option("--preset", f.preset, "fig4 | table1");
    app->add_option("--gamma", f.gamma, "decay rate in rad/s (dimensional conversions only)");
    app->add_option("--lambda0", f.lambda0, "transition wavelength in m");
    app->add_option("--area", f.area, "pulse area in rad");
    app->add_option("--area-pi", f.area_pi, "pulse area in units of pi");
    app->add_option("--pulse-energy", f.energy, "pulse energy in J");
    app->add_option("--pulse-duration", f.duration, "pulse duration in s");
    app->add_option("--beam-waist", f.waist, "beam waist in m");
    app->add_option("--xibar", f.xibar, "mean scaled distance k0 r");
    app->add_option("--density", f.density, "atom density in m^-3");
    app->add_option("--mean-distance", f.mean_distance, "mean interatomic distance in m");
    app->add_option("--channels", f.channels, "par and/or perp")->delimiter(',');
    app->add_option("--directions", f.directions, "x and/or y")->delimiter(',');
    app->add_option("--kappa", f.kappa, "orders, e.g. 1,2")->delimiter(',');
    app->add_flag("--no-kappa", f.empty_kappa, "empty kappa list (rejected)");
    app->add_option("--grid-points", f.grid_points, "detuning grid points");
    app->add_option("--grid-half-width", f.half_width, "detuning half width in units of gamma");
    app->add_option("--tensor-mode", f.tensor_mode, "exact | far_field | near_field");
    app->add_option("--gamma-zero", f.gamma_zero, "drop collective decay (inset)");
    app->add_option("--inset", f.inset, "emit the gamma -> 0 series as well");
    app->add_option("--interaction-during-delay", f.interpulse, "interaction between the pulses");
    app->add_option("--monte-carlo", f.monte_carlo, "average over sampled configurations instead of analytically");
    app->add_option("--samples", f.samples, "Monte Carlo configurations");
    app->add_option("--traces", f.traces, "per-configuration traces to write");
    app->add_option("--xi-lo", f.xi_lo, "lower end of the distance window");
    app->add_option("--xi-hi", f.xi_hi, "upper end of the distance window");
    app->add_option("--seed", f.seed, "RNG seed");
    app->add_option("--out", f.out, "output directory");
}

RunConfig build_config(const Flags& f) {
    RunConfig c;
    if (!f.preset.empty()) c = preset_config(f.preset);
    if (!f.config_file.empty()) c = config_from_json(read_file(f.config_file), c);
    if (f.gamma) c.gamma_si = *f.gamma;
    if (f.lambda0) c.lambda0 = *f.lambda0;
    if (f.area && f.area_pi) throw InputError("--area and --area-pi are mutually exclusive");
    const bool energy = f.energy || f.duration || f.waist;
    if ((f.area || f.area_pi) && energy) throw InputError("give either the pulse area or energy/duration/waist");
    if (f.area) c.area = *f.area;
    if (f.area_pi) c.area = *f.area_pi * std::numbers::pi;
    if (f.area || f.area_pi) c.pulse_energy = c.pulse_duration = c.beam_waist = std::nullopt;
    if (energy) c.area = std::nullopt;
    if (f.energy) c.pulse_energy = *f.energy;
    if (f.duration) c.pulse_duration = *f.duration;
    if (f.waist) c.beam_waist = *f.waist;
    if (f.xibar && (f.density || f.mean_distance)) throw InputError("give either --xibar or density/mean distance");
    if (f.xibar) {
        c.xibar = *f.xibar;
        c.density = c.mean_distance = std::nullopt;
    }
    if (f.density || f.mean_distance) c.xibar = std::nullopt;
    if (f.density) c.density = *f.density;
    if (f.mean_distance) c.mean_distance = *f.mean_distance;
    auto json_list = [](const std::vector<std::string>& v) {
        nlohmann::json j = v;
        return j;
    };
    if (f.channels) c = config_from_json(nlohmann::json{{"channels", json_list(*f.channels)}}.dump(), c);
    if (f.directions) c = config_from_json(nlohmann::json{{"directions", json_list(*f.directions)}}.dump(), c);
    if (f.kappa) c.kappa = *f.kappa;
    if (f.empty_kappa) c.kappa.clear();
    if (f.grid_points) c.grid_points = *f.grid_points;
    if (f.half_width) c.grid_half_width = *f.half_width;
    if (f.tensor_mode) c = config_from_json(nlohmann::json{{"tensor_mode", *f.tensor_mode}}.dump(), c);
    if (f.gamma_zero) c.gamma_zero = *f.gamma_zero;
    if (f.inset) c.with_gamma_zero_inset = *f.inset;
    if (f.interpulse) c.interaction_during_delay = *f.interpulse;
    if (f.monte_carlo) c.monte_carlo = *f.monte_carlo;
    if (f.samples) c.mc_samples = *f.samples;
    if (f.traces) c.mc_traces = *f.traces;
    if (f.xi_lo) c.xi_lo = *f.xi_lo;
    if (f.xi_hi) c.xi_hi = *f.xi_hi;
    if (f.seed) c.seed = *f.seed;
    if (f.out) c.output_dir = *f.out;
    c.validate();
    return c;
}

void print_files(const RunOutput& o) {
    for (const auto& f : o.files) std::cout << f << "\n";
    std::cout << "sidecar " << o.sidecar << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multiple-quantum-coherence fluorescence spectra of two dipole-coupled atoms"};
    app.set_version_flag("--version", std::string(MQC_VERSION));
    app.require_subcommand(1);

    Flags spec_flags, table_flags, mc_flags;
    auto* spec_cmd = app.add_subcommand("spectrum", "configuration-averaged spectra, one file per series");
    add_config_flags(spec_cmd, spec_flags);

    auto* table_cmd = app.add_subcommand("table1", "peak values: closed forms, computed, fitted coefficients");
    add_config_flags(table_cmd, table_flags);

    auto* mc_cmd = app.add_subcommand("mc-average", "Monte Carlo averaged spectra with standard errors");
    add_config_flags(mc_cmd, mc_flags);

    OracleRun orun;
    std::string ochannel = "par";
    std::string omode = "exact";
    auto* oracle_cmd = app.add_subcommand("oracle-check", "time-domain integration vs the analytic expansion");
    oracle_cmd->add_option("--xi", orun.configuration.xi, "scaled distance k0 r");
    oracle_cmd->add_option("--theta", orun.configuration.theta, "polar angle of the axis");
    oracle_cmd->add_option("--phi", orun.configuration.phi, "azimuth of the axis");
    oracle_cmd->add_option("--area", orun.area, "pulse area in rad");
    oracle_cmd->add_option("--channel", ochannel, "par | perp");
    oracle_cmd->add_option("--tau", orun.tau, "delays in units of 1/gamma")->delimiter(',');
    oracle_cmd->add_option("--phase-samples", orun.phase_samples, "phi21 samples");
    oracle_cmd->add_option("--position-samples", orun.position_samples, "position phase samples per atom");
    oracle_cmd->add_option("--tensor-mode", omode, "exact | far_field | near_field");
    oracle_cmd->add_option("--rtol", orun.rtol, "integrator relative tolerance");

    double lambda0 = 790e-9, gamma_rate = 2.0 * std::numbers::pi * 6.0e6, doppler = 2.0 * std::numbers::pi * 560e6;
    double density = 1e14;
    auto* xs_cmd = app.add_subcommand("cross-section", "Doppler-averaged scattering cross section and mean free path");
    xs_cmd->add_option("--lambda0", lambda0, "wavelength in m");
    xs_cmd->add_option("--gamma", gamma_rate, "decay rate in rad/s");
    xs_cmd->add_option("--doppler", doppler, "rms Doppler shift per component in rad/s");
    xs_cmd->add_option("--density", density, "atom density in m^-3");

    ValidationOptions vopt;
    std::string report_path = "validation_report";
    auto* val_cmd = app.add_subcommand("validate", "run the acceptance suite");
    val_cmd->add_option("--mc-samples", vopt.mc_samples, "Monte Carlo configurations");
    val_cmd->add_option("--oracle-directions", vopt.oracle_directions, "random axes for the oracle comparison");
    val_cmd->add_option("--seed", vopt.seed, "RNG seed");
    val_cmd->add_option("--tolerance-scale", vopt.tolerance_scale, "multiply every tolerance");
    val_cmd->add_option("--only", vopt.only, "criterion groups to run, e.g. 1,3,9")->delimiter(',');
    val_cmd->add_option("--report", report_path, "report path prefix (.txt and .json are written)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitInvalid;
    }

    try {
        if (*spec_cmd) {
            print_files(run_spectrum(build_config(spec_flags)));
        } else if (*table_cmd) {
            Flags f = table_flags;
            if (f.preset.empty() && f.config_file.empty()) f.preset = "table1";
            const RunOutput o = run_table1(build_config(f));
            std::cout << read_file((std::filesystem::path(o.sidecar).parent_path() / "table1.dat").string());
        } else if (*mc_cmd) {
            Flags f = mc_flags;
            f.monte_carlo = true;
            print_files(run_spectrum(build_config(f)));
        } else if (*oracle_cmd) {
            orun.channel = config_from_json(nlohmann::json{{"channels", {ochannel}}}.dump()).channels.at(0);
            orun.tensor_mode = config_from_json(nlohmann::json{{"tensor_mode", omode}}.dump()).tensor_mode;
            if (orun.tau.empty()) orun.tau = {0.5, 1.0, 2.0};
            const OracleComparison c = compare_with_oracle(orun);
            std::cout << "# direction l tau oracle_re oracle_im analytic_re analytic_im\n" << std::setprecision(10);
            for (int d = 0; d < 2; ++d) {
                for (int l = 1; l <= 2; ++l) {
                    for (std::size_t i = 0; i < c.tau.size(); ++i) {
                        const cplx o = c.oracle[d][l - 1][i], a = c.analytic[d][l - 1][i];
                        std::cout << (d == 0 ? "x" : "y") << ' ' << l << ' ' << c.tau[i] << ' ' << o.real() << ' '
                                  << o.imag() << ' ' << a.real() << ' ' << a.imag() << '\n';
                    }
                    std::cout << "# relative error " << (d == 0 ? "x" : "y") << " l=" << l << ": "
                              << c.relative_error[d][l - 1] << '\n';
                }
            }
        } else if (*xs_cmd) {
            const double s = mean_scattering_cross_section(lambda0, gamma_rate, doppler);
            std::cout << std::setprecision(6) << "resonant_cross_section_m2 " << resonant_cross_section(lambda0) << "\n"
                      << "mean_cross_section_m2 " << s << "\n"
                      << "mean_free_path_m " << mean_free_path(density, s) << "\n";
        } else if (*val_cmd) {
            const ValidationReport rep = run_validation(vopt);
            const std::string txt = rep.text();
            std::cout << txt;
            std::ofstream(report_path + ".txt") << txt;
            std::ofstream(report_path + ".json") << rep.json() << "\n";
            return rep.all_passed() ? 0 : 1;
        }
    } catch (const InputError& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const PoleError& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const NumericError& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    }
    return 0;
}
