#include "mqc/run_config.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>

namespace mqc {

using nlohmann::json;

namespace {

PolarizationChannel parse_channel(const std::string& s) {
    if (s == "par" || s == "parallel") return PolarizationChannel::parallel;
    if (s == "perp" || s == "perpendicular") return PolarizationChannel::perpendicular;
    throw InputError("unknown channel '" + s + "' (par|perp)");
}

Direction parse_direction(const std::string& s) {
    if (s == "x") return Direction::x;
    if (s == "y") return Direction::y;
    throw InputError("unknown direction '" + s + "' (x|y)");
}

TensorMode parse_mode(const std::string& s) {
    if (s == "exact") return TensorMode::exact;
    if (s == "far_field" || s == "far-field") return TensorMode::far_field;
    if (s == "near_field" || s == "near-field") return TensorMode::near_field;
    throw InputError("unknown tensor mode '" + s + "'");
}

std::string mode_name(TensorMode m) {
    switch (m) {
    case TensorMode::exact: return "exact";
    case TensorMode::far_field: return "far_field";
    case TensorMode::near_field: return "near_field";
    }
    return "?";
}

bool positive(const std::optional<double>& v) { return !v || (std::isfinite(*v) && *v > 0.0); }

std::string fmt(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

void write_file(const std::filesystem::path& p, const std::string& text) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw InputError("cannot open output file " + p.string());
    f << text;
    if (!f) throw NumericError("write failed for " + p.string());
}

std::string timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::ostringstream os;
    os << std::put_time(std::gmtime(&t), "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

}  // namespace

void RunConfig::validate() const {
    if (!(gamma_si > 0.0) || !std::isfinite(gamma_si)) throw InputError("gamma must be positive");
    if (!(lambda0 > 0.0) || !std::isfinite(lambda0)) throw InputError("lambda0 must be positive");
    const bool energy_spec = pulse_energy || pulse_duration || beam_waist;
    if (area && energy_spec) throw InputError("give either the pulse area or energy/duration/waist, not both");
    if (energy_spec && !(pulse_energy && pulse_duration && beam_waist)) {
        throw InputError("pulse energy, duration and waist must be given together");
    }
    if (!area && !energy_spec) throw InputError("no pulse area given");
    if (area && !(std::isfinite(*area) && *area > 0.0)) throw InputError("pulse area must be positive");
    if (!positive(pulse_energy) || !positive(pulse_duration) || !positive(beam_waist)) {
        throw InputError("pulse energy, duration and waist must be positive");
    }
    if (!positive(xibar) || !positive(density) || !positive(mean_distance)) {
        throw InputError("xibar, density and mean distance must be positive");
    }
    if (xibar && (density || mean_distance)) throw InputError("give either xibar or density/mean distance, not both");
    if (!xibar && !density && !mean_distance) throw InputError("no density parameter given");
    if (density && mean_distance) {
        const double expect = mean_distance_from_density(*density);
        if (std::abs(*mean_distance - expect) > 0.01 * expect) {
            std::ostringstream os;
            os << "mean distance " << *mean_distance << " m inconsistent with density (expected " << expect
               << " m within 1%)";
            throw InputError(os.str());
        }
    }
    if (kappa.empty()) throw InputError("kappa list is empty");
    for (int k : kappa) {
        if (k != 1 && k != 2) throw InputError("kappa must be 1 or 2");
    }
    if (channels.empty()) throw InputError("channel list is empty");
    if (directions.empty()) throw InputError("direction list is empty");
    if (grid_points < 1) throw InputError("grid needs at least one point");
    if (!(grid_half_width >= 0.0)) throw InputError("grid half width must be >= 0");
    if (monte_carlo) {
        if (mc_samples < 1) throw InputError("Monte Carlo needs at least one sample");
        if (!(xi_lo > 0.0) || !(xi_hi > xi_lo)) throw InputError("distance window must satisfy 0 < lo < hi");
    }
    if (output_dir.empty()) throw InputError("output directory is empty");
}

double RunConfig::resolved_area() const {
    if (area) return *area;
    const double omega0 = 2.0 * std::numbers::pi * kSpeedOfLight / lambda0;
    return pulse_area_from_energy(*pulse_energy, *pulse_duration, *beam_waist, dipole_from_gamma(gamma_si, omega0));
}

double RunConfig::resolved_xibar() const {
    if (xibar) return *xibar;
    const double r = mean_distance ? *mean_distance : mean_distance_from_density(*density);
    return 2.0 * std::numbers::pi / lambda0 * r;
}

RunConfig preset_config(const std::string& name) {
    RunConfig c;
    c.preset = name;
    if (name == "fig4") {
        c.area = 0.14 * std::numbers::pi;
        c.xibar = 80.0;
        c.with_gamma_zero_inset = true;
        c.output_dir = "fig4";
    } else if (name == "table1") {
        c.area = 0.01 * std::numbers::pi;
        c.xibar = 80.0;
        c.output_dir = "table1";
    } else {
        throw InputError("unknown preset '" + name + "' (fig4|table1)");
    }
    return c;
}

RunConfig config_from_json(const std::string& text, RunConfig c) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw InputError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw InputError("config must be a JSON object");
    try {
        if (j.contains("preset")) c = preset_config(j.at("preset").get<std::string>());
        auto opt = [&](const char* k, std::optional<double>& v) {
            if (j.contains(k)) v = j.at(k).is_null() ? std::nullopt : std::optional<double>(j.at(k).get<double>());
        };
        if (j.contains("gamma")) c.gamma_si = j.at("gamma").get<double>();
        if (j.contains("lambda0")) c.lambda0 = j.at("lambda0").get<double>();
        opt("area", c.area);
        opt("pulse_energy", c.pulse_energy);
        opt("pulse_duration", c.pulse_duration);
        opt("beam_waist", c.beam_waist);
        opt("xibar", c.xibar);
        opt("density", c.density);
        opt("mean_distance", c.mean_distance);
        if (j.contains("channels")) {
            c.channels.clear();
            for (const auto& s : j.at("channels")) c.channels.push_back(parse_channel(s.get<std::string>()));
        }
        if (j.contains("directions")) {
            c.directions.clear();
            for (const auto& s : j.at("directions")) c.directions.push_back(parse_direction(s.get<std::string>()));
        }
        if (j.contains("kappa")) c.kappa = j.at("kappa").get<std::vector<int>>();
        if (j.contains("grid_points")) c.grid_points = j.at("grid_points").get<int>();
        if (j.contains("grid_half_width")) c.grid_half_width = j.at("grid_half_width").get<double>();
        if (j.contains("tensor_mode")) c.tensor_mode = parse_mode(j.at("tensor_mode").get<std::string>());
        if (j.contains("gamma_zero")) c.gamma_zero = j.at("gamma_zero").get<bool>();
        if (j.contains("with_gamma_zero_inset")) c.with_gamma_zero_inset = j.at("with_gamma_zero_inset").get<bool>();
        if (j.contains("interaction_during_delay")) {
            c.interaction_during_delay = j.at("interaction_during_delay").get<bool>();
        }
        if (j.contains("monte_carlo")) c.monte_carlo = j.at("monte_carlo").get<bool>();
        if (j.contains("mc_samples")) c.mc_samples = j.at("mc_samples").get<std::size_t>();
        if (j.contains("xi_lo")) c.xi_lo = j.at("xi_lo").get<double>();
        if (j.contains("xi_hi")) c.xi_hi = j.at("xi_hi").get<double>();
        if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("mc_traces")) c.mc_traces = j.at("mc_traces").get<std::size_t>();
        if (j.contains("output_dir")) c.output_dir = j.at("output_dir").get<std::string>();
    } catch (const json::exception& e) {
        throw InputError(std::string("bad config value: ") + e.what());
    }
    return c;
}

std::string config_to_json(const RunConfig& c, int indent) {
    json j;
    auto opt = [&](const char* k, const std::optional<double>& v) {
        if (v) j[k] = *v;
        else j[k] = nullptr;
    };
    j["preset"] = c.preset;
    j["gamma"] = c.gamma_si;
    j["lambda0"] = c.lambda0;
    opt("area", c.area);
    opt("pulse_energy", c.pulse_energy);
    opt("pulse_duration", c.pulse_duration);
    opt("beam_waist", c.beam_waist);
    opt("xibar", c.xibar);
    opt("density", c.density);
    opt("mean_distance", c.mean_distance);
    j["channels"] = json::array();
    for (auto ch : c.channels) j["channels"].push_back(to_string(ch));
    j["directions"] = json::array();
    for (auto d : c.directions) j["directions"].push_back(to_string(d));
    j["kappa"] = c.kappa;
    j["grid_points"] = c.grid_points;
    j["grid_half_width"] = c.grid_half_width;
    j["tensor_mode"] = mode_name(c.tensor_mode);
    j["gamma_zero"] = c.gamma_zero;
    j["with_gamma_zero_inset"] = c.with_gamma_zero_inset;
    j["interaction_during_delay"] = c.interaction_during_delay;
    j["monte_carlo"] = c.monte_carlo;
    j["mc_samples"] = c.mc_samples;
    j["xi_lo"] = c.xi_lo;
    j["xi_hi"] = c.xi_hi;
    j["seed"] = c.seed;
    j["mc_traces"] = c.mc_traces;
    j["output_dir"] = c.output_dir;
    return j.dump(indent);
}

std::string format_series(const SpectrumSeries& s, const RunConfig& c) {
    std::ostringstream os;
    os << "# mqc " << MQC_VERSION << "\n";
    os << "# series " << s.label << "\n";
    os << "# kappa " << s.kappa << "  direction " << to_string(s.channel.direction) << "  channel "
       << to_string(s.channel.polarization) << "  gamma_zero " << (s.gamma_zero ? 1 : 0) << "\n";
    os << "# area " << fmt(c.resolved_area()) << "  xibar " << fmt(c.resolved_xibar()) << "  tensor_mode "
       << mode_name(c.tensor_mode) << "  interaction_during_delay " << (c.interaction_during_delay ? 1 : 0) << "\n";
    if (c.monte_carlo) {
        os << "# monte_carlo samples " << c.mc_samples << "  window " << fmt(c.xi_lo) << " " << fmt(c.xi_hi)
           << "  seed " << c.seed << "\n";
    }
    os << "# units S: " << s.units << ", detuning: gamma\n";
    os << "# omega_detuning_over_gamma Re_S Im_S";
    const bool err = !s.stderr_re.empty();
    if (err) os << " stderr_Re_S stderr_Im_S";
    os << "\n";
    os << std::setprecision(12);
    for (std::size_t i = 0; i < s.detuning.size(); ++i) {
        os << s.detuning[i] << ' ' << s.values[i].real() << ' ' << s.values[i].imag();
        if (err) os << ' ' << s.stderr_re[i] << ' ' << s.stderr_im[i];
        os << '\n';
    }
    return os.str();
}

namespace {

void check_finite(const SpectrumSeries& s) {
    for (const cplx& v : s.values) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            throw NumericError("non-finite spectrum value in series " + s.label);
        }
    }
}

RunOutput finish(const RunConfig& c, const std::filesystem::path& dir, std::vector<std::string> files,
                 json extra) {
    json side;
    side["code_version"] = MQC_VERSION;
    side["timestamp"] = timestamp();
    side["config"] = json::parse(config_to_json(c));
    side["resolved"] = {{"area", c.resolved_area()}, {"xibar", c.resolved_xibar()}};
    side["seed"] = c.seed;
    side["units"] = "f^2/gamma^2";
    side["files"] = files;
    for (auto it = extra.begin(); it != extra.end(); ++it) side[it.key()] = it.value();
    const auto path = dir / "run.json";
    write_file(path, side.dump(2) + "\n");
    return {std::move(files), path.string()};
}

}  // namespace

RunOutput run_spectrum(const RunConfig& c) {
    c.validate();
    const std::filesystem::path dir(c.output_dir);
    std::filesystem::create_directories(dir);
    const double area = c.resolved_area();
    const double xibar = c.resolved_xibar();
    const std::vector<double> grid = default_detuning_grid(c.grid_points, c.grid_half_width);
    std::vector<bool> insets{c.gamma_zero};
    if (c.with_gamma_zero_inset && !c.gamma_zero) insets.push_back(true);

    std::vector<std::string> files;
    for (bool g0 : insets) {
        for (int k : c.kappa) {
            for (auto ch : c.channels) {
                for (auto d : c.directions) {
                    SpectrumSeries s;
                    if (c.monte_carlo) {
                        MonteCarloRequest r;
                        r.kappa = k;
                        r.channel = {d, ch};
                        r.detuning = grid;
                        r.area = area;
                        r.xi_lo = c.xi_lo;
                        r.xi_hi = c.xi_hi;
                        r.samples = c.mc_samples;
                        r.seed = c.seed;
                        r.tensor_mode = c.tensor_mode;
                        r.gamma_zero = g0;
                        r.interaction_during_delay = c.interaction_during_delay;
                        r.keep_traces = c.mc_traces;
                        MonteCarloResult res = monte_carlo_spectrum(r);
                        s = std::move(res.mean);
                        s.label = "k" + std::to_string(k) + "_" + to_string(r.channel) + (g0 ? "_gamma0" : "") + "_mc";
                        for (std::size_t t = 0; t < res.traces.size(); ++t) {
                            SpectrumSeries tr = s;
                            tr.values = res.traces[t];
                            tr.stderr_re.clear();
                            tr.stderr_im.clear();
                            tr.label = s.label + "_trace" + std::to_string(t);
                            const auto p = dir / (tr.label + ".dat");
                            write_file(p, format_series(tr, c));
                            files.push_back(p.filename().string());
                        }
                    } else {
                        SpectrumRequest r;
                        r.kappa = k;
                        r.channel = {d, ch};
                        r.detuning = grid;
                        r.area = area;
                        r.xibar = xibar;
                        r.interaction_during_delay = c.interaction_during_delay;
                        r.gamma_zero = g0;
                        s = spectrum(r);
                    }
                    check_finite(s);
                    const auto p = dir / (s.label + ".dat");
                    write_file(p, format_series(s, c));
                    files.push_back(p.filename().string());
                }
            }
        }
    }
    return finish(c, dir, std::move(files), json::object());
}

RunOutput run_table1(const RunConfig& c) {
    c.validate();
    const std::filesystem::path dir(c.output_dir);
    std::filesystem::create_directories(dir);
    const double area = c.resolved_area();
    const double xibar = c.resolved_xibar();
    const auto closed = table1_leading_order(area, xibar);
    const auto computed = table1_computed(area, xibar, c.interaction_during_delay, c.gamma_zero);

    std::ostringstream os;
    os << "# mqc " << MQC_VERSION << "\n";
    os << "# peak values sqrt(2 pi) Re S(kappa omega0; kappa) = gamma^2 Re I(0, 0)\n";
    os << "# area " << fmt(area) << "  xibar " << fmt(xibar) << "  gamma_zero " << (c.gamma_zero ? 1 : 0) << "\n";
    os << "# coefficients are peak / (area^(2 kappa) / xibar^2), except y par kappa 1: peak / area^2\n";
    os << "# kappa direction channel closed_form computed relative_difference closed_coefficient fitted_coefficient\n";
    os << std::setprecision(10);
    json rows = json::array();
    for (std::size_t i = 0; i < closed.size(); ++i) {
        const auto& a = closed[i];
        const auto& b = computed[i];
        const bool no_xi = a.kappa == 1 && a.direction == Direction::y && a.channel == PolarizationChannel::parallel;
        const double norm = std::pow(area, 2 * a.kappa) / (no_xi ? 1.0 : xibar * xibar);
        const double rel = a.value != 0.0 ? (b.value - a.value) / a.value : b.value;
        double fitted = 0.0;
        if (a.value != 0.0) {
            fitted = fitted_leading_coefficient(a.kappa, {a.direction, a.channel}, xibar, 0.005 * std::numbers::pi,
                                                0.01 * std::numbers::pi);
            if (!no_xi) fitted *= xibar * xibar;
        }
        os << a.kappa << ' ' << to_string(a.direction) << ' ' << to_string(a.channel) << ' ' << a.value << ' '
           << b.value << ' ' << rel << ' ' << a.value / norm << ' ' << fitted << '\n';
        rows.push_back({{"kappa", a.kappa},
                        {"direction", to_string(a.direction)},
                        {"channel", to_string(a.channel)},
                        {"closed_form", a.value},
                        {"computed", b.value},
                        {"fitted_coefficient", fitted}});
        if (!std::isfinite(b.value)) throw NumericError("non-finite Table 1 value");
    }
    const auto p = dir / "table1.dat";
    write_file(p, os.str());
    return finish(c, dir, {p.filename().string()}, json{{"table1", rows}});
}

}  // namespace mqc
