#pragma once

#include "mqc/oracle.hpp"

#include <optional>
#include <string>
#include <vector>

namespace mqc {

struct RunConfig {
    // physical parameters; gamma in rad/s is only needed for dimensional conversions
    double gamma_si = 2.0 * 3.141592653589793 * 6.0e6;
    double lambda0 = 790e-9;

    // pulse area, either directly or from energy / duration / waist
    std::optional<double> area;
    std::optional<double> pulse_energy;
    std::optional<double> pulse_duration;
    std::optional<double> beam_waist;

    // density parameter: xibar directly, or density and/or mean distance
    std::optional<double> xibar;
    std::optional<double> density;         // m^-3
    std::optional<double> mean_distance;   // m

    std::vector<PolarizationChannel> channels{PolarizationChannel::parallel, PolarizationChannel::perpendicular};
    std::vector<Direction> directions{Direction::x, Direction::y};
    std::vector<int> kappa{1, 2};
    int grid_points = 801;
    double grid_half_width = 10.0;

    TensorMode tensor_mode = TensorMode::exact;
    bool gamma_zero = false;          // the collective-decay-free inset
    bool with_gamma_zero_inset = false;   // emit both the full and the inset series
    bool interaction_during_delay = true;

    // Monte Carlo
    bool monte_carlo = false;
    std::size_t mc_samples = 100;
    double xi_lo = 67.2;
    double xi_hi = 92.8;
    std::uint64_t seed = 1;
    std::size_t mc_traces = 0;

    std::string output_dir = "mqc_out";
    std::string preset;

    void validate() const;
    double resolved_area() const;
    double resolved_xibar() const;
};

RunConfig preset_config(const std::string& name);
RunConfig config_from_json(const std::string& text, RunConfig base = {});
std::string config_to_json(const RunConfig& c, int indent = 2);

// delimited text with a '#' header; no timestamps, so reruns are byte-identical
std::string format_series(const SpectrumSeries& s, const RunConfig& c);

struct RunOutput {
    std::vector<std::string> files;
    std::string sidecar;
};

// writes one file per (kappa, channel, direction[, inset]) plus a JSON sidecar
RunOutput run_spectrum(const RunConfig& c);
// closed forms next to computed peaks and small-area fitted coefficients
RunOutput run_table1(const RunConfig& c);

}  // namespace mqc
