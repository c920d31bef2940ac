#pragma once

#include "mqc/spectra.hpp"

#include <cstdint>
#include <vector>

namespace mqc {

// full two-atom generator in state form: free decay (Lindblad form) plus interaction
Superop oracle_generator(const Eigen::Matrix3cd& t, double gamma, const TwoAtomBasis& basis);
Superop oracle_decay_generator(double gamma, const TwoAtomBasis& basis);

// independent pulse unitary: matrix exponential of -i area M / 2
Op4 oracle_kick_unitary(double area, Polarization p, double phase);

struct OracleRun {
    Configuration configuration;
    double area = 0.3;
    double second_area = -1.0;     // < 0: same as area
    PolarizationChannel channel = PolarizationChannel::parallel;
    std::vector<double> tau;       // delays, units of 1/gamma
    int phase_samples = 8;         // phi21 samples
    int position_samples = 5;      // per atom
    TensorMode tensor_mode = TensorMode::exact;
    double gamma = 1.0;
    double rtol = 1e-12;
    double atol = 1e-16;
    double fluorescence_horizon = 60.0;   // units of 1/gamma

    void validate() const;
};

struct OracleResult {
    // position-averaged, t_fl-integrated intensity: [tau][direction][phase sample]
    std::vector<std::array<std::vector<double>, 2>> integrated;
    // demodulated harmonics l = -2..2 of the above: [tau][direction][l + 2]
    std::vector<std::array<std::array<cplx, 5>, 2>> harmonics;
    std::size_t steps = 0;
};

OracleResult time_domain_evolve(const OracleRun& run);

// one trajectory at fixed phases, reconstructed after the second pulse (or the first if tau < 0)
struct TrajectorySample {
    double time;
    double trace;
    double hermiticity_error;
    double min_population;
    double max_population;
    double excited_population;   // both atoms
    std::array<double, 2> intensity;   // x and y detectors
};

std::vector<TrajectorySample> evolve_trajectory(const OracleRun& run, double tau, double phi21,
                                                const std::vector<double>& t_fl,
                                                double theta1 = 0.0, double theta2 = 0.0);

// harmonic l of samples taken at phi_k = 2 pi k / N
cplx numeric_demodulate(const std::vector<cplx>& samples, int l);
cplx numeric_demodulate(const std::vector<double>& samples, int l);

// analytic counterpart at a fixed configuration, inverse transformed in z1
struct OracleComparison {
    std::vector<double> tau;
    // [direction][l-1][tau]
    std::array<std::array<std::vector<cplx>, 2>, 2> oracle;
    std::array<std::array<std::vector<cplx>, 2>, 2> analytic;
    // max |oracle - analytic| / max |analytic| over tau, [direction][l-1]
    std::array<std::array<double, 2>, 2> relative_error{};
};

OracleComparison compare_with_oracle(const OracleRun& run);

// counter-based stream: value k of sample i
double uniform_sample(std::uint64_t seed, std::uint64_t i, std::uint64_t k);

struct SampledConfiguration {
    double xi;
    Eigen::Vector3d direction;
};
SampledConfiguration sample_configuration(std::uint64_t seed, std::uint64_t i, double xi_lo, double xi_hi);

struct MonteCarloRequest {
    int kappa = 1;
    DetectionChannel channel;
    std::vector<double> detuning;
    double area = 0.14 * 3.141592653589793;
    double xi_lo = 67.2;
    double xi_hi = 92.8;
    std::size_t samples = 100;
    std::uint64_t seed = 1;
    TensorMode tensor_mode = TensorMode::exact;
    bool mixed_only = false;        // keep only tag pairs of T T* type
    bool gamma_zero = false;
    bool interaction_during_delay = true;
    double gamma = 1.0;
    std::size_t keep_traces = 0;    // per-configuration traces to return

    void validate() const;
};

struct MonteCarloResult {
    SpectrumSeries mean;
    std::vector<std::vector<cplx>> traces;
    std::vector<SampledConfiguration> trace_configurations;
};

MonteCarloResult monte_carlo_spectrum(const MonteCarloRequest& request);

// sample means of T_slot T*_slot' against the analytic values at the window-averaged scale
struct TensorAverageEntry {
    int plain_slot;
    int conj_slot;
    cplx mean;
    double std_error;
    double analytic;
};
std::vector<TensorAverageEntry> monte_carlo_tensor_averages(std::size_t samples, double xi_lo, double xi_hi,
                                                            std::uint64_t seed, TensorMode mode,
                                                            double gamma = 1.0);

}  // namespace mqc
