#pragma once

#include "mqc/disorder_average.hpp"

#include <array>
#include <memory>
#include <string>
#include <vector>

namespace mqc {

struct DetectionChannel {
    Direction direction = Direction::y;
    PolarizationChannel polarization = PolarizationChannel::parallel;
};

std::string to_string(const DetectionChannel& c);

// sum over both atoms of sigma_zz + sigma_yy (x detector) or sigma_zz + sigma_xx (y detector)
Op16 detection_operator(Direction d);
CoefficientRow detection_row(Direction d, const TwoAtomBasis& basis);

// <O> per modulation order l = -2..2
std::array<cplx, 5> detection_projection(const AveragedComponents& components, Direction d,
                                         const TwoAtomBasis& basis);

// Products of up to three z1 resolvent sectors, stored as sorted sector multisets.
// pole_factor(m, z) = prod_i 1 / (z + rate(s_i))
class PoleSets {
public:
    static const std::vector<std::array<int, 3>>& sets();   // unused entries are -1
    static int count();
    static int index(std::array<int, 3> sectors, int n);
    static cplx factor(int m, cplx z, double gamma);
    // inverse Laplace transform of factor(m, .) at time t
    static double inverse(int m, double t, double gamma);
};

// sum_m coeff[m] pole_factor(m, z1)
struct RationalResponse {
    Eigen::VectorXcd coeff;
    double gamma = 1.0;

    cplx operator()(cplx z1) const;
    cplx inverse_laplace(double t) const;
};

inline constexpr int kTagCount = 2 * kTensorSlots;   // T_slot then T*_slot
inline constexpr int kTagPairs = kTagCount * kTagCount;

struct ResponseOptions {
    int kappa = 1;
    Direction direction = Direction::y;
    bool interaction_during_delay = true;
    cplx z2 = 0.0;
    SectorPolicy z2_policy = SectorPolicy::excise_stationary;
};

// Laplace-domain intensity of harmonic l = kappa at fixed z2, as a rational function of z1,
// resolved by the pair of tensor tags of the two interaction insertions
// (first index = earlier insertion). Position phases are already filtered.
class ResponseExpansion {
public:
    ResponseExpansion(const ScatteringModel& model, const ResponseOptions& options);

    const Eigen::VectorXcd& single() const { return single_; }
    const Eigen::MatrixXcd& pairs() const { return pairs_; }   // kTagPairs x PoleSets::count()
    double gamma() const { return gamma_; }
    const ResponseOptions& options() const { return options_; }

    RationalResponse single_scattering() const;
    RationalResponse contract(const Eigen::VectorXcd& tag_pair_weights, bool include_single) const;
    RationalResponse averaged(double scale, bool include_single = true) const;
    RationalResponse fixed(const Eigen::Matrix3cd& t, bool include_single = true,
                           bool mixed_only = false) const;

    // per-tag-pair values on a set of z1 points: kTagPairs x z.size()
    Eigen::MatrixXcd tag_pair_values(const std::vector<cplx>& z1) const;
    Eigen::RowVectorXcd single_values(const std::vector<cplx>& z1) const;

private:
    ResponseOptions options_;
    double gamma_;
    Eigen::VectorXcd single_;
    Eigen::MatrixXcd pairs_;
};

int tag_index(int slot, bool conjugate);
cplx tag_value(const Eigen::Matrix3cd& t, int tag);
Eigen::VectorXcd averaged_tag_weights(double scale, bool mixed_only = true);
Eigen::VectorXcd fixed_tag_weights(const Eigen::Matrix3cd& t, bool mixed_only = false);

struct SpectrumRequest {
    int kappa = 1;
    DetectionChannel channel;
    std::vector<double> detuning;   // omega - kappa omega0 in units of gamma
    double area = 0.14 * 3.141592653589793;
    double xibar = 80.0;
    double gamma = 1.0;
    bool interaction_during_delay = true;
    bool gamma_zero = false;
    InteractionPart part = InteractionPart::full;

    void validate() const;
};

struct SpectrumSeries {
    std::vector<double> detuning;
    std::vector<cplx> values;
    std::vector<double> stderr_re;   // Monte-Carlo only
    std::vector<double> stderr_im;
    int kappa = 1;
    DetectionChannel channel;
    bool gamma_zero = false;
    std::string label;
    std::string units = "f^2/gamma^2";
};

std::vector<double> default_detuning_grid(int points = 801, double half_width = 10.0);

// shared, lazily built interaction decomposition
std::shared_ptr<const InteractionDecomposition> shared_interaction(InteractionPart part, bool gamma_zero);
ScatteringModel make_model(double area, PolarizationChannel channel, double gamma, InteractionPart part,
                           bool gamma_zero);

// S(omega; kappa) = I_kappa(z1 = i(omega - kappa omega0), z2 = 0) / sqrt(2 pi)
SpectrumSeries spectrum(const SpectrumRequest& request);
// same through the phase-tagged forward expansion, point by point (slow reference path)
SpectrumSeries spectrum_reference(const SpectrumRequest& request);

// peak in the Table 1 normalization: gamma^2 Re I_kappa(0, 0) = sqrt(2 pi) Re S
double normalized_peak(const SpectrumRequest& request);

// z2 = 0 via small-epsilon sweep plus Richardson, compared with the excised evaluation
struct PoleCrossCheck {
    cplx restricted;
    cplx extrapolated;
    double relative_difference;
};
PoleCrossCheck z2_pole_cross_check(const SpectrumRequest& request, double detuning);

struct PeakEntry {
    int kappa;
    Direction direction;
    PolarizationChannel channel;
    double value;
};

std::vector<PeakEntry> table1_leading_order(double area, double xibar);
std::vector<PeakEntry> table1_computed(double area, double xibar, bool interaction_during_delay = true,
                                       bool gamma_zero = false);
// leading small-area coefficient: peak / (area^(2 kappa) / xibar^2 or 1) from a two-area fit
double fitted_leading_coefficient(int kappa, DetectionChannel channel, double xibar, double area1,
                                  double area2);
double fitted_area_exponent(int kappa, DetectionChannel channel, double xibar,
                            const std::vector<double>& areas);

// dimensional helpers, SI units
double mean_scattering_cross_section(double lambda0, double gamma, double doppler_rms);
double resonant_cross_section(double lambda0);
double mean_free_path(double density, double cross_section);
double dipole_from_gamma(double gamma, double omega0);
double gamma_from_dipole(double d, double omega0);
double pulse_area_from_energy(double energy, double duration, double waist, double dipole);
double mean_distance_from_density(double density);

}  // namespace mqc
