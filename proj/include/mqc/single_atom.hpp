#pragma once

#include "mqc/operator_basis.hpp"

#include <array>

namespace mqc {

struct PhysicalParams {
    double gamma = 1.0;           // angular units
    double lambda0 = 790e-9;      // m
    double omega0 = 0.0;          // 2 pi c / lambda0
    double doppler_shift = 0.0;   // always zero here

    static PhysicalParams from_wavelength(double gamma, double lambda0);
    void validate() const;
};

inline constexpr double kSpeedOfLight = 299792458.0;

struct PulseSpec {
    double area = 0.0;
    Polarization polarization = Polarization::x;
    int arrival = 1;

    void validate() const;
};

// lowering operator S = D . e* for the polarization e
Op4 dipole_lowering(Polarization p);
// Cartesian components (D_x, D_y, D_z)
std::array<Op4, 3> dipole_components();
Op4 excited_projector();
Op4 ground_projector();

// |x>, |y>, |z> excited states and sigma_kk = |k><k|
Eigen::Vector4cd cartesian_state(Polarization p);
Op4 cartesian_population(Polarization p);

// exp(-i theta M / 2), M = S^dagger e^{i phi} + S e^{-i phi}
Op4 kick_unitary(double area, Polarization p, double phase);

// Q -> U Q U^dagger = sum_p e^{i p phi} R[p] Q
class KickDecomposition {
public:
    KickDecomposition() = default;
    KickDecomposition(const PulseSpec& pulse, const SingleAtomBasis& basis);

    const Superop16& harmonic(int p) const;
    Superop16 reassemble(double phase) const;
    const PulseSpec& pulse() const { return pulse_; }

private:
    PulseSpec pulse_;
    std::array<Superop16, 5> r_{};
};

KickDecomposition kick_decomposition(const PulseSpec& pulse, const SingleAtomBasis& basis);

// closed forms for two kicks with no dynamics in between, used to check composed kicks
CoefficientVector two_pulse_pure_state(double area, PolarizationChannel channel, double phi1,
                                       double phi2, const SingleAtomBasis& basis);

// free decay in the operator (Heisenberg) form, natural convention out = M in
Superop16 free_propagator(double t, double gamma, const SingleAtomBasis& basis);
Superop16 decay_generator(double gamma, const SingleAtomBasis& basis);

enum class SectorPolicy {
    full,               // z = 0 is a pole error
    excise_stationary   // drop the rate-0 sector; input must not populate it
};

Superop16 resolvent(cplx z, double gamma, const SingleAtomBasis& basis,
                    SectorPolicy policy = SectorPolicy::full);

// exp(L t) = sum_r e^{-r gamma t / 2} P_r, r = 0, 1, 2 (operator form)
std::array<Superop16, 3> decay_projectors(const SingleAtomBasis& basis);

// Two-atom free decay acting on density-operator coefficients. The state form of a
// map is the adjoint of its operator form. Sectors s = 0..4 have rate s gamma / 2.
class PairDecay {
public:
    PairDecay(double gamma, const SingleAtomBasis& basis);

    double gamma() const { return gamma_; }
    double rate(int s) const { return 0.5 * gamma_ * s; }
    const Superop& sector(int s) const { return sectors_.at(static_cast<std::size_t>(s)); }

    Superop generator() const;
    Superop propagator(double t) const;
    Superop resolvent(cplx z, SectorPolicy policy = SectorPolicy::full) const;

    CoefficientVector apply_resolvent(const CoefficientVector& v, cplx z,
                                      SectorPolicy policy = SectorPolicy::full) const;
    Eigen::MatrixXcd apply_resolvent(const Eigen::MatrixXcd& v, cplx z,
                                     SectorPolicy policy = SectorPolicy::full) const;
    // row form: r -> r G(z)
    Eigen::MatrixXcd apply_resolvent_rows(const Eigen::MatrixXcd& rows, cplx z,
                                          SectorPolicy policy = SectorPolicy::full) const;

    // throws PoleError if the stationary sector of v is not negligible
    void check_stationary_free(const Eigen::MatrixXcd& v, bool rows) const;

private:
    double gamma_;
    std::array<Superop, 5> sectors_;
};

}  // namespace mqc
