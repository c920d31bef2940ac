#include "mqc/single_atom.hpp"

#include <cmath>
#include <numbers>

namespace mqc {

PhysicalParams PhysicalParams::from_wavelength(double gamma, double lambda0) {
    PhysicalParams p;
    p.gamma = gamma;
    p.lambda0 = lambda0;
    p.omega0 = lambda0 > 0 ? 2.0 * std::numbers::pi * kSpeedOfLight / lambda0 : 0.0;
    p.validate();
    return p;
}

void PhysicalParams::validate() const {
    if (!(gamma > 0.0) || !std::isfinite(gamma)) throw InputError("gamma must be positive");
    if (!(lambda0 > 0.0) || !std::isfinite(lambda0)) throw InputError("lambda0 must be positive");
    const double w = 2.0 * std::numbers::pi * kSpeedOfLight / lambda0;
    if (std::abs(omega0 - w) > 1e-12 * w) throw InputError("omega0 inconsistent with lambda0");
    if (doppler_shift != 0.0) throw InputError("nonzero Doppler shift is not supported");
}

void PulseSpec::validate() const {
    if (!(area >= 0.0) || !std::isfinite(area)) throw InputError("pulse area must be >= 0");
    if (polarization == Polarization::z) {
        throw InputError("pulse polarization must be transverse to the laser axis");
    }
    if (arrival != 1 && arrival != 2) throw InputError("pulse arrival label must be 1 or 2");
}

Op4 dipole_lowering(Polarization p) {
    const double r = 1.0 / std::sqrt(2.0);
    switch (p) {
    case Polarization::x: return r * (sigma(1, 4) - sigma(1, 2));
    case Polarization::y: return kI * r * (sigma(1, 4) + sigma(1, 2));
    case Polarization::z: return sigma(1, 3);
    }
    throw InputError("dipole_lowering: unsupported polarization");
}

std::array<Op4, 3> dipole_components() {
    return {dipole_lowering(Polarization::x), dipole_lowering(Polarization::y),
            dipole_lowering(Polarization::z)};
}

Op4 ground_projector() { return sigma(1, 1); }
Op4 excited_projector() { return sigma(2, 2) + sigma(3, 3) + sigma(4, 4); }

Eigen::Vector4cd cartesian_state(Polarization p) {
    Eigen::Vector4cd g = Eigen::Vector4cd::Zero();
    g(0) = 1.0;
    return dipole_lowering(p).adjoint() * g;
}

Op4 cartesian_population(Polarization p) {
    const Eigen::Vector4cd k = cartesian_state(p);
    return k * k.adjoint();
}

Op4 kick_unitary(double area, Polarization p, double phase) {
    const Op4 s = dipole_lowering(p);
    const Op4 m = s.adjoint() * std::exp(kI * phase) + s * std::exp(-kI * phase);
    const Op4 m2 = m * m;
    return (Op4::Identity() - m2) + m2 * std::cos(area / 2) - kI * m * std::sin(area / 2);
}

KickDecomposition::KickDecomposition(const PulseSpec& pulse, const SingleAtomBasis& basis)
    : pulse_(pulse) {
    pulse.validate();
    const Op4 s = dipole_lowering(pulse.polarization);
    const Op4 sd = s.adjoint();
    const Op4 m2 = sd * s + s * sd;
    const double c = std::cos(pulse.area / 2);
    const double sn = std::sin(pulse.area / 2);
    const Op4 pi_t = (Op4::Identity() - m2) + m2 * c;
    const Op4 s_t = s * sn;
    const Op4 sd_t = sd * sn;

    r_[2] = basis.superoperator(
        [&](const Op4& q) -> Op4 { return pi_t * q * pi_t + sd_t * q * s_t + s_t * q * sd_t; });
    r_[3] = basis.superoperator(
        [&](const Op4& q) -> Op4 { return -kI * sd_t * q * pi_t + kI * pi_t * q * sd_t; });
    r_[1] = basis.superoperator(
        [&](const Op4& q) -> Op4 { return -kI * s_t * q * pi_t + kI * pi_t * q * s_t; });
    r_[4] = basis.superoperator([&](const Op4& q) -> Op4 { return sd_t * q * sd_t; });
    r_[0] = basis.superoperator([&](const Op4& q) -> Op4 { return s_t * q * s_t; });
}

const Superop16& KickDecomposition::harmonic(int p) const {
    if (p < -2 || p > 2) throw InputError("kick harmonic out of range");
    return r_[static_cast<std::size_t>(p + 2)];
}

Superop16 KickDecomposition::reassemble(double phase) const {
    Superop16 m = Superop16::Zero();
    for (int p = -2; p <= 2; ++p) m += std::exp(kI * (p * phase)) * harmonic(p);
    return m;
}

KickDecomposition kick_decomposition(const PulseSpec& pulse, const SingleAtomBasis& basis) {
    return KickDecomposition(pulse, basis);
}

CoefficientVector two_pulse_pure_state(double area, PolarizationChannel channel, double phi1,
                                       double phi2, const SingleAtomBasis& basis) {
    const double c = std::cos(area / 2);
    const double s = std::sin(area / 2);
    Eigen::Vector4cd g = Eigen::Vector4cd::Zero();
    g(0) = 1.0;
    const Eigen::Vector4cd x = cartesian_state(Polarization::x);
    const Eigen::Vector4cd y = cartesian_state(Polarization::y);
    const cplx e1 = std::exp(kI * phi1);
    const cplx e2 = std::exp(kI * phi2);
    Eigen::Vector4cd psi;
    if (channel == PolarizationChannel::parallel) {
        // the relative sign of the two paths back to |1> is negative
        psi = (c * c - s * s * e1 / e2) * g - kI * s * c * (e1 + e2) * x;
    } else {
        psi = c * c * g - kI * s * e1 * x - kI * s * c * e2 * y;
    }
    return basis.expand(psi * psi.adjoint());
}

std::array<Superop16, 3> decay_projectors(const SingleAtomBasis& basis) {
    const auto d = dipole_components();
    const Op4 pg = ground_projector();
    const Op4 pe = excited_projector();
    auto feed = [&](const Op4& q) -> Op4 {
        Op4 r = Op4::Zero();
        for (const auto& dk : d) r += dk.adjoint() * q * dk;
        return r;
    };
    return {basis.superoperator([&](const Op4& q) -> Op4 { return pg * q * pg + feed(q); }),
            basis.superoperator([&](const Op4& q) -> Op4 { return pe * q * pg + pg * q * pe; }),
            basis.superoperator([&](const Op4& q) -> Op4 { return pe * q * pe - feed(q); })};
}

Superop16 free_propagator(double t, double gamma, const SingleAtomBasis& basis) {
    if (!(t >= 0.0)) throw InputError("free_propagator: t must be >= 0");
    if (!(gamma > 0.0)) throw InputError("free_propagator: gamma must be positive");
    const auto p = decay_projectors(basis);
    return p[0] + std::exp(-0.5 * gamma * t) * p[1] + std::exp(-gamma * t) * p[2];
}

Superop16 decay_generator(double gamma, const SingleAtomBasis& basis) {
    const auto p = decay_projectors(basis);
    return -0.5 * gamma * p[1] - gamma * p[2];
}

Superop16 resolvent(cplx z, double gamma, const SingleAtomBasis& basis, SectorPolicy policy) {
    if (!(gamma > 0.0)) throw InputError("resolvent: gamma must be positive");
    if (z.real() < 0.0) throw InputError("resolvent: Re z must be >= 0");
    const auto p = decay_projectors(basis);
    Superop16 g = p[1] / (z + 0.5 * gamma) + p[2] / (z + gamma);
    if (policy == SectorPolicy::full) {
        if (z == 0.0) throw PoleError("resolvent: z = 0 on the stationary sector");
        g += p[0] / z;
    }
    return g;
}

PairDecay::PairDecay(double gamma, const SingleAtomBasis& basis) : gamma_(gamma) {
    if (!(gamma > 0.0)) throw InputError("PairDecay: gamma must be positive");
    const auto p = decay_projectors(basis);
    std::array<Superop16, 3> ps;
    for (int r = 0; r < 3; ++r) ps[static_cast<std::size_t>(r)] = p[static_cast<std::size_t>(r)].adjoint();
    for (auto& s : sectors_) s = Superop::Zero(kPairDim, kPairDim);
    for (int r = 0; r < 3; ++r) {
        for (int q = 0; q < 3; ++q) {
            sectors_[static_cast<std::size_t>(r + q)] +=
                kron(ps[static_cast<std::size_t>(r)], ps[static_cast<std::size_t>(q)]);
        }
    }
}

Superop PairDecay::generator() const {
    Superop g = Superop::Zero(kPairDim, kPairDim);
    for (int s = 1; s < 5; ++s) g -= rate(s) * sector(s);
    return g;
}

Superop PairDecay::propagator(double t) const {
    if (!(t >= 0.0)) throw InputError("propagator: t must be >= 0");
    Superop g = sector(0);
    for (int s = 1; s < 5; ++s) g += std::exp(-rate(s) * t) * sector(s);
    return g;
}

Superop PairDecay::resolvent(cplx z, SectorPolicy policy) const {
    if (z.real() < 0.0) throw InputError("resolvent: Re z must be >= 0");
    Superop g = Superop::Zero(kPairDim, kPairDim);
    for (int s = 1; s < 5; ++s) g += sector(s) / (z + rate(s));
    if (policy == SectorPolicy::full) {
        if (z == 0.0) throw PoleError("resolvent: z = 0 on the stationary sector");
        g += sector(0) / z;
    }
    return g;
}

void PairDecay::check_stationary_free(const Eigen::MatrixXcd& v, bool rows) const {
    const double ref = v.cwiseAbs().maxCoeff();
    if (ref == 0.0) return;
    const Eigen::MatrixXcd p0 = rows ? Eigen::MatrixXcd(v * sector(0)) : Eigen::MatrixXcd(sector(0) * v);
    const double leak = p0.cwiseAbs().maxCoeff();
    if (leak > 1e-10 * ref) {
        throw PoleError("sector-restricted resolvent: input populates the stationary sector (relative " +
                        std::to_string(leak / ref) + ")");
    }
}

Eigen::MatrixXcd PairDecay::apply_resolvent(const Eigen::MatrixXcd& v, cplx z, SectorPolicy policy) const {
    if (v.rows() != kPairDim) throw InputError("apply_resolvent: expected 256 rows");
    if (z.real() < 0.0) throw InputError("resolvent: Re z must be >= 0");
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(v.rows(), v.cols());
    for (int s = 1; s < 5; ++s) out.noalias() += (sector(s) * v) / (z + rate(s));
    if (policy == SectorPolicy::full) {
        if (z == 0.0) throw PoleError("resolvent: z = 0 on the stationary sector");
        out.noalias() += (sector(0) * v) / z;
    } else {
        check_stationary_free(v, false);
    }
    return out;
}

CoefficientVector PairDecay::apply_resolvent(const CoefficientVector& v, cplx z, SectorPolicy policy) const {
    return apply_resolvent(Eigen::MatrixXcd(v), z, policy).col(0);
}

Eigen::MatrixXcd PairDecay::apply_resolvent_rows(const Eigen::MatrixXcd& rows, cplx z,
                                                 SectorPolicy policy) const {
    if (rows.cols() != kPairDim) throw InputError("apply_resolvent_rows: expected 256 columns");
    if (z.real() < 0.0) throw InputError("resolvent: Re z must be >= 0");
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(rows.rows(), rows.cols());
    for (int s = 1; s < 5; ++s) out.noalias() += (rows * sector(s)) / (z + rate(s));
    if (policy == SectorPolicy::full) {
        if (z == 0.0) throw PoleError("resolvent: z = 0 on the stationary sector");
        out.noalias() += (rows * sector(0)) / z;
    } else {
        check_stationary_free(rows, true);
    }
    return out;
}

}  // namespace mqc
