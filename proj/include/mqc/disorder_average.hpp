#pragma once

#include "mqc/scattering.hpp"

#include <array>

namespace mqc {

// C = (3 gamma / 4 xi)^2 at the mean distance
double coupling_scale(double xibar, double gamma);
// <(3 gamma / 4 xi)^2> for xi uniform on [lo, hi]
double window_coupling_scale(double lo, double hi, double gamma);

// isotropic average <T_kl T*_mn>, normalized so <1> = 1
double angular_average(int k, int l, int m, int n, double scale);

enum class RealPartPair { gamma_gamma, omega_omega, gamma_omega };
// <Gamma_kl Gamma_mn>, <Omega_kl Omega_mn>, <Gamma_kl Omega_mn>
double gamma_omega_average(RealPartPair kind, int k, int l, int m, int n, double scale);

// weight of a tensor tag under the configuration average
double tag_average(const TensorTag& tag, double scale);

// keeps monomials whose position phases cancel and whose tag survives the average
PhaseTaggedVector survival_filter(const PhaseTaggedVector& state);

struct AveragedComponents {
    std::array<CoefficientVector, 5> by_order;

    AveragedComponents();
    const CoefficientVector& order(int l) const;
    CoefficientVector& order(int l);
};

AveragedComponents average_state(const PhaseTaggedVector& state, double scale);

}  // namespace mqc
