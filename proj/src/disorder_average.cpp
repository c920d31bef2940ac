#include "mqc/disorder_average.hpp"

#include <cmath>

namespace mqc {

double coupling_scale(double xibar, double gamma) {
    if (!(xibar > 0.0)) throw InputError("mean distance must be positive");
    const double c = 0.75 * gamma / xibar;
    return c * c;
}

double window_coupling_scale(double lo, double hi, double gamma) {
    if (!(lo > 0.0) || !(hi > lo)) throw InputError("distance window must satisfy 0 < lo < hi");
    return (0.75 * gamma) * (0.75 * gamma) / (lo * hi);
}

double angular_average(int k, int l, int m, int n, double scale) {
    auto d = [](int i, int j) { return i == j ? 1.0 : 0.0; };
    return scale * (6.0 * d(k, l) * d(m, n) + d(k, m) * d(l, n) + d(k, n) * d(l, m)) / 15.0;
}

double gamma_omega_average(RealPartPair kind, int k, int l, int m, int n, double scale) {
    // Gamma = (T + T*)/2, Omega = (T - T*)/2i, and <T T> = <T* T*> = 0
    if (kind == RealPartPair::gamma_omega) return 0.0;
    return 0.5 * angular_average(k, l, m, n, scale);
}

double tag_average(const TensorTag& tag, double scale) {
    if (tag.degree() == 0) return 1.0;
    if (!tag.is_mixed()) return 0.0;
    const auto& f = tag.factors();
    const TensorFactor& plain = f[0].conjugate ? f[1] : f[0];
    const TensorFactor& conj = f[0].conjugate ? f[0] : f[1];
    auto [k, l] = slot_indices(plain.slot);
    auto [m, n] = slot_indices(conj.slot);
    return angular_average(k, l, m, n, scale);
}

PhaseTaggedVector survival_filter(const PhaseTaggedVector& state) {
    PhaseTaggedVector out;
    for (const auto& [m, v] : state.terms()) {
        if (!m.position_phases_cancel()) continue;
        if (m.tag.degree() == 1) continue;
        if (m.tag.degree() == 2 && !m.tag.is_mixed()) continue;
        out.add(m, v);
    }
    return out;
}

AveragedComponents::AveragedComponents() {
    for (auto& v : by_order) v = CoefficientVector::Zero(kPairDim);
}

const CoefficientVector& AveragedComponents::order(int l) const {
    if (l < -2 || l > 2) throw InputError("modulation order out of range");
    return by_order[static_cast<std::size_t>(l + 2)];
}

CoefficientVector& AveragedComponents::order(int l) {
    if (l < -2 || l > 2) throw InputError("modulation order out of range");
    return by_order[static_cast<std::size_t>(l + 2)];
}

AveragedComponents average_state(const PhaseTaggedVector& state, double scale) {
    AveragedComponents out;
    const PhaseTaggedVector kept = survival_filter(state);
    for (const auto& [m, v] : kept.terms()) {
        const int l = m.modulation_order();
        if (l < -2 || l > 2) throw InvariantError("average_state: modulation order out of range");
        const double w = tag_average(m.tag, scale);
        if (w != 0.0) out.order(l) += w * v;
    }
    return out;
}

}  // namespace mqc
