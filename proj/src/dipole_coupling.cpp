#include "mqc/dipole_coupling.hpp"

#include "mqc/single_atom.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <cmath>

namespace mqc {

Eigen::Vector3d Configuration::direction() const {
    return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

void Configuration::validate() const {
    if (!(xi > 0.0) || !std::isfinite(xi)) throw InputError("configuration: xi must be > 0");
    if (!std::isfinite(theta) || !std::isfinite(phi)) throw InputError("configuration: bad angles");
}

CouplingTensor coupling_tensor(double xi, const Eigen::Vector3d& n, TensorMode mode, double gamma) {
    if (!(xi > 0.0) || !std::isfinite(xi)) throw InputError("coupling_tensor: xi must be > 0");
    if (std::abs(n.norm() - 1.0) > 1e-12) throw InputError("coupling_tensor: direction must be a unit vector");
    const Eigen::Matrix3d nn = n * n.transpose();
    const Eigen::Matrix3d transverse = Eigen::Matrix3d::Identity() - nn;
    const Eigen::Matrix3d dipolar = Eigen::Matrix3d::Identity() - 3.0 * nn;
    cplx a = 0.0;  // coefficient of (1 - nn)
    cplx b = 0.0;  // coefficient of (1 - 3nn)
    switch (mode) {
    case TensorMode::exact:
        a = kI / xi;
        b = 1.0 / (xi * xi) - kI / (xi * xi * xi);
        break;
    case TensorMode::far_field:
        a = kI / xi;
        break;
    case TensorMode::near_field:
        b = -kI / (xi * xi * xi);
        break;
    }
    // the quasi-static limit also drops the retardation phase, which agrees with the
    // exact tensor to O(xi^2) rather than O(xi)
    const cplx pre = 0.75 * gamma * (mode == TensorMode::near_field ? cplx(1.0) : std::exp(-kI * xi));
    CouplingTensor out;
    out.t = pre * (a * transverse.cast<cplx>() + b * dipolar.cast<cplx>());
    return out;
}

CouplingTensor coupling_tensor(const Configuration& config, TensorMode mode, double gamma) {
    config.validate();
    return coupling_tensor(config.xi, config.direction(), mode, gamma);
}

CouplingTensor without_collective_decay(const CouplingTensor& t) {
    return {kI * t.omega_part().cast<cplx>()};
}

std::pair<int, int> slot_indices(int slot) {
    static constexpr std::array<std::pair<int, int>, kTensorSlots> idx{
        {{0, 0}, {1, 1}, {2, 2}, {0, 1}, {0, 2}, {1, 2}}};
    if (slot < 0 || slot >= kTensorSlots) throw InputError("tensor slot out of range");
    return idx[static_cast<std::size_t>(slot)];
}

int slot_of(int k, int l) {
    if (k > l) std::swap(k, l);
    for (int s = 0; s < kTensorSlots; ++s) {
        if (slot_indices(s) == std::pair<int, int>{k, l}) return s;
    }
    throw InputError("slot_of: index out of range");
}

cplx slot_value(const Eigen::Matrix3cd& t, int slot) {
    auto [k, l] = slot_indices(slot);
    return t(k, l);
}

namespace {

struct PairDipoles {
    std::array<Op16, 3> a;  // D on atom alpha
    std::array<Op16, 3> b;  // D on atom beta
};

const PairDipoles& pair_dipoles() {
    static const PairDipoles d = [] {
        PairDipoles p;
        const auto c = dipole_components();
        const Op4 id = Op4::Identity();
        for (int k = 0; k < 3; ++k) {
            p.a[static_cast<std::size_t>(k)] = Eigen::kroneckerProduct(c[static_cast<std::size_t>(k)], id).eval();
            p.b[static_cast<std::size_t>(k)] = Eigen::kroneckerProduct(id, c[static_cast<std::size_t>(k)]).eval();
        }
        return p;
    }();
    return d;
}

// one ordering, split into the parts linear in T and in T*
// full:     D_a^+ T [Q, D_b] + [D_b^+, Q] T* D_a
// exchange: -D_a^+ T D_b Q - Q D_a^+ T* D_b
// decay:    D_a^+ (T + T*) Q D_b
Op16 ordered_term(const Eigen::Matrix3cd& t, const Eigen::Matrix3cd& tc, const Op16& q,
                  const std::array<Op16, 3>& da, const std::array<Op16, 3>& db,
                  InteractionPart part) {
    Op16 r = Op16::Zero();
    for (int k = 0; k < 3; ++k) {
        for (int l = 0; l < 3; ++l) {
            const cplx tkl = t(k, l);
            const cplx tckl = tc(k, l);
            if (tkl == 0.0 && tckl == 0.0) continue;
            const Op16& dak = da[static_cast<std::size_t>(k)];
            const Op16& dbl = db[static_cast<std::size_t>(l)];
            const Op16 dakh = dak.adjoint();
            switch (part) {
            case InteractionPart::full: {
                const Op16& dbk = db[static_cast<std::size_t>(k)];
                const Op16& dal = da[static_cast<std::size_t>(l)];
                const Op16 dbkh = dbk.adjoint();
                if (tkl != 0.0) r += tkl * dakh * (q * dbl - dbl * q);
                if (tckl != 0.0) r += tckl * (dbkh * q - q * dbkh) * dal;
                break;
            }
            case InteractionPart::exchange: {
                const Op16 hop = dakh * dbl;
                if (tkl != 0.0) r -= tkl * hop * q;
                if (tckl != 0.0) r -= tckl * q * hop;
                break;
            }
            case InteractionPart::collective_decay:
                r += (tkl + tckl) * dakh * q * dbl;
                break;
            }
        }
    }
    return r;
}

Op16 liouvillian_split(const Eigen::Matrix3cd& t, const Eigen::Matrix3cd& tc, const Op16& q,
                       InteractionPart part) {
    const auto& d = pair_dipoles();
    return ordered_term(t, tc, q, d.a, d.b, part) + ordered_term(t, tc, q, d.b, d.a, part);
}

}  // namespace

Op16 apply_interaction_liouvillian(const Eigen::Matrix3cd& t, const Op16& q, InteractionPart part) {
    return liouvillian_split(t, t.conjugate(), q, part);
}

InteractionMatrices interaction_matrices(const CouplingTensor& tensor, const TwoAtomBasis& basis) {
    InteractionMatrices m;
    m.v = basis.superoperator(
        [&](const Op16& q) { return apply_interaction_liouvillian(tensor.t, q, InteractionPart::full); });
    m.v1 = basis.superoperator(
        [&](const Op16& q) { return apply_interaction_liouvillian(tensor.t, q, InteractionPart::exchange); });
    m.v2 = basis.superoperator([&](const Op16& q) {
        return apply_interaction_liouvillian(tensor.t, q, InteractionPart::collective_decay);
    });
    return m;
}

InteractionDecomposition::InteractionDecomposition(const TwoAtomBasis& basis, InteractionPart part)
    : part_(part) {
    const Eigen::Matrix3cd zero = Eigen::Matrix3cd::Zero();
    for (int s = 0; s < kTensorSlots; ++s) {
        auto [k, l] = slot_indices(s);
        Eigen::Matrix3cd unit = Eigen::Matrix3cd::Zero();
        unit(k, l) = 1.0;
        unit(l, k) = 1.0;
        // operator form: V_H = sum T A + T* B; the state form is V_H^dagger,
        // so the coefficient of T there is B^dagger and that of T* is A^dagger
        const Superop a = basis.superoperator([&](const Op16& q) { return liouvillian_split(unit, zero, q, part); });
        const Superop b = basis.superoperator([&](const Op16& q) { return liouvillian_split(zero, unit, q, part); });
        x_[static_cast<std::size_t>(s)] = b.adjoint();
        y_[static_cast<std::size_t>(s)] = a.adjoint();
    }
}

const Superop& InteractionDecomposition::coefficient(int slot, bool conjugate) const {
    if (slot < 0 || slot >= kTensorSlots) throw InputError("tensor slot out of range");
    return conjugate ? y_[static_cast<std::size_t>(slot)] : x_[static_cast<std::size_t>(slot)];
}

Superop InteractionDecomposition::assemble(const Eigen::Matrix3cd& t) const {
    Superop v = Superop::Zero(kPairDim, kPairDim);
    for (int s = 0; s < kTensorSlots; ++s) {
        const cplx ts = slot_value(t, s);
        v += ts * x_[static_cast<std::size_t>(s)] + std::conj(ts) * y_[static_cast<std::size_t>(s)];
    }
    return v;
}

InteractionDecomposition InteractionDecomposition::without_collective_decay() const {
    // T -> (T - T*)/2
    InteractionDecomposition d = *this;
    d.without_decay_ = true;
    for (int s = 0; s < kTensorSlots; ++s) {
        const auto i = static_cast<std::size_t>(s);
        d.x_[i] = 0.5 * (x_[i] - y_[i]);
        d.y_[i] = 0.5 * (y_[i] - x_[i]);
    }
    return d;
}

}  // namespace mqc
