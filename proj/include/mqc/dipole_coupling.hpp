#pragma once

#include "mqc/operator_basis.hpp"

#include <array>

namespace mqc {

struct Configuration {
    double xi = 1.0;     // k0 r
    double theta = 0.0;  // polar angle of the interatomic axis
    double phi = 0.0;

    Eigen::Vector3d direction() const;
    void validate() const;
};

enum class TensorMode { exact, far_field, near_field };

struct CouplingTensor {
    Eigen::Matrix3cd t;

    Eigen::Matrix3d gamma_part() const { return t.real(); }
    Eigen::Matrix3d omega_part() const { return t.imag(); }
};

CouplingTensor coupling_tensor(const Configuration& config, TensorMode mode, double gamma);
CouplingTensor coupling_tensor(double xi, const Eigen::Vector3d& n, TensorMode mode, double gamma);
// T -> i Omega, i.e. the collective decay part removed
CouplingTensor without_collective_decay(const CouplingTensor& t);

// symmetric tensor slots: xx, yy, zz, xy, xz, yz
inline constexpr int kTensorSlots = 6;
std::pair<int, int> slot_indices(int slot);
int slot_of(int k, int l);
cplx slot_value(const Eigen::Matrix3cd& t, int slot);

enum class InteractionPart { full, exchange, collective_decay };

// Interaction Liouvillian in operator form, both pair orderings, applied to a 16x16 operator
Op16 apply_interaction_liouvillian(const Eigen::Matrix3cd& t, const Op16& q,
                                   InteractionPart part = InteractionPart::full);

// operator-form matrices, natural convention out = V in
struct InteractionMatrices {
    Superop v;
    Superop v1;
    Superop v2;
};

InteractionMatrices interaction_matrices(const CouplingTensor& tensor, const TwoAtomBasis& basis);

// State-form interaction split by tensor dependence:
//   V(T) = sum_slot T_slot X_slot + conj(T_slot) Y_slot
class InteractionDecomposition {
public:
    InteractionDecomposition() = default;
    InteractionDecomposition(const TwoAtomBasis& basis, InteractionPart part);

    const Superop& coefficient(int slot, bool conjugate) const;
    Superop assemble(const Eigen::Matrix3cd& t) const;
    InteractionPart part() const { return part_; }
    bool without_decay() const { return without_decay_; }

    // T -> i Omega substituted symbolically
    InteractionDecomposition without_collective_decay() const;

private:
    InteractionPart part_ = InteractionPart::full;
    bool without_decay_ = false;
    std::array<Superop, kTensorSlots> x_;
    std::array<Superop, kTensorSlots> y_;
};

}  // namespace mqc
