#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mqc/dipole_coupling.hpp"
#include "mqc/single_atom.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <numbers>

using namespace mqc;

namespace {

const double kPi = std::numbers::pi;

const TwoAtomBasis& basis() {
    static const TwoAtomBasis b{SingleAtomBasis()};
    return b;
}

Op16 hermitian(int seed) {
    Op16 a;
    for (int i = 0; i < 16; ++i) {
        for (int j = 0; j < 16; ++j) a(i, j) = cplx(std::sin(seed + i * 0.37 + j), std::cos(seed - i + 0.21 * j));
    }
    return a + a.adjoint();
}

// excitation number of product state index 0..15 (atom alpha = index / 4)
int excitation(int i) { return (i / 4 != 0) + (i % 4 != 0); }

}  // namespace

TEST_CASE("tensor geometry along z") {
    const CouplingTensor t = coupling_tensor(7.3, Eigen::Vector3d::UnitZ(), TensorMode::exact, 1.0);
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            if (i != j) CHECK(std::abs(t.t(i, j)) < 1e-15);
        }
    }
    CHECK(std::abs(t.t(0, 0) - t.t(1, 1)) < 1e-15);
}

TEST_CASE("tensor limits") {
    const Configuration cfg{150.0, 0.8, 2.1};
    const Eigen::Vector3d n = cfg.direction();
    const Eigen::Matrix3d tr = Eigen::Matrix3d::Identity() - n * n.transpose();
    const double g = 1.0;
    const CouplingTensor ff = coupling_tensor(cfg, TensorMode::far_field, g);
    const double xi = cfg.xi;
    CHECK((ff.gamma_part() - 0.75 * g * std::sin(xi) / xi * tr).norm() < 1e-14);
    CHECK((ff.omega_part() - 0.75 * g * std::cos(xi) / xi * tr).norm() < 1e-14);
    const CouplingTensor ex = coupling_tensor(cfg, TensorMode::exact, g);
    CHECK((ex.t - ex.t.transpose()).norm() < 1e-15);
    CHECK((ex.t - ff.t).cwiseAbs().maxCoeff() <= 3.0 * g / (xi * xi));

    const double th = 0.6;
    const Configuration nf{0.01, th, 0.0};
    const CouplingTensor nt = coupling_tensor(nf, TensorMode::near_field, g);
    const cplx expect = -kI * 0.75 * g * (1 - 3 * std::cos(th) * std::cos(th)) / std::pow(0.01, 3);
    CHECK(std::abs(nt.t(2, 2) - expect) < 1e-12 * std::abs(expect));
    const CouplingTensor et = coupling_tensor(nf, TensorMode::exact, g);
    CHECK((et.t - nt.t).norm() <= 1e-3 * nt.t.norm());
    CHECK_THROWS_AS(coupling_tensor(0.0, Eigen::Vector3d::UnitZ(), TensorMode::exact, g), InputError);
}

TEST_CASE("slots") {
    for (int s = 0; s < kTensorSlots; ++s) {
        auto [k, l] = slot_indices(s);
        CHECK(slot_of(k, l) == s);
        CHECK(slot_of(l, k) == s);
    }
    CHECK_THROWS(slot_indices(6));
}

TEST_CASE("V = V1 + V2 and vanishing V2 without collective decay") {
    const CouplingTensor t = coupling_tensor(Configuration{4.2, 1.0, 0.3}, TensorMode::exact, 1.0);
    const InteractionMatrices m = interaction_matrices(t, basis());
    CHECK((m.v - m.v1 - m.v2).cwiseAbs().maxCoeff() < 1e-12);
    const InteractionMatrices m0 = interaction_matrices(without_collective_decay(t), basis());
    CHECK(m0.v2.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("V1 couples populations to electronic coherences") {
    const CouplingTensor t = coupling_tensor(Configuration{3.1, 0.7, 1.9}, TensorMode::exact, 1.0);
    const InteractionMatrices m = interaction_matrices(t, basis());
    const std::array<Polarization, 3> pol{Polarization::x, Polarization::y, Polarization::z};
    const Eigen::Vector4cd g = Eigen::Vector4cd::Unit(0);
    for (int f = 0; f < 3; ++f) {
        const Eigen::Vector4cd ef = cartesian_state(pol[static_cast<std::size_t>(f)]);
        const Op16 q = Eigen::kroneckerProduct(sigma(1, 1), Op4(ef * ef.adjoint())).eval();
        const Op16 out = basis().reconstruct(m.v1 * basis().expand(q));
        for (int r = 0; r < 3; ++r) {
            for (int j = 0; j < 3; ++j) {
                const Eigen::Vector4cd er = cartesian_state(pol[static_cast<std::size_t>(r)]);
                const Eigen::Vector4cd ej = cartesian_state(pol[static_cast<std::size_t>(j)]);
                const Op16 target = Eigen::kroneckerProduct(Op4(er * g.adjoint()), Op4(g * ej.adjoint())).eval();
                const cplx c = (target.adjoint() * out).trace();
                const cplx expect = j == f ? -kI * t.t(r, j).imag() - t.t(r, j).real() : cplx(0.0);
                CHECK(std::abs(c - expect) < 1e-13);
            }
        }
    }
}

TEST_CASE("excitation bookkeeping in the matrix-unit basis") {
    const CouplingTensor t = coupling_tensor(Configuration{2.0, 0.4, 0.9}, TensorMode::exact, 1.0);
    for (int a = 0; a < 16; ++a) {
        for (int b = 0; b < 16; ++b) {
            Op16 e = Op16::Zero();
            e(a, b) = 1.0;
            const Op16 v1 = apply_interaction_liouvillian(t.t, e, InteractionPart::exchange);
            const Op16 v2 = apply_interaction_liouvillian(t.t, e, InteractionPart::collective_decay);
            for (int i = 0; i < 16; ++i) {
                for (int j = 0; j < 16; ++j) {
                    if (std::abs(v1(i, j)) > 0) {
                        CHECK(excitation(i) == excitation(a));
                        CHECK(excitation(j) == excitation(b));
                    }
                    // operator form raises both sides; the state form lowers them
                    if (std::abs(v2(i, j)) > 0) {
                        CHECK(excitation(i) == excitation(a) + 1);
                        CHECK(excitation(j) == excitation(b) + 1);
                    }
                }
            }
        }
    }
}

TEST_CASE("Hermiticity and trace") {
    const CouplingTensor t = coupling_tensor(Configuration{1.5, 2.0, 0.1}, TensorMode::exact, 1.0);
    const InteractionDecomposition dec(basis(), InteractionPart::full);
    const Superop v = dec.assemble(t.t);
    for (int seed : {1, 2, 3}) {
        const Op16 q = hermitian(seed);
        const Op16 h = apply_interaction_liouvillian(t.t, q);
        CHECK((h - h.adjoint()).norm() < 1e-12 * h.norm());
        const Op16 s = basis().reconstruct(v * basis().expand(q));
        CHECK((s - s.adjoint()).norm() < 1e-12 * s.norm());
        CHECK(std::abs(s.trace()) < 1e-12 * s.norm());
    }
}

TEST_CASE("decomposition reassembles the state-form interaction") {
    const CouplingTensor t = coupling_tensor(Configuration{5.5, 1.2, 2.4}, TensorMode::exact, 1.0);
    for (auto part : {InteractionPart::full, InteractionPart::exchange, InteractionPart::collective_decay}) {
        const InteractionDecomposition dec(basis(), part);
        const Superop vh = basis().superoperator([&](const Op16& q) { return apply_interaction_liouvillian(t.t, q, part); });
        CHECK((dec.assemble(t.t) - vh.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
    }
    const InteractionDecomposition full(basis(), InteractionPart::full);
    const InteractionDecomposition g0 = full.without_collective_decay();
    CHECK(g0.without_decay());
    const Eigen::Matrix3cd io = without_collective_decay(t).t;
    CHECK((g0.assemble(t.t) - full.assemble(io)).cwiseAbs().maxCoeff() < 1e-12);
}
