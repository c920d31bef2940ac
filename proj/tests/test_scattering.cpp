#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mqc/scattering.hpp"

#include <unsupported/Eigen/KroneckerProduct>

using namespace mqc;

namespace {

const TwoAtomBasis& basis() { return *shared_basis(); }

Op16 ground_pair() { return Eigen::kroneckerProduct(sigma(1, 1), sigma(1, 1)).eval(); }

bool has_exponents(const PhaseTaggedVector& v, auto pred) {
    for (const auto& [m, c] : v.terms()) {
        if (pred(m)) return true;
    }
    return false;
}

}  // namespace

TEST_CASE("initial vector") {
    const PhaseTaggedVector v = initial_vector(basis());
    CHECK(v.size() == 1);
    CHECK((basis().reconstruct(v.evaluate(Eigen::Matrix3cd::Zero())) - ground_pair()).norm() < 1e-15);
    CHECK(std::abs(v.terms().begin()->second(0) - 0.25) < 1e-15);
}

TEST_CASE("tensor tags") {
    const TensorTag a(std::vector<TensorFactor>{{3, true}, {1, false}});
    CHECK(a.degree() == 2);
    CHECK(a.is_mixed());
    CHECK(a.factors()[0] == TensorFactor{1, false});
    CHECK_THROWS_AS(a.times({0, false}), MisuseError);
    Eigen::Matrix3cd t;
    t << 1, cplx(0, 2), 3, cplx(0, 2), 5, 6, 3, 6, cplx(1, 1);
    CHECK(std::abs(a.evaluate(t) - t(1, 1) * std::conj(t(0, 1))) < 1e-15);
}

TEST_CASE("first pulse from the ground state") {
    const ScatteringModel model(0.9, PolarizationChannel::parallel);
    const PhaseTaggedVector v = apply_kick(initial_vector(basis()), 1, model);
    for (const auto& [m, c] : v.terms()) {
        for (int e : m.exponents) CHECK(std::abs(e) <= 1);
    }
    const ScatteringModel zero(0.0, PolarizationChannel::parallel);
    const PhaseTaggedVector u = apply_kick(initial_vector(basis()), 1, zero);
    CHECK(u.size() == 1);
    CHECK((u.evaluate(Eigen::Matrix3cd::Zero()) - initial_vector(basis()).evaluate(Eigen::Matrix3cd::Zero())).norm() <
          1e-15);
}

TEST_CASE("symbolic kicks agree with the exact pulse maps") {
    for (auto ch : {PolarizationChannel::parallel, PolarizationChannel::perpendicular}) {
        const ScatteringModel model(1.3, ch);
        const PhaseTaggedVector v = apply_kick(apply_kick(initial_vector(basis()), 1, model), 2, model);
        const std::array<double, 4> ph{0.3, -1.1, 2.0, 0.45};
        const CoefficientVector got = v.evaluate(Eigen::Matrix3cd::Zero(), ph);
        const Polarization p2 = ch == PolarizationChannel::parallel ? Polarization::x : Polarization::y;
        auto u = [&](Polarization p, double a, double b) {
            return Op16(Eigen::kroneckerProduct(kick_unitary(1.3, p, a), kick_unitary(1.3, p, b)));
        };
        const Op16 u1 = u(Polarization::x, ph[0], ph[2]);
        const Op16 u2 = u(p2, ph[1], ph[3]);
        const Op16 rho = u2 * u1 * ground_pair() * u1.adjoint() * u2.adjoint();
        CHECK((basis().reconstruct(got) - rho).norm() < 1e-13);
    }
}

TEST_CASE("perpendicular channel carries Zeeman-type phase differences") {
    const ScatteringModel model(0.9, PolarizationChannel::perpendicular);
    const PhaseTaggedVector v = apply_kick(apply_kick(initial_vector(basis()), 1, model), 2, model);
    CHECK(has_exponents(v, [](const PhaseMonomial& m) { return m.exponents[0] == 1 && m.exponents[1] == -1; }));
}

TEST_CASE("resolvent on tagged vectors") {
    const ScatteringModel model(0.5, PolarizationChannel::parallel);
    const PairDecay& decay = model.decay();
    PhaseTaggedVector v;
    const Op16 coh = Eigen::kroneckerProduct(sigma(1, 2), sigma(1, 1)).eval();
    v.add({}, basis().expand(coh));
    const cplx z1(0.0, 1.7);
    const PhaseTaggedVector r = apply_resolvent(v, decay, z1);
    CHECK((basis().reconstruct(r.evaluate(Eigen::Matrix3cd::Zero())) - coh / (z1 + 0.5)).norm() < 1e-13);

    PhaseTaggedVector g;
    g.add({}, basis().expand(ground_pair()));
    const cplx z(0.4, 0.2);
    CHECK((basis().reconstruct(apply_resolvent(g, decay, z).evaluate(Eigen::Matrix3cd::Zero())) - ground_pair() / z)
              .norm() < 1e-13);
    CHECK_THROWS_AS(apply_resolvent(g, decay, 0.0, SectorPolicy::excise_stationary), PoleError);

    const double big = 1e7;
    const CoefficientVector far = apply_resolvent(v, decay, big).evaluate(Eigen::Matrix3cd::Zero());
    CHECK(std::abs(far.norm() * big / v.evaluate(Eigen::Matrix3cd::Zero()).norm() - 1.0) < 1e-6);
}

TEST_CASE("interaction raises the tensor degree") {
    const ScatteringModel model(0.9, PolarizationChannel::parallel);
    const PhaseTaggedVector k = apply_kick(initial_vector(basis()), 1, model);
    const PhaseTaggedVector once = apply_interaction(k, model.interaction());
    CHECK(!once.empty());
    for (const auto& [m, c] : once.terms()) CHECK(m.tag.degree() == 1);
    const PhaseTaggedVector twice = apply_interaction(once, model.interaction());
    bool mixed = false;
    for (const auto& [m, c] : twice.terms()) {
        CHECK(m.tag.degree() == 2);
        mixed = mixed || m.tag.is_mixed();
    }
    CHECK(mixed);
    CHECK_THROWS_AS(apply_interaction(twice, model.interaction()), MisuseError);
}

TEST_CASE("exchange-only interaction moves a Zeeman coherence onto the partner atom") {
    const ScatteringModel model(0.9, PolarizationChannel::perpendicular, 1.0, InteractionPart::exchange, false);
    // |y><x| on atom alpha, ground on beta
    const Eigen::Vector4cd x = cartesian_state(Polarization::x), y = cartesian_state(Polarization::y);
    const Op16 z = Eigen::kroneckerProduct(Op4(y * x.adjoint()), sigma(1, 1)).eval();
    PhaseTaggedVector v;
    v.add({}, basis().expand(z));
    const Configuration cfg{3.0, 0.8, 0.4};
    const Eigen::Matrix3cd t = coupling_tensor(cfg, TensorMode::exact, 1.0).t;
    const Op16 out = basis().reconstruct(apply_interaction(v, model.interaction()).evaluate(t));
    // beta picks up an electronic coherence (one leg excited, one leg ground)
    double partner = 0.0;
    for (int i = 0; i < 16; ++i) {
        for (int j = 0; j < 16; ++j) {
            const bool beta_coherence = (i % 4 == 0) != (j % 4 == 0);
            if (beta_coherence) partner = std::max(partner, std::abs(out(i, j)));
        }
    }
    CHECK(partner > 1e-3);
}

TEST_CASE("scattering solutions") {
    const ScatteringModel model(0.8, PolarizationChannel::parallel);
    const cplx z1(0.0, 0.7), z2(0.3, 0.0);
    const PhaseTaggedVector s0 = scattering_solution(0, z1, z2, model);
    // without interaction the atoms stay uncorrelated, so a detector (a sum of one-atom
    // operators) only sees orders 0 and +-1; product terms of order 2 are traceless
    Op16 det = Op16::Zero();
    for (int i = 2; i <= 4; ++i) {
        det += Eigen::kroneckerProduct(sigma(i, i), Op4::Identity()).eval();
        det += Eigen::kroneckerProduct(Op4::Identity(), sigma(i, i)).eval();
    }
    const CoefficientRow row = basis().expectation_row(det);
    for (const auto& [m, c] : s0.terms()) {
        CHECK(m.tag.degree() == 0);
        if (std::abs(m.modulation_order()) == 2) CHECK(std::abs((row * c)(0)) < 1e-14);
    }
    const PhaseTaggedVector s2 = scattering_solution(2, z1, z2, model);
    CHECK(has_exponents(s2, [](const PhaseMonomial& m) { return std::abs(m.modulation_order()) == 2; }));
    CHECK_THROWS_AS(scattering_solution(3, z1, z2, model), InputError);

    // symbolic tags evaluated at a configuration = numeric interaction inserted directly
    const Eigen::Matrix3cd t = coupling_tensor(Configuration{6.0, 1.0, 2.0}, TensorMode::exact, 1.0).t;
    const Superop v = model.interaction().assemble(t);
    const std::array<double, 4> ph{0.2, 0.9, -0.4, 1.6};
    const CoefficientVector a = s2.evaluate(t, ph);
    const CoefficientVector b = scattering_solution_fixed(2, z1, z2, model, v).evaluate(t, ph);
    CHECK((a - b).norm() < 1e-12 * b.norm());
}
