#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mqc/oracle.hpp"

using namespace mqc;

namespace {
constexpr int X = 0, Y = 1, Z = 2;
}

TEST_CASE("coupling scales") {
    CHECK(coupling_scale(80.0, 1.0) == doctest::Approx(std::pow(3.0 / (4.0 * 80.0), 2)));
    CHECK(window_coupling_scale(67.2, 92.8, 1.0) == doctest::Approx(0.5625 / (67.2 * 92.8)));
    CHECK_THROWS_AS(window_coupling_scale(5.0, 4.0, 1.0), InputError);
}

TEST_CASE("isotropic averages") {
    const double c = 0.37;
    CHECK(angular_average(X, Y, Z, X, c) == 0.0);
    CHECK(angular_average(X, X, X, X, c) == doctest::Approx(8.0 / 15.0 * c));
    CHECK(angular_average(X, Y, X, Y, c) == doctest::Approx(c / 15.0));
    CHECK(angular_average(X, X, Y, Y, c) == doctest::Approx(0.4 * c));
}

TEST_CASE("real-part averages") {
    const double c = 1.0;
    const double gg = gamma_omega_average(RealPartPair::gamma_gamma, Y, X, X, Y, c);
    CHECK(gg == doctest::Approx(0.5 * angular_average(X, Y, Y, X, c)));
    CHECK(gg != 0.0);
    CHECK(gamma_omega_average(RealPartPair::gamma_omega, Y, X, X, Y, c) == 0.0);
    for (int r : {Y, Z}) {
        CHECK(gamma_omega_average(RealPartPair::gamma_gamma, X, r, X, r, c) ==
              gamma_omega_average(RealPartPair::omega_omega, X, r, X, r, c));
    }
}

TEST_CASE("sampled tensor averages follow the isotropic formula") {
    const auto entries = monte_carlo_tensor_averages(20000, 67.2, 92.8, 7, TensorMode::exact);
    CHECK(entries.size() == 36);
    for (const auto& e : entries) CHECK(std::abs(e.mean - e.analytic) < 5.0 * e.std_error + 1e-12);
}

TEST_CASE("survival filter") {
    const CoefficientVector v = CoefficientVector::Ones(kPairDim);
    PhaseTaggedVector s;
    s.add({{1, 0, 0, 0}, {}}, v);
    s.add({{-1, 1, 0, 0}, TensorTag(std::vector<TensorFactor>{{0, false}, {1, true}})}, v);
    s.add({{0, 0, 0, 0}, TensorTag(std::vector<TensorFactor>{{0, false}, {1, false}})}, v);
    s.add({{0, 0, 0, 0}, TensorTag(std::vector<TensorFactor>{{2, false}})}, v);
    const PhaseTaggedVector f = survival_filter(s);
    CHECK(f.size() == 1);
    const PhaseMonomial& m = f.terms().begin()->first;
    CHECK(m.modulation_order() == 1);
    CHECK(m.tag.is_mixed());

    const double scale = 0.01;
    const AveragedComponents a = average_state(s, scale);
    CHECK((a.order(1) - angular_average(X, X, Y, Y, scale) * v).norm() < 1e-15);
    CHECK(a.order(0).norm() == 0.0);
    CHECK_THROWS_AS(a.order(3), InputError);

    const AveragedComponents empty = average_state(PhaseTaggedVector{}, scale);
    for (int l = -2; l <= 2; ++l) CHECK(empty.order(l).norm() == 0.0);
}

TEST_CASE("single scattering only reaches first-order modulation in the detector") {
    const ScatteringModel model(0.8, PolarizationChannel::parallel);
    const PhaseTaggedVector s0 = scattering_solution(0, cplx(0, 0.4), 0.5, model);
    const AveragedComponents a = average_state(s0, 0.01);
    for (Direction d : {Direction::x, Direction::y}) {
        const auto p = detection_projection(a, d, model.basis());
        CHECK(std::abs(p[0]) < 1e-14);
        CHECK(std::abs(p[4]) < 1e-14);
    }
    // uncoupled atoms emit along y only
    const auto px = detection_projection(a, Direction::x, model.basis());
    const auto py = detection_projection(a, Direction::y, model.basis());
    for (const cplx& v : px) CHECK(std::abs(v) < 1e-14);
    CHECK(std::abs(py[1]) > 1e-6);
    CHECK(std::abs(py[3]) > 1e-6);
    CHECK(std::abs(py[1] - py[3]) < 1e-12);
}

TEST_CASE("perpendicular 2QC needs collective decay") {
    const double scale = coupling_scale(80.0, 1.0);
    ExpansionOptions opt;
    opt.target_order = 2;
    opt.prune_position_phases = true;
    auto l2 = [&](bool gamma_zero) {
        const ScatteringModel m(0.5, PolarizationChannel::perpendicular, 1.0, InteractionPart::full, gamma_zero);
        const PhaseTaggedVector s2 = scattering_solution(2, cplx(0, 0.3), 0.0, m, opt);
        return detection_projection(average_state(s2, scale), Direction::y, m.basis())[4];
    };
    const cplx full = l2(false);
    CHECK(std::abs(full) > 1e-12);
    CHECK(std::abs(l2(true)) < 1e-9 * std::abs(full));
}
