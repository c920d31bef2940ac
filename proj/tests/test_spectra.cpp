#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mqc/spectra.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <numbers>

using namespace mqc;
using P = PolarizationChannel;

namespace {
const double kPi = std::numbers::pi;

SpectrumRequest request(int kappa, Direction d, P c, double area = 0.01 * kPi, double xibar = 80.0) {
    SpectrumRequest r;
    r.kappa = kappa;
    r.channel = {d, c};
    r.area = area;
    r.xibar = xibar;
    return r;
}
}  // namespace

TEST_CASE("detection projection") {
    const TwoAtomBasis& b = *shared_basis();
    AveragedComponents a;
    a.order(0) = b.expand(Eigen::kroneckerProduct(cartesian_population(Polarization::x), sigma(1, 1)).eval());
    CHECK(std::abs(detection_projection(a, Direction::y, b)[2] - 1.0) < 1e-14);
    CHECK(std::abs(detection_projection(a, Direction::x, b)[2]) < 1e-14);
    AveragedComponents g;
    g.order(0) = b.expand(Eigen::kroneckerProduct(sigma(1, 1), sigma(1, 1)).eval());
    CHECK(std::abs(detection_projection(g, Direction::x, b)[2]) < 1e-15);
    CHECK(std::abs(detection_projection(g, Direction::y, b)[2]) < 1e-15);
}

TEST_CASE("pole products and their inverse transform") {
    const double g = 1.0;
    CHECK(PoleSets::count() == 55);
    const int single = PoleSets::index({1, -1, -1}, 1);
    CHECK(std::abs(PoleSets::factor(single, cplx(0.2, 0.3), g) - 1.0 / (cplx(0.2, 0.3) + 0.5)) < 1e-15);
    CHECK(PoleSets::inverse(single, 1.3, g) == doctest::Approx(std::exp(-0.65)));
    const int dbl = PoleSets::index({2, 2, -1}, 2);
    CHECK(PoleSets::inverse(dbl, 1.3, g) == doctest::Approx(1.3 * std::exp(-1.3)));
    const int triple = PoleSets::index({1, 2, 3}, 3);
    // numerical inverse through a Bromwich-free check: compare Laplace transforms by quadrature
    double lap = 0.0;
    const double s = 0.7, h = 1e-3;
    for (int i = 0; i < 60000; ++i) {
        const double t = (i + 0.5) * h;
        lap += std::exp(-s * t) * PoleSets::inverse(triple, t, g) * h;
    }
    CHECK(lap == doctest::Approx(PoleSets::factor(triple, s, g).real()).epsilon(1e-6));
}

TEST_CASE("perpendicular 1QC vanishes on the grid") {
    for (Direction d : {Direction::x, Direction::y}) {
        SpectrumRequest r = request(1, d, P::perpendicular, 0.14 * kPi);
        r.detuning = default_detuning_grid(101, 10.0);
        for (const cplx& v : spectrum(r).values) CHECK(std::abs(v) < 1e-15);
    }
}

TEST_CASE("Table 1 leading behaviour") {
    const double a = 0.01 * kPi;
    CHECK(normalized_peak(request(1, Direction::y, P::parallel)) == doctest::Approx(a * a).epsilon(1e-3));
    for (Direction d : {Direction::x, Direction::y}) {
        for (P c : {P::parallel, P::perpendicular}) CHECK(normalized_peak(request(2, d, c, 0.14 * kPi)) < 0.0);
    }
    const double r1 = normalized_peak(request(2, Direction::x, P::parallel)) /
                      normalized_peak(request(1, Direction::x, P::parallel));
    CHECK(r1 == doctest::Approx(-a * a / 32).epsilon(1e-2));
    for (double xb : {80.0, 160.0}) {
        for (double area : {0.01 * kPi, 0.02 * kPi}) {
            const double r = normalized_peak(request(2, Direction::y, P::parallel, area, xb)) /
                             normalized_peak(request(2, Direction::y, P::perpendicular, area, xb));
            CHECK(r == doctest::Approx(34.0).epsilon(1e-2));
        }
    }
    SpectrumRequest zero = request(2, Direction::y, P::parallel, 0.0);
    zero.detuning = {-1.0, 0.0, 2.0};
    for (const cplx& v : spectrum(zero).values) CHECK(v == cplx(0.0));
}

TEST_CASE("double scattering scales as 1 / xibar^2") {
    const double a80 = normalized_peak(request(1, Direction::x, P::parallel, 0.01 * kPi, 80.0));
    const double a160 = normalized_peak(request(1, Direction::x, P::parallel, 0.01 * kPi, 160.0));
    CHECK(a80 / a160 == doctest::Approx(4.0).epsilon(1e-3));
}

TEST_CASE("fast expansion agrees with the forward reference path") {
    for (int k : {1, 2}) {
        for (bool g0 : {false, true}) {
            // perpendicular series can vanish identically, so the tolerance is
            // set by the parallel signal of the same order
            double scale = 1e-300;
            for (P c : {P::parallel, P::perpendicular}) {
                SpectrumRequest r = request(k, Direction::x, c, 0.3);
                r.gamma_zero = g0;
                r.detuning = {-1.3, 0.0, 0.45};
                const SpectrumSeries fast = spectrum(r);
                const SpectrumSeries ref = spectrum_reference(r);
                for (const cplx& v : ref.values) scale = std::max(scale, std::abs(v));
                for (std::size_t i = 0; i < r.detuning.size(); ++i) {
                    CHECK(std::abs(fast.values[i] - ref.values[i]) <= 1e-10 * scale);
                }
            }
        }
    }
}

TEST_CASE("line shape symmetry and width") {
    SpectrumRequest r = request(1, Direction::y, P::parallel, 0.01 * kPi);
    r.detuning = {-2.0, -0.5, 0.0, 0.5, 2.0};
    const SpectrumSeries s = spectrum(r);
    CHECK(std::abs(s.values[0] - std::conj(s.values[4])) < 1e-12 * std::abs(s.values[2]));
    CHECK(std::abs(s.values[1] - std::conj(s.values[3])) < 1e-12 * std::abs(s.values[2]));
    // half maximum at gamma / 2
    CHECK(s.values[3].real() / s.values[2].real() == doctest::Approx(0.5).epsilon(2e-3));
}

TEST_CASE("z2 = 0 through the excised resolvent equals the epsilon limit") {
    for (int k : {1, 2}) {
        const PoleCrossCheck c = z2_pole_cross_check(request(k, Direction::x, P::parallel, 0.2), 0.4);
        CHECK(c.relative_difference < 1e-8);
    }
}

TEST_CASE("small-area fits") {
    const double c1 = fitted_leading_coefficient(1, {Direction::x, P::parallel}, 80.0, 0.005 * kPi, 0.01 * kPi);
    CHECK(c1 * 80.0 * 80.0 == doctest::Approx(0.3).epsilon(1e-2));
    const double e2 = fitted_area_exponent(2, {Direction::y, P::parallel}, 80.0, {0.005 * kPi, 0.01 * kPi});
    CHECK(e2 == doctest::Approx(4.0).epsilon(0.0125));
}

TEST_CASE("request validation") {
    SpectrumRequest r = request(3, Direction::x, P::parallel);
    r.detuning = {0.0};
    CHECK_THROWS_AS(spectrum(r), InputError);
    r.kappa = 1;
    r.xibar = -1;
    CHECK_THROWS_AS(spectrum(r), InputError);
}

TEST_CASE("dimensional helpers") {
    const double lambda0 = 790e-9;
    const double sigma0 = resonant_cross_section(lambda0);
    CHECK(sigma0 == doctest::Approx(3 * lambda0 * lambda0 / (2 * kPi)));
    CHECK(sigma0 == doctest::Approx(2.98e-13).epsilon(5e-3));
    const double g = 2 * kPi * 6e6;
    CHECK(mean_scattering_cross_section(lambda0, g, 1e-8 * g) == doctest::Approx(sigma0).epsilon(1e-6));
    // independent midpoint-rule average of the Lorentzian over the Gaussian detuning
    const double dbar = 2 * kPi * 560e6;
    const double s = std::sqrt(3.0) * dbar;
    double acc = 0.0;
    const int n = 400000;
    const double lim = 12.0 * s, h = 2 * lim / n;
    for (int i = 0; i < n; ++i) {
        const double d = -lim + (i + 0.5) * h;
        acc += std::exp(-0.5 * d * d / (s * s)) / (std::sqrt(2 * kPi) * s) / (1 + 4 * d * d / (g * g)) * h;
    }
    CHECK(mean_scattering_cross_section(lambda0, g, dbar) == doctest::Approx(sigma0 * acc).epsilon(1e-6));
    CHECK(mean_free_path(1e14, 1.14e-16) == doctest::Approx(88.0).epsilon(1e-2));

    const double omega0 = 2 * kPi * kSpeedOfLight / lambda0;
    const double gam = 2 * kPi * 6.067e6;
    const double d = dipole_from_gamma(gam, omega0);
    CHECK(std::abs(gamma_from_dipole(d, omega0) / gam - 1.0) < 1e-12);
    const double a1 = pulse_area_from_energy(1e-9, 1e-8, 1e-3, d);
    CHECK(pulse_area_from_energy(2e-9, 1e-8, 1e-3, d) / a1 == doctest::Approx(std::sqrt(2.0)));
    CHECK(pulse_area_from_energy(1e-9, 1e-8, 1e12, d) < 1e-6 * a1);
    CHECK(mean_distance_from_density(1e15) == doctest::Approx(0.554e-5));
}
