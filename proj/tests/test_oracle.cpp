#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mqc/oracle.hpp"

#include <numbers>

using namespace mqc;
using P = PolarizationChannel;

namespace {
const double kPi = std::numbers::pi;
}

TEST_CASE("demodulation") {
    std::vector<double> c(8, 2.5);
    CHECK(std::abs(numeric_demodulate(c, 0) - 2.5) < 1e-15);
    for (int l : {-2, -1, 1, 2}) CHECK(std::abs(numeric_demodulate(c, l)) < 1e-15);
    std::vector<double> cs;
    for (int k = 0; k < 8; ++k) cs.push_back(std::cos(2 * kPi * k / 8));
    CHECK(std::abs(numeric_demodulate(cs, 1) - 0.5) < 1e-15);
    CHECK(std::abs(numeric_demodulate(cs, -1) - 0.5) < 1e-15);
    CHECK(std::abs(numeric_demodulate(cs, 2)) < 1e-15);
    CHECK_THROWS_AS(numeric_demodulate(std::vector<double>(4, 1.0), 1), InputError);
}

TEST_CASE("matrix-exponential kick equals the closed form") {
    for (auto p : {Polarization::x, Polarization::y, Polarization::z}) {
        for (double a : {0.1, 1.0, kPi, 4.0}) {
            CHECK((oracle_kick_unitary(a, p, 0.8) - kick_unitary(a, p, 0.8)).norm() < 1e-13);
        }
    }
}

TEST_CASE("generator equals the analytic propagator derivative") {
    const TwoAtomBasis& b = *shared_basis();
    const Eigen::Matrix3cd t = coupling_tensor(Configuration{5.0, 0.9, 0.4}, TensorMode::exact, 1.0).t;
    const Superop l = oracle_generator(t, 1.0, b);
    const PairDecay decay(1.0, b.single());
    const InteractionDecomposition inter(b, InteractionPart::full);
    const double h = 1e-6;
    const Superop id = Superop::Identity(kPairDim, kPairDim);
    const Superop d1 = (decay.propagator(h) - id) / h;
    const Superop d2 = (decay.propagator(0.5 * h) - id) / (0.5 * h);
    const Superop fd = 2.0 * d2 - d1 + inter.assemble(t);
    CHECK((fd - l).cwiseAbs().maxCoeff() < 1e-8 * l.cwiseAbs().maxCoeff());
    CHECK((oracle_decay_generator(1.0, b) - decay.generator()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("single pulse without interaction") {
    OracleRun run;
    run.configuration = {1e6, 0.3, 0.2};
    run.area = 0.9;
    const std::vector<double> times{0.0, 0.5, 1.0, 3.0};
    const auto traj = evolve_trajectory(run, -1.0, 0.0, times);
    const double s2 = std::pow(std::sin(0.45), 2);
    for (const auto& s : traj) CHECK(s.excited_population == doctest::Approx(2 * s2 * std::exp(-s.time)).epsilon(1e-5));
    run.area = 0.0;
    for (const auto& s : evolve_trajectory(run, 1.0, 0.3, times)) {
        CHECK(std::abs(s.intensity[0]) < 1e-15);
        CHECK(std::abs(s.intensity[1]) < 1e-15);
    }
}

TEST_CASE("trajectories stay physical") {
    OracleRun run;
    run.configuration = {0.8, 1.1, 0.2};
    run.area = 2.0;
    run.channel = P::perpendicular;
    std::vector<double> times;
    for (int i = 0; i <= 20; ++i) times.push_back(0.5 * i);
    for (const auto& s : evolve_trajectory(run, 0.7, 1.3, times, 0.4, 2.1)) {
        CHECK(std::abs(s.trace - 1.0) < 1e-10);
        CHECK(s.hermiticity_error < 1e-10);
        CHECK(s.min_population > -1e-10);
        CHECK(s.max_population < 1 + 1e-10);
    }
}

TEST_CASE("oracle agrees with the analytic expansion at large distance") {
    OracleRun run;
    run.configuration = {1000.0, 2.2, 4.0};
    run.area = 0.14 * kPi;
    run.tau = {0.5, 2.0};
    for (P c : {P::parallel, P::perpendicular}) {
        run.channel = c;
        const OracleComparison cmp = compare_with_oracle(run);
        for (const auto& d : cmp.relative_error) {
            for (double e : d) CHECK(e < 1e-4);
        }
    }
}

TEST_CASE("perpendicular 1QC is a pure double-scattering effect at fixed configuration") {
    // it only vanishes after the orientation average; at fixed n it is O(T^2)
    OracleRun run;
    run.configuration = {1e4, 0.9, 0.3};
    run.area = 0.5;
    run.tau = {1.0};
    run.channel = P::perpendicular;
    const OracleResult perp = time_domain_evolve(run);
    run.channel = P::parallel;
    const OracleResult par = time_domain_evolve(run);
    CHECK(std::abs(perp.harmonics[0][1][3]) < 1e-6 * std::abs(par.harmonics[0][1][3]));
}

TEST_CASE("counter-based sampling") {
    CHECK(uniform_sample(1, 5, 0) == uniform_sample(1, 5, 0));
    CHECK(uniform_sample(1, 5, 0) != uniform_sample(2, 5, 0));
    double mean = 0.0;
    for (std::uint64_t i = 0; i < 20000; ++i) {
        const double u = uniform_sample(3, i, 1);
        CHECK((u >= 0.0 && u < 1.0));
        mean += u / 20000;
    }
    CHECK(mean == doctest::Approx(0.5).epsilon(0.02));
    const SampledConfiguration c = sample_configuration(9, 4, 67.2, 92.8);
    CHECK((c.xi >= 67.2 && c.xi <= 92.8));
    CHECK(c.direction.norm() == doctest::Approx(1.0));
}

TEST_CASE("Monte Carlo spectra") {
    MonteCarloRequest r;
    r.kappa = 2;
    r.channel = {Direction::y, P::parallel};
    r.detuning = {-1.0, 0.0, 1.0};
    r.samples = 40;
    r.keep_traces = 1;
    const MonteCarloResult a = monte_carlo_spectrum(r);
    const MonteCarloResult b = monte_carlo_spectrum(r);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(a.mean.values[i] == b.mean.values[i]);
        CHECK(a.mean.stderr_re[i] > 0.0);
    }
    // one sample reproduces the first background trace
    r.samples = 1;
    const MonteCarloResult one = monte_carlo_spectrum(r);
    for (std::size_t i = 0; i < 3; ++i) CHECK(one.mean.values[i] == a.traces[0][i]);
    CHECK(one.mean.stderr_re[0] == 0.0);
    r.samples = 0;
    CHECK_THROWS_AS(monte_carlo_spectrum(r), InputError);
}

TEST_CASE("Monte Carlo converges to the analytic average") {
    MonteCarloRequest r;
    r.kappa = 1;
    r.channel = {Direction::x, P::parallel};
    r.detuning = {0.0, 0.7};
    r.samples = 20000;
    r.mixed_only = true;
    const MonteCarloResult m = monte_carlo_spectrum(r);
    SpectrumRequest s;
    s.kappa = 1;
    s.channel = r.channel;
    s.detuning = r.detuning;
    s.xibar = std::sqrt(67.2 * 92.8);
    const SpectrumSeries an = spectrum(s);
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(std::abs(m.mean.values[i].real() - an.values[i].real()) < 4 * m.mean.stderr_re[i]);
    }
}
