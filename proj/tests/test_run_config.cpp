#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mqc/validation.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace mqc;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("mqc_test_" + name);
    fs::remove_all(p);
    return p;
}

}  // namespace

TEST_CASE("config validation") {
    RunConfig c = preset_config("fig4");
    CHECK_NOTHROW(c.validate());
    CHECK(c.resolved_area() == doctest::Approx(0.14 * 3.141592653589793));

    RunConfig e = c;
    e.kappa.clear();
    CHECK_THROWS_AS(e.validate(), InputError);

    RunConfig both = c;
    both.pulse_energy = 1e-9;
    both.pulse_duration = 1e-9;
    both.beam_waist = 1e-3;
    CHECK_THROWS_AS(both.validate(), InputError);

    RunConfig energy = both;
    energy.area.reset();
    CHECK_NOTHROW(energy.validate());
    CHECK(energy.resolved_area() > 0.0);

    RunConfig partial = energy;
    partial.beam_waist.reset();
    CHECK_THROWS_AS(partial.validate(), InputError);

    RunConfig dens = c;
    dens.xibar.reset();
    dens.density = 1e14;
    dens.mean_distance = mean_distance_from_density(1e14) * 1.005;
    CHECK_NOTHROW(dens.validate());
    dens.mean_distance = mean_distance_from_density(1e14) * 1.02;
    CHECK_THROWS_AS(dens.validate(), InputError);
    dens.mean_distance.reset();
    CHECK(dens.resolved_xibar() == doctest::Approx(2 * 3.141592653589793 / 790e-9 * mean_distance_from_density(1e14)));

    RunConfig neg = c;
    neg.area = -0.1;
    CHECK_THROWS_AS(neg.validate(), InputError);
    RunConfig k3 = c;
    k3.kappa = {1, 3};
    CHECK_THROWS_AS(k3.validate(), InputError);
    CHECK_THROWS_AS(preset_config("fig5"), InputError);
}

TEST_CASE("json round trip and overrides") {
    RunConfig c = preset_config("fig4");
    c.seed = 42;
    c.channels = {PolarizationChannel::perpendicular};
    const RunConfig d = config_from_json(config_to_json(c));
    CHECK(config_to_json(d) == config_to_json(c));
    const RunConfig e = config_from_json(R"({"preset": "table1", "kappa": [2], "xibar": 160})");
    CHECK(e.kappa == std::vector<int>{2});
    CHECK(*e.xibar == 160.0);
    CHECK(*e.area == doctest::Approx(0.01 * 3.141592653589793));
    CHECK_THROWS_AS(config_from_json("{not json"), InputError);
    CHECK_THROWS_AS(config_from_json(R"({"channels": ["diag"]})"), InputError);
}

TEST_CASE("fig4 preset writes 16 series, reproducibly") {
    RunConfig c = preset_config("fig4");
    c.grid_points = 31;
    c.output_dir = scratch("fig4").string();
    const RunOutput a = run_spectrum(c);
    CHECK(a.files.size() == 16);
    std::vector<std::string> first;
    for (const auto& f : a.files) first.push_back(slurp(fs::path(c.output_dir) / f));
    const std::string header = first[0].substr(0, first[0].find("\n# omega"));
    CHECK(header.find("f^2/gamma^2") != std::string::npos);
    CHECK(first[0].find("# omega_detuning_over_gamma Re_S Im_S") != std::string::npos);
    CHECK(slurp(a.sidecar).find("timestamp") != std::string::npos);

    const RunOutput b = run_spectrum(c);
    REQUIRE(b.files == a.files);
    for (std::size_t i = 0; i < b.files.size(); ++i) CHECK(slurp(fs::path(c.output_dir) / b.files[i]) == first[i]);
    fs::remove_all(c.output_dir);
}

TEST_CASE("Monte Carlo runs echo the seed and are reproducible") {
    RunConfig c = preset_config("fig4");
    c.monte_carlo = true;
    c.mc_samples = 30;
    c.mc_traces = 2;
    c.seed = 1234;
    c.kappa = {2};
    c.channels = {PolarizationChannel::parallel};
    c.directions = {Direction::y};
    c.with_gamma_zero_inset = false;
    c.grid_points = 11;
    c.output_dir = scratch("mc").string();
    const RunOutput a = run_spectrum(c);
    CHECK(a.files.size() == 3);
    const std::string mean = slurp(fs::path(c.output_dir) / a.files.back());
    CHECK(mean.find("seed 1234") != std::string::npos);
    CHECK(mean.find("stderr_Re_S") != std::string::npos);
    const RunOutput b = run_spectrum(c);
    CHECK(slurp(fs::path(c.output_dir) / b.files.back()) == mean);
    fs::remove_all(c.output_dir);
}

TEST_CASE("table1 output") {
    RunConfig c = preset_config("table1");
    c.output_dir = scratch("table1").string();
    const RunOutput o = run_table1(c);
    const std::string t = slurp(fs::path(c.output_dir) / "table1.dat");
    int rows = 0;
    std::istringstream in(t);
    for (std::string line; std::getline(in, line);) {
        if (!line.empty() && line[0] != '#') ++rows;
    }
    CHECK(rows == 8);
    CHECK(t.find("fitted_coefficient") != std::string::npos);
    fs::remove_all(c.output_dir);
}

TEST_CASE("validation report names failing criteria and echoes the seed") {
    ValidationOptions opt;
    opt.only = {"2"};
    opt.seed = 77;
    const ValidationReport ok = run_validation(opt);
    CHECK(ok.all_passed());
    opt.tolerance_overrides["2"] = 1e-9;
    const ValidationReport bad = run_validation(opt);
    CHECK(!bad.all_passed());
    CHECK(bad.text().find("FAIL 2") != std::string::npos);
    CHECK(bad.text().find("seed 77") != std::string::npos);
    CHECK(bad.json().find("\"seed\": 77") != std::string::npos);
}
