#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "subrad/multilevel.hpp"
#include "subrad/scenario.hpp"

using namespace subrad;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::path("scenario_test_out") / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

} // namespace

TEST_CASE("config parsing: defaults, errors, unit boundaries") {
    ScenarioConfig config = ScenarioConfig::from_json(json{{"scenario", "cg-dump"}});
    CHECK(config.seed == 1);
    CHECK(config.realizations == 70);
    CHECK(config.sampler == SamplerKind::lattice);

    CHECK_THROWS_AS(ScenarioConfig::from_json(json{{"scenario", "nope"}}), ConfigError);
    CHECK_THROWS_AS(ScenarioConfig::from_json(json{}), ConfigError);
    CHECK_THROWS_AS(ScenarioConfig::from_json(
                        json{{"scenario", "cg-dump"}, {"realizations", "many"}}),
                    ConfigError);
    CHECK_THROWS_AS(ScenarioConfig::from_json(
                        json{{"scenario", "cg-dump"}, {"threads", 0}}),
                    ConfigError);
    CHECK_THROWS_AS(ScenarioConfig::from_json(
                        json{{"scenario", "cg-dump"}, {"grid", {{"points", 1}}}}),
                    ConfigError);
    CHECK_THROWS_AS(ScenarioConfig::from_json(
                        json{{"scenario", "cg-dump"}, {"atom_numbers", json::array()}}),
                    ConfigError);
    CHECK_THROWS_AS(
        ScenarioConfig::from_json(json{
            {"scenario", "cg-dump"},
            {"sampler", {{"mf_probabilities", {0.5, 0.5}}}}}),
        ConfigError);
    CHECK_THROWS_AS(ScenarioConfig::from_json(
                        json{{"scenario", "cg-dump"}, {"schema_version", 99}}),
                    ConfigError);
    CHECK_THROWS_AS(ScenarioConfig::from_json(
                        json{{"scenario", "cg-dump"},
                             {"system", {{"kappa_hz", -1.0}}}}),
                    ConfigError);

    // Frequencies cross the boundary in plain Hz.
    config = ScenarioConfig::from_json(
        json{{"scenario", "cg-dump"}, {"system", {{"kappa_hz", 5e6}}}});
    CHECK(config.system.kappa == doctest::Approx(two_pi * 5e6));
}

TEST_CASE("default m_F populations come from the pumping steady state") {
    const ScenarioConfig config =
        ScenarioConfig::from_json(json{{"scenario", "cg-dump"}});
    const PopulationDistribution steady = pumping_steady_state(
        clebsch_gordan_table(config.system.gamma),
        {Polarization::sigma_plus, Polarization::sigma_minus});
    for (std::size_t i = 0; i < 5; ++i)
        CHECK(config.sampler_config.mf_probabilities[i] ==
              doctest::Approx(steady.p[i]).epsilon(1e-12));

    // Explicit probabilities win.
    const ScenarioConfig pinned = ScenarioConfig::from_json(
        json{{"scenario", "cg-dump"},
             {"sampler", {{"mf_probabilities", {0.0, 0.0, 1.0, 0.0, 0.0}}}}});
    CHECK(pinned.sampler_config.mf_probabilities[2] == 1.0);
}

TEST_CASE("resolved manifest is itself a valid, fixed-point config") {
    ScenarioConfig config = ScenarioConfig::from_json(
        json{{"scenario", "oracle-beta"},
             {"seed", 9},
             {"atom_numbers", {100, 200, 400, 800}},
             {"realizations", 120}});
    const json manifest = config.resolved();
    const ScenarioConfig reparsed = ScenarioConfig::from_json(manifest);
    CHECK(reparsed.resolved() == manifest);
    CHECK(reparsed.seed == 9);
    CHECK(manifest.at("schema_version").get<int>() == scenario_schema_version);
}

TEST_CASE("cg-dump scenario writes the audit table") {
    ScenarioConfig config;
    config.scenario = "cg-dump";
    config.output_dir = fresh_dir("cg").string();
    CHECK(run_scenario(config) == 0);
    const fs::path out(config.output_dir);
    CHECK(fs::exists(out / "manifest.json"));
    CHECK(fs::exists(out / "summary.json"));
    const std::string csv = slurp(out / "cg_table.csv");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 16); // header + 15 rows
}

TEST_CASE("oracle-beta scenario: exponents and byte-identical reruns") {
    ScenarioConfig config = ScenarioConfig::from_json(
        json{{"scenario", "oracle-beta"},
             {"seed", 4},
             {"atom_numbers", {100, 200, 400, 800}},
             {"realizations", 400},
             {"sampler", {{"kind", "uniform"}}}});

    config.output_dir = (fresh_dir("oracle_a")).string();
    REQUIRE(run_scenario(config) == 0);
    const json summary_a =
        json::parse(slurp(fs::path(config.output_dir) / "summary.json"));
    CHECK(summary_a.at("beta").get<double>() == doctest::Approx(1.0).epsilon(0.2));

    const std::string csv_a = slurp(fs::path(config.output_dir) / "oracle_beta.csv");
    config.output_dir = (fresh_dir("oracle_b")).string();
    REQUIRE(run_scenario(config) == 0);
    CHECK(slurp(fs::path(config.output_dir) / "oracle_beta.csv") == csv_a);
    CHECK(json::parse(slurp(fs::path(config.output_dir) / "summary.json")) == summary_a);

    // Commensurate control: beta = 2 to numerical identity.
    config.sampler = SamplerKind::commensurate;
    config.realizations = 100;
    config.output_dir = (fresh_dir("oracle_c")).string();
    REQUIRE(run_scenario(config) == 0);
    const json summary_c =
        json::parse(slurp(fs::path(config.output_dir) / "summary.json"));
    CHECK(summary_c.at("beta").get<double>() == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("vrs-waterfall scenario produces spectra and a parabola fit") {
    ScenarioConfig config = ScenarioConfig::from_json(
        json{{"scenario", "vrs-waterfall"},
             {"seed", 2},
             {"atom_numbers", {3000, 6000, 12000}},
             {"realizations", 12},
             {"grid", {{"half_span_hz", 40e6}, {"points", 61}}},
             {"coupling_mode", "max"},
             {"sampler", {{"kind", "lattice"}, {"radial_cloud_rms_m", 0.0}}}});
    config.output_dir = fresh_dir("vrs").string();
    REQUIRE(run_scenario(config) == 0);

    const fs::path out(config.output_dir);
    for (int n : {3000, 6000, 12000})
        CHECK(fs::exists(out / ("spectrum_N" + std::to_string(n) + ".csv")));
    const json summary = json::parse(slurp(out / "summary.json"));
    REQUIRE(summary.contains("parabola"));
    const double g_fit = summary.at("parabola").at("g_eff_hz").get<double>();
    // Loose sanity bound for this short run; the tight 5% case is covered by
    // the acceptance suite.
    CHECK(g_fit == doctest::Approx(0.33e6).epsilon(0.15));

    const std::string csv = slurp(out / "spectrum_N3000.csv");
    CHECK(csv.rfind("delta_hz,mean_intensity,var_intensity,mean_rate_cps,"
                    "sem_amplitude,n_realizations\n", 0) == 0);
}

TEST_CASE("run_scenario rejects a bad coupling mode") {
    ScenarioConfig config = ScenarioConfig::from_json(
        json{{"scenario", "vrs-waterfall"}, {"atom_numbers", {100}}});
    config.coupling_mode = "broken";
    config.output_dir = fresh_dir("badmode").string();
    CHECK_THROWS_AS(run_scenario(config), ConfigError);
}

TEST_CASE("from_file reports unreadable and malformed files") {
    CHECK_THROWS_AS(ScenarioConfig::from_file("does_not_exist.json"), ConfigError);
    const fs::path dir = fresh_dir("badfile");
    const fs::path bad = dir / "broken.json";
    std::ofstream(bad) << "{ not json";
    CHECK_THROWS_AS(ScenarioConfig::from_file(bad.string()), ConfigError);
}
