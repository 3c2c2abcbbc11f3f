#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "subrad/detection.hpp"
#include "subrad/ensemble.hpp"
#include "subrad/params.hpp"

namespace subrad {

// Invalid or malformed configuration; mapped to exit code 2 by the CLI.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr int scenario_schema_version = 1;

// One figure-reproducing experiment.  All config frequencies are plain Hz
// (not angular), lengths metres, temperatures uK, powers uW; conversion to
// internal angular units happens only at this boundary.
struct ScenarioConfig {
    std::string scenario;        // vrs-waterfall | power-sweep | scaling | raman |
                                 // calibrate | oracle-beta | cg-dump
    std::uint64_t seed = 1;
    std::string output_dir = "out";
    int threads = 1;

    SystemParams system;
    double eta_hz = 1.0e6;       // effective drive amplitude / 2 pi
    double power_uw = 16.0;
    std::vector<double> powers_uw = {10.0, 16.0, 32.0};  // power-sweep only

    std::vector<int> atom_numbers = {10000};
    double grid_half_span_hz = 50e6;
    int grid_points = 101;
    int realizations = 70;

    SamplerKind sampler = SamplerKind::lattice;
    SamplerConfig sampler_config;   // mf_probabilities resolved from the pumping
                                    // steady state unless given explicitly
    std::string coupling_mode = "effective"; // or "max"
    int lorentzian_components = 2;

    DetectionChain detection;
    bool counting = false;       // also emit Poisson count records + log-normal fits

    double calibration_detuning_hz = -90e6; // Delta_A for the calibrate scenario
    bool mf_explicit = false; // mf_probabilities were given, not derived

    // Boundary-unit 'system' object exactly as configured, so that resolved()
    // re-emits it verbatim and manifests are parse/emit fixed points.
    nlohmann::json system_json;

    static ScenarioConfig from_json(const nlohmann::json& j);
    static ScenarioConfig from_file(const std::string& path);
    nlohmann::json resolved() const; // full manifest, itself a valid config
};

// Runs the scenario and writes CSV data, JSON fit summaries and
// manifest.json under config.output_dir.  Returns 0 on success; throws
// ConfigError for bad configs, std::exception for numerical failures.
int run_scenario(const ScenarioConfig& config);

} // namespace subrad
