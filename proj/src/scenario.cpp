#include "subrad/scenario.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "subrad/analysis.hpp"
#include "subrad/multilevel.hpp"
#include "subrad/rng.hpp"
#include "subrad/scattering.hpp"

namespace subrad {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* artifact_version = "subrad 1.0.0";

const std::set<std::string> known_scenarios = {
    "vrs-waterfall", "power-sweep", "scaling", "raman",
    "calibrate",     "oracle-beta", "cg-dump"};

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

template <typename T>
T field(const json& j, const std::string& key, const T& fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError("config field '" + key + "' has the wrong type");
    }
}

json system_to_json(const SystemParams& system) {
    return json{{"kappa_hz", system.kappa / two_pi},
                {"kappa_t_hz", system.kappa_T / two_pi},
                {"gamma_hz", system.gamma / two_pi},
                {"g_max_hz", system.g_max / two_pi},
                {"lambda_probe_m", system.lambda_probe},
                {"lambda_trap_m", system.lambda_trap},
                {"cavity_length_m", system.cavity_length},
                {"mode_waist_m", system.mode_waist},
                {"trap_depth_uk", system.trap_depth * 1e6},
                {"temperature_uk", system.temperature * 1e6},
                {"drive_waist_m", system.drive_waist}};
}

struct SpectrumCsvRow {
    double delta, mean_i, var_i, rate;
};

std::string spectrum_csv(const SpectrumResult& spectrum, const SystemParams& params,
                         const DetectionChain& chain) {
    std::string csv = "delta_hz,mean_intensity,var_intensity,mean_rate_cps,"
                      "sem_amplitude,n_realizations\n";
    for (std::size_t i = 0; i < spectrum.size(); ++i) {
        csv += num(spectrum.detunings[i] / two_pi) + ',' +
               num(spectrum.mean_intensity[i]) + ',' + num(spectrum.var_intensity[i]) +
               ',' +
               num(photon_rate_from_intensity(spectrum.mean_intensity[i], params, chain)) +
               ',' + num(spectrum.sem_amplitude[i]) + ',' +
               std::to_string(spectrum.n_realizations) + '\n';
    }
    return csv;
}

std::vector<double> sem_of(const SpectrumResult& spectrum) {
    std::vector<double> sem(spectrum.size());
    for (std::size_t i = 0; i < spectrum.size(); ++i)
        sem[i] = std::sqrt(spectrum.var_intensity[i] /
                           std::max(spectrum.n_realizations, 1));
    return sem;
}

double mean_effective_atom_number(const ScenarioConfig& config, int n_atoms,
                                  std::uint64_t seed, int samples = 32) {
    double mean = 0.0;
    for (int s = 0; s < samples; ++s) {
        const AtomEnsemble e =
            sample_ensemble(config.sampler, config.system, n_atoms,
                            derive_seed(seed, 0xeffull + static_cast<std::uint64_t>(s)),
                            config.sampler_config);
        mean += (effective_atom_number(e, config.system) - mean) / (s + 1);
    }
    return mean;
}

json peaks_json(const RabiPeaks& peaks) {
    return json{{"delta_minus_hz", peaks.delta_minus / two_pi},
                {"delta_plus_hz", peaks.delta_plus / two_pi},
                {"width_minus_hz", peaks.width_minus / two_pi},
                {"width_plus_hz", peaks.width_plus / two_pi},
                {"height_minus", peaks.height_minus},
                {"height_plus", peaks.height_plus}};
}

struct Resolved {
    LevelScheme scheme;
    PopulationDistribution pop;
    double g = 0.0;
    std::vector<double> grid;
    SweepOptions sweep;
};

Resolved resolve(const ScenarioConfig& config) {
    Resolved r;
    r.scheme = clebsch_gordan_table(config.system.gamma);
    r.pop.p = config.sampler_config.mf_probabilities;
    r.pop.validate();
    if (config.coupling_mode == "effective")
        r.g = effective_coupling(r.scheme, r.pop, config.system.g_max);
    else if (config.coupling_mode == "max")
        r.g = config.system.g_max;
    else
        throw ConfigError("config field 'coupling_mode' must be 'effective' or 'max'");
    r.grid = detuning_grid(two_pi * config.grid_half_span_hz, config.grid_points);
    r.sweep = SweepOptions{config.sampler, config.sampler_config, r.g, config.threads};
    return r;
}

DriveParams drive_of(const ScenarioConfig& config) {
    return DriveParams{two_pi * config.eta_hz, 0.0, 0.0, config.power_uw * 1e-6};
}

// Re-walks the sweep's per-realization seeds to produce intensities per shot
// at one detuning; used by counting mode and the scaling scenario.
std::vector<double> intensities_at(const ScenarioConfig& config, const Resolved& r,
                                   const DriveParams& drive_template, int n_atoms,
                                   double delta, std::size_t grid_index,
                                   std::uint64_t seed) {
    const DriveParams drive = drive_template.at_detuning(delta);
    std::vector<double> intensities;
    intensities.reserve(static_cast<std::size_t>(config.realizations));
    for (int shot = 0; shot < config.realizations; ++shot) {
        const std::uint64_t sub =
            derive_seed(seed, grid_index * static_cast<std::uint64_t>(config.realizations) +
                                  static_cast<std::uint64_t>(shot));
        const AtomEnsemble ensemble =
            sample_ensemble(config.sampler, config.system, n_atoms, sub, config.sampler_config);
        intensities.push_back(
            std::norm(field_amplitude_y(ensemble, config.system, drive, r.g)));
    }
    return intensities;
}

std::string counts_csv_header() {
    return "delta_hz,channel,shot_index,counts,exposure_s,seed\n";
}

void run_vrs_waterfall(const ScenarioConfig& config, const fs::path& out, json& summary) {
    const Resolved r = resolve(config);
    const DriveParams drive = drive_of(config);
    std::vector<std::pair<double, double>> parabola_points;
    json per_n = json::array();

    for (std::size_t i = 0; i < config.atom_numbers.size(); ++i) {
        const int n_atoms = config.atom_numbers[i];
        const std::uint64_t seed = derive_seed(config.seed, i);
        const SpectrumResult spectrum =
            sweep_spectrum(config.system, drive, n_atoms, r.grid, config.realizations,
                           seed, r.sweep);
        write_text(out / ("spectrum_N" + std::to_string(n_atoms) + ".csv"),
                   spectrum_csv(spectrum, config.system, config.detection));

        if (config.counting) {
            std::string counts_csv = counts_csv_header();
            std::string rates_csv = "delta_hz,lognorm_mean_rate_cps,rate_error_cps\n";
            for (std::size_t d = 0; d < r.grid.size(); ++d) {
                const auto intensities =
                    intensities_at(config, r, drive, n_atoms, r.grid[d], d, seed);
                std::vector<double> rates;
                rates.reserve(intensities.size());
                for (double v : intensities)
                    rates.push_back(
                        photon_rate_from_intensity(v, config.system, config.detection));
                const std::uint64_t count_seed = derive_seed(seed, 0xc0u + d);
                const CountRecord record =
                    sample_counts(rates, config.detection, count_seed);
                for (std::size_t s = 0; s < record.counts.size(); ++s)
                    counts_csv += num(r.grid[d] / two_pi) + ",y," + std::to_string(s) +
                                  ',' + std::to_string(record.counts[s]) + ',' +
                                  num(config.detection.exposure) + ',' +
                                  std::to_string(count_seed) + '\n';
                try {
                    const LognormalFit fit =
                        lognormal_estimate(record.counts, config.detection.exposure);
                    rates_csv += num(r.grid[d] / two_pi) + ',' + num(fit.mean_rate) +
                                 ',' + num(fit.rate_error) + '\n';
                } catch (const std::domain_error&) {
                    rates_csv += num(r.grid[d] / two_pi) + ",nan,nan\n";
                }
            }
            write_text(out / ("counts_N" + std::to_string(n_atoms) + ".csv"), counts_csv);
            write_text(out / ("rates_N" + std::to_string(n_atoms) + ".csv"), rates_csv);
        }

        const double n_eff = mean_effective_atom_number(config, n_atoms, seed);
        LorentzianFitOptions fit_options;
        fit_options.width_hint = config.system.kappa + config.system.gamma;
        const FitResult fit =
            fit_lorentzian_sum(r.grid, spectrum.mean_intensity, sem_of(spectrum),
                               config.lorentzian_components, std::nullopt, fit_options);
        const RabiPeaks peaks = extract_rabi_peaks(fit);
        parabola_points.emplace_back(n_eff, peaks.delta_minus);
        parabola_points.emplace_back(n_eff, peaks.delta_plus);
        per_n.push_back(json{{"n_atoms", n_atoms},
                             {"n_eff", n_eff},
                             {"fit_converged", fit.converged},
                             {"peaks", peaks_json(peaks)}});
    }

    const ParabolaFit parabola = fit_parabola_geff(parabola_points);
    summary["spectra"] = per_n;
    summary["parabola"] = json{{"g_eff_hz", parabola.g_eff / two_pi},
                               {"uncertainty_hz", parabola.uncertainty / two_pi}};
    summary["g_used_hz"] = r.g / two_pi;
}

void run_power_sweep(const ScenarioConfig& config, const fs::path& out, json& summary) {
    if (config.powers_uw.size() < 2)
        throw ConfigError("config field 'powers_uw' needs >= 2 entries");
    const Resolved r = resolve(config);
    const int n_atoms = config.atom_numbers.front();
    const double p_ref = config.powers_uw.front();
    json per_power = json::array();

    for (double p_uw : config.powers_uw) {
        if (!(p_uw > 0.0)) throw ConfigError("config field 'powers_uw' must be positive");
        DriveParams drive = drive_of(config);
        drive.power = p_uw * 1e-6;
        drive.eta = two_pi * config.eta_hz * std::sqrt(p_uw / p_ref);
        // Same seed for every power: identical ensembles, exact eta^2 scaling.
        const SpectrumResult spectrum = sweep_spectrum(
            config.system, drive, n_atoms, r.grid, config.realizations, config.seed, r.sweep);

        std::string csv = "delta_hz,mean_intensity,mean_intensity_per_uw,var_intensity\n";
        for (std::size_t d = 0; d < spectrum.size(); ++d)
            csv += num(spectrum.detunings[d] / two_pi) + ',' +
                   num(spectrum.mean_intensity[d]) + ',' +
                   num(spectrum.mean_intensity[d] / p_uw) + ',' +
                   num(spectrum.var_intensity[d]) + '\n';
        char name[64];
        std::snprintf(name, sizeof name, "spectrum_P%guW.csv", p_uw);
        write_text(out / name, csv);

        LorentzianFitOptions fit_options;
        fit_options.width_hint = config.system.kappa + config.system.gamma;
        const FitResult fit =
            fit_lorentzian_sum(r.grid, spectrum.mean_intensity, sem_of(spectrum),
                               config.lorentzian_components, std::nullopt, fit_options);
        const RabiPeaks peaks = extract_rabi_peaks(fit);
        per_power.push_back(json{{"power_uw", p_uw}, {"peaks", peaks_json(peaks)}});
    }

    summary["per_power"] = per_power;
    // Height-vs-power linearity diagnostic (heights / power should be flat).
    double ref_height = 0.0;
    json linearity = json::array();
    for (const auto& entry : per_power) {
        const double p = entry.at("power_uw").get<double>();
        const double h = entry.at("peaks").at("height_plus").get<double>() / p;
        if (ref_height == 0.0) ref_height = h;
        linearity.push_back(json{{"power_uw", p}, {"height_per_uw", h},
                                 {"relative_to_first", h / ref_height}});
    }
    summary["linearity"] = linearity;
}

void run_scaling(const ScenarioConfig& config, const fs::path& out, json& summary) {
    const Resolved r = resolve(config);
    const DriveParams drive = drive_of(config);
    std::string csv = "n_atoms,n_eff,rate_minus_cps_per_uw,rate_plus_cps_per_uw,"
                      "sigma_statistic\n";
    std::vector<std::pair<double, double>> rate_points, sigma_points;

    for (std::size_t i = 0; i < config.atom_numbers.size(); ++i) {
        const int n_atoms = config.atom_numbers[i];
        const std::uint64_t seed = derive_seed(config.seed, i);
        const double n_eff = mean_effective_atom_number(config, n_atoms, seed);
        const double delta_peak = std::sqrt(n_eff) * r.g;

        double rate[2] = {0.0, 0.0};
        for (int side = 0; side < 2; ++side) {
            const double delta = side == 0 ? -delta_peak : +delta_peak;
            const auto intensities = intensities_at(config, r, drive, n_atoms, delta,
                                                    static_cast<std::size_t>(side), seed);
            double mean = 0.0;
            for (std::size_t s = 0; s < intensities.size(); ++s)
                mean += (intensities[s] - mean) / static_cast<double>(s + 1);
            // Background-free detected rate normalized by drive power.
            rate[side] = config.detection.xi * 2.0 * config.system.kappa_T * mean /
                         (drive.power * 1e6);
        }
        const double sigma_stat = fluctuation_scaling_oracle(
            config.system, n_atoms, std::max(config.realizations, 100),
            derive_seed(seed, 0x515), config.sampler, config.sampler_config);

        csv += std::to_string(n_atoms) + ',' + num(n_eff) + ',' + num(rate[0]) + ',' +
               num(rate[1]) + ',' + num(sigma_stat) + '\n';
        rate_points.emplace_back(n_atoms, 0.5 * (rate[0] + rate[1]));
        sigma_points.emplace_back(n_atoms, sigma_stat);
    }
    write_text(out / "scaling.csv", csv);

    // Two conventions: peak rate per power scales as N^(beta-1); the raw
    // fluctuation statistic scales as N^beta.
    const PowerLawFit rate_fit = fit_power_law_beta(rate_points);
    const PowerLawFit sigma_fit = fit_power_law_beta(sigma_points);
    summary["beta_from_peak_rates"] =
        json{{"beta", rate_fit.beta + 1.0}, {"uncertainty", rate_fit.uncertainty}};
    summary["beta_from_sigma_statistic"] =
        json{{"beta", sigma_fit.beta}, {"uncertainty", sigma_fit.uncertainty}};
}

void run_raman(const ScenarioConfig& config, const fs::path& out, json& summary) {
    const Resolved r = resolve(config);
    const DriveParams drive = drive_of(config);
    const int n_atoms = config.atom_numbers.front();

    const SpectrumResult spectrum_y = sweep_spectrum(
        config.system, drive, n_atoms, r.grid, config.realizations, config.seed, r.sweep);
    const SpectrumResult spectrum_z =
        raman_sweep(config.system, drive, n_atoms, r.grid, config.realizations,
                    config.seed, r.scheme, r.pop, r.sweep);
    write_text(out / "spectrum_y.csv",
               spectrum_csv(spectrum_y, config.system, config.detection));
    write_text(out / "spectrum_z.csv",
               spectrum_csv(spectrum_z, config.system, config.detection));

    auto peak_pair = [&](const std::vector<double>& intensity) {
        std::vector<double> xs, ys;
        const std::size_t mid = r.grid.size() / 2;
        xs.assign(r.grid.begin(), r.grid.begin() + static_cast<long>(mid));
        ys.assign(intensity.begin(), intensity.begin() + static_cast<long>(mid));
        const double neg = refine_peak_quadratic(xs, ys);
        xs.assign(r.grid.begin() + static_cast<long>(mid), r.grid.end());
        ys.assign(intensity.begin() + static_cast<long>(mid), intensity.end());
        return std::pair<double, double>{neg, refine_peak_quadratic(xs, ys)};
    };
    const auto [y_neg, y_pos] = peak_pair(spectrum_y.mean_intensity);
    const auto [z_neg, z_pos] = peak_pair(spectrum_z.mean_intensity);
    const double step = r.grid.size() > 1 ? r.grid[1] - r.grid[0] : 0.0;
    summary["y_peaks_hz"] = {y_neg / two_pi, y_pos / two_pi};
    summary["z_peaks_hz"] = {z_neg / two_pi, z_pos / two_pi};
    summary["grid_step_hz"] = step / two_pi;
    summary["peaks_coincide_within_step"] =
        std::abs(y_neg - z_neg) <= step && std::abs(y_pos - z_pos) <= step;
}

void run_calibrate(const ScenarioConfig& config, const fs::path& out, json& summary) {
    const Resolved r = resolve(config);
    const int n_atoms = config.atom_numbers.front();
    const double delta_A = two_pi * config.calibration_detuning_hz;

    std::string csv = "realization,n_eff_true,shift_hz,n_eff_recovered\n";
    double mean_true = 0.0, mean_recovered = 0.0;
    const int reps = config.realizations;
    for (int rep = 0; rep < reps; ++rep) {
        const AtomEnsemble ensemble =
            sample_ensemble(config.sampler, config.system, n_atoms,
                            derive_seed(config.seed, static_cast<std::uint64_t>(rep)),
                            config.sampler_config);
        const double n_eff_true = effective_atom_number(ensemble, config.system);
        const double s2 = coupling_sums(ensemble, config.system).s2;

        // Transmission scan of the shifted cavity resonance.
        const double expected = r.g * r.g * s2 / delta_A;
        const std::vector<double> scan =
            detuning_grid(two_pi * 3e6, 601); // window around the expected shift
        std::vector<double> xs(scan.size()), ys(scan.size());
        for (std::size_t i = 0; i < scan.size(); ++i) {
            xs[i] = expected + scan[i];
            ys[i] = transmission_response(config.system, r.g, s2, delta_A, xs[i]);
        }
        const double shift = refine_peak_quadratic(xs, ys);
        const double recovered =
            calibrate_atom_number(shift, config.system, delta_A, r.g);
        mean_true += (n_eff_true - mean_true) / (rep + 1);
        mean_recovered += (recovered - mean_recovered) / (rep + 1);
        csv += std::to_string(rep) + ',' + num(n_eff_true) + ',' + num(shift / two_pi) +
               ',' + num(recovered) + '\n';
    }
    write_text(out / "calibration.csv", csv);
    summary["n_eff_true_mean"] = mean_true;
    summary["n_eff_recovered_mean"] = mean_recovered;
    summary["relative_error"] = mean_recovered / mean_true - 1.0;
}

void run_oracle_beta(const ScenarioConfig& config, const fs::path& out, json& summary) {
    std::string csv = "n_atoms,sigma_statistic\n";
    std::vector<std::pair<double, double>> points;
    for (std::size_t i = 0; i < config.atom_numbers.size(); ++i) {
        const int n_atoms = config.atom_numbers[i];
        const double value = fluctuation_scaling_oracle(
            config.system, n_atoms, config.realizations, derive_seed(config.seed, i),
            config.sampler, config.sampler_config);
        csv += std::to_string(n_atoms) + ',' + num(value) + '\n';
        points.emplace_back(n_atoms, value);
    }
    write_text(out / "oracle_beta.csv", csv);
    const PowerLawFit fit = fit_power_law_beta(points);
    summary["beta"] = fit.beta;
    summary["uncertainty"] = fit.uncertainty;
    summary["sampler"] = to_string(config.sampler);
}

} // namespace

ScenarioConfig ScenarioConfig::from_json(const json& j) {
    ScenarioConfig config;
    config.scenario = field<std::string>(j, "scenario", "");
    if (known_scenarios.find(config.scenario) == known_scenarios.end())
        throw ConfigError("config field 'scenario' has unknown value '" +
                          config.scenario + "'");
    if (j.contains("schema_version") &&
        j.at("schema_version").get<int>() != scenario_schema_version)
        throw ConfigError("config field 'schema_version' is unsupported");

    config.seed = field<std::uint64_t>(j, "seed", 1);
    config.output_dir = field<std::string>(j, "output_dir", "out");
    config.threads = field<int>(j, "threads", 1);
    if (config.threads < 1) throw ConfigError("config field 'threads' must be >= 1");

    if (j.contains("system")) {
        const json& s = j.at("system");
        SystemParams& p = config.system;
        p.kappa = two_pi * field<double>(s, "kappa_hz", p.kappa / two_pi);
        p.kappa_T = two_pi * field<double>(s, "kappa_t_hz", p.kappa_T / two_pi);
        p.gamma = two_pi * field<double>(s, "gamma_hz", p.gamma / two_pi);
        p.g_max = two_pi * field<double>(s, "g_max_hz", p.g_max / two_pi);
        p.lambda_probe = field<double>(s, "lambda_probe_m", p.lambda_probe);
        p.lambda_trap = field<double>(s, "lambda_trap_m", p.lambda_trap);
        p.cavity_length = field<double>(s, "cavity_length_m", p.cavity_length);
        p.mode_waist = field<double>(s, "mode_waist_m", p.mode_waist);
        p.trap_depth = 1e-6 * field<double>(s, "trap_depth_uk", p.trap_depth * 1e6);
        p.temperature = 1e-6 * field<double>(s, "temperature_uk", p.temperature * 1e6);
        p.drive_waist = field<double>(s, "drive_waist_m", p.drive_waist);
    }
    try {
        config.system.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config field 'system': ") + e.what());
    }
    // Keep the boundary-unit values verbatim; round-tripping through the
    // internal angular/SI units would perturb them by one ulp.
    config.system_json = system_to_json(config.system);
    if (j.contains("system")) config.system_json.update(j.at("system"));

    if (j.contains("drive")) {
        const json& d = j.at("drive");
        config.eta_hz = field<double>(d, "eta_hz", config.eta_hz);
        config.power_uw = field<double>(d, "power_uw", config.power_uw);
        config.powers_uw = field<std::vector<double>>(d, "powers_uw", config.powers_uw);
    }

    config.atom_numbers =
        field<std::vector<int>>(j, "atom_numbers", config.atom_numbers);
    if (config.atom_numbers.empty())
        throw ConfigError("config field 'atom_numbers' must be nonempty");
    for (int n : config.atom_numbers)
        if (n < 0) throw ConfigError("config field 'atom_numbers' must be nonnegative");

    if (j.contains("grid")) {
        const json& g = j.at("grid");
        config.grid_half_span_hz =
            field<double>(g, "half_span_hz", config.grid_half_span_hz);
        config.grid_points = field<int>(g, "points", config.grid_points);
    }
    if (config.grid_points < 2) throw ConfigError("config field 'grid.points' must be >= 2");

    config.realizations = field<int>(j, "realizations", config.realizations);
    if (config.realizations < 1)
        throw ConfigError("config field 'realizations' must be >= 1");

    if (j.contains("sampler")) {
        const json& s = j.at("sampler");
        try {
            config.sampler =
                sampler_kind_from_string(field<std::string>(s, "kind", "lattice"));
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("config field 'sampler.kind': ") + e.what());
        }
        SamplerConfig& sc = config.sampler_config;
        sc.axial_cloud_rms = field<double>(s, "axial_cloud_rms_m", sc.axial_cloud_rms);
        sc.z_extent = field<double>(s, "z_extent_m", sc.z_extent);
        sc.radial_cloud_rms = field<double>(s, "radial_cloud_rms_m", sc.radial_cloud_rms);
        if (s.contains("mf_probabilities")) {
            const auto probs = s.at("mf_probabilities").get<std::vector<double>>();
            if (probs.size() != 5)
                throw ConfigError("config field 'sampler.mf_probabilities' needs 5 entries");
            std::copy(probs.begin(), probs.end(), sc.mf_probabilities.begin());
            config.mf_explicit = true;
        }
    }
    if (!config.mf_explicit) {
        // Default populations: optical-pumping steady state under sigma+- drive.
        const LevelScheme scheme = clebsch_gordan_table(config.system.gamma);
        config.sampler_config.mf_probabilities =
            pumping_steady_state(scheme,
                                 {Polarization::sigma_plus, Polarization::sigma_minus})
                .p;
        config.mf_explicit = true;
    }

    config.coupling_mode = field<std::string>(j, "coupling_mode", config.coupling_mode);
    config.lorentzian_components =
        field<int>(j, "lorentzian_components", config.lorentzian_components);
    if (config.lorentzian_components < 1 || config.lorentzian_components > 4)
        throw ConfigError("config field 'lorentzian_components' must be in 1..4");

    if (j.contains("detection")) {
        const json& d = j.at("detection");
        DetectionChain& c = config.detection;
        c.xi = field<double>(d, "xi", c.xi);
        c.exposure = field<double>(d, "exposure_s", c.exposure);
        c.time_resolution = field<double>(d, "time_resolution_s", c.time_resolution);
        c.background_rate = field<double>(d, "background_cps", c.background_rate);
        c.dark_rate = field<double>(d, "dark_cps", c.dark_rate);
        try {
            c.validate();
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("config field 'detection': ") + e.what());
        }
    }
    config.counting = field<bool>(j, "counting", config.counting);
    config.calibration_detuning_hz =
        field<double>(j, "calibration_detuning_hz", config.calibration_detuning_hz);
    return config;
}

ScenarioConfig ScenarioConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    return from_json(j);
}

json ScenarioConfig::resolved() const {
    json j;
    j["schema_version"] = scenario_schema_version;
    j["artifact_version"] = artifact_version;
    j["scenario"] = scenario;
    j["seed"] = seed;
    j["output_dir"] = output_dir;
    j["threads"] = threads;
    j["system"] = system_json.is_object() ? system_json : system_to_json(system);
    j["drive"] = {{"eta_hz", eta_hz}, {"power_uw", power_uw}, {"powers_uw", powers_uw}};
    j["atom_numbers"] = atom_numbers;
    j["grid"] = {{"half_span_hz", grid_half_span_hz}, {"points", grid_points}};
    j["realizations"] = realizations;
    j["sampler"] = {{"kind", to_string(sampler)},
                    {"axial_cloud_rms_m", sampler_config.axial_cloud_rms},
                    {"z_extent_m", sampler_config.z_extent},
                    {"radial_cloud_rms_m", sampler_config.radial_cloud_rms},
                    {"mf_probabilities", sampler_config.mf_probabilities}};
    j["coupling_mode"] = coupling_mode;
    j["lorentzian_components"] = lorentzian_components;
    j["detection"] = {{"xi", detection.xi},
                      {"exposure_s", detection.exposure},
                      {"time_resolution_s", detection.time_resolution},
                      {"background_cps", detection.background_rate},
                      {"dark_cps", detection.dark_rate}};
    j["counting"] = counting;
    j["calibration_detuning_hz"] = calibration_detuning_hz;
    return j;
}

int run_scenario(const ScenarioConfig& config) {
    if (known_scenarios.find(config.scenario) == known_scenarios.end())
        throw ConfigError("config field 'scenario' has unknown value '" +
                          config.scenario + "'");
    const fs::path out(config.output_dir);
    fs::create_directories(out);
    write_text(out / "manifest.json", config.resolved().dump(2) + "\n");

    json summary;
    summary["scenario"] = config.scenario;
    summary["seed"] = config.seed;
    if (config.scenario == "vrs-waterfall")
        run_vrs_waterfall(config, out, summary);
    else if (config.scenario == "power-sweep")
        run_power_sweep(config, out, summary);
    else if (config.scenario == "scaling")
        run_scaling(config, out, summary);
    else if (config.scenario == "raman")
        run_raman(config, out, summary);
    else if (config.scenario == "calibrate")
        run_calibrate(config, out, summary);
    else if (config.scenario == "oracle-beta")
        run_oracle_beta(config, out, summary);
    else if (config.scenario == "cg-dump") {
        write_text(out / "cg_table.csv", cg_table_csv(clebsch_gordan_table()));
        summary["rows"] = 15;
    }
    write_text(out / "summary.json", summary.dump(2) + "\n");
    return 0;
}

} // namespace subrad
