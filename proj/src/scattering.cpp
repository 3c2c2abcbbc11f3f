#include "subrad/scattering.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>
#include <thread>

#include "subrad/rng.hpp"

namespace subrad {

CouplingSums coupling_sums(const AtomEnsemble& ensemble, const SystemParams& params) {
    const double k = params.probe_k();
    CouplingSums sums;
    double c1 = 0.0, c2 = 0.0; // Kahan compensation
    for (int a = 0; a < ensemble.n(); ++a) {
        const auto i = static_cast<std::size_t>(a);
        const double w = ensemble.radial_weight[i];
        const double cx = std::cos(k * ensemble.positions_x[i]);
        const double cz = std::cos(k * ensemble.positions_z[i]);
        const double t1 = w * cx * cz;
        const double t2 = w * w * cx * cx;
        double y = t1 - c1, s = sums.s1 + y;
        c1 = (s - sums.s1) - y;
        sums.s1 = s;
        y = t2 - c2;
        s = sums.s2 + y;
        c2 = (s - sums.s2) - y;
        sums.s2 = s;
    }
    return sums;
}

std::complex<double> field_amplitude_y(const CouplingSums& sums, const SystemParams& params,
                                       const DriveParams& drive, double g,
                                       double denominator_floor) {
    const std::complex<double> i(0.0, 1.0);
    const std::complex<double> denom =
        (i * drive.delta_A - params.gamma) * (i * drive.delta_C - params.kappa) +
        g * g * sums.s2;
    if (std::norm(denom) < denominator_floor)
        throw std::domain_error("field_amplitude_y: singular denominator");
    return drive.eta * g * sums.s1 / denom;
}

std::complex<double> field_amplitude_y(const AtomEnsemble& ensemble,
                                       const SystemParams& params,
                                       const DriveParams& drive, double g,
                                       double denominator_floor) {
    return field_amplitude_y(coupling_sums(ensemble, params), params, drive, g,
                             denominator_floor);
}

namespace {

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body) {
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    const auto n_threads = static_cast<std::size_t>(threads);
    pool.reserve(n_threads);
    for (std::size_t t = 0; t < n_threads; ++t) {
        pool.emplace_back([&, t] {
            for (std::size_t i = t; i < count; i += n_threads) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

} // namespace

SpectrumResult sweep_spectrum(const SystemParams& params, const DriveParams& drive_template,
                              int n_atoms, const std::vector<double>& grid,
                              int n_realizations, std::uint64_t seed,
                              const SweepOptions& options) {
    if (n_realizations < 1) throw std::invalid_argument("n_realizations must be >= 1");
    if (grid.empty()) throw std::invalid_argument("detuning grid must be nonempty");
    params.validate();
    drive_template.validate();
    const double g = options.g < 0.0 ? params.g_max : options.g;

    SpectrumResult result;
    result.detunings = grid;
    result.mean_intensity.resize(grid.size());
    result.var_intensity.resize(grid.size());
    result.mean_amplitude.resize(grid.size());
    result.sem_amplitude.resize(grid.size());
    result.n_realizations = n_realizations;

    parallel_for(grid.size(), options.threads, [&](std::size_t d) {
        const DriveParams drive = drive_template.at_detuning(grid[d]);
        // Welford accumulation of |alpha|^2 and both amplitude quadratures.
        double mean_i = 0.0, m2_i = 0.0;
        double mean_re = 0.0, m2_re = 0.0, mean_im = 0.0, m2_im = 0.0;
        for (int r = 0; r < n_realizations; ++r) {
            const std::uint64_t sub = derive_seed(
                seed, d * static_cast<std::uint64_t>(n_realizations) +
                          static_cast<std::uint64_t>(r));
            const AtomEnsemble ensemble =
                sample_ensemble(options.sampler, params, n_atoms, sub, options.config);
            const std::complex<double> alpha =
                field_amplitude_y(ensemble, params, drive, g);
            const double intensity = std::norm(alpha);
            const double n1 = r + 1;
            double delta = intensity - mean_i;
            mean_i += delta / n1;
            m2_i += delta * (intensity - mean_i);
            delta = alpha.real() - mean_re;
            mean_re += delta / n1;
            m2_re += delta * (alpha.real() - mean_re);
            delta = alpha.imag() - mean_im;
            mean_im += delta / n1;
            m2_im += delta * (alpha.imag() - mean_im);
        }
        result.mean_intensity[d] = mean_i;
        result.var_intensity[d] =
            n_realizations > 1 ? m2_i / (n_realizations - 1) : 0.0;
        result.mean_amplitude[d] = {mean_re, mean_im};
        const double var_amp =
            n_realizations > 1 ? (m2_re + m2_im) / (n_realizations - 1) : 0.0;
        result.sem_amplitude[d] = std::sqrt(var_amp / n_realizations);
    });
    return result;
}

double fluctuation_scaling_oracle(const SystemParams& params, int n_atoms,
                                  int n_realizations, std::uint64_t seed,
                                  SamplerKind sampler, const SamplerConfig& config) {
    if (n_atoms < 1) throw std::invalid_argument("n_atoms must be >= 1");
    if (n_realizations < 100)
        throw std::invalid_argument("oracle needs n_realizations >= 100");
    double mean = 0.0;
    for (int r = 0; r < n_realizations; ++r) {
        const AtomEnsemble ensemble = sample_ensemble(
            sampler, params, n_atoms, derive_seed(seed, static_cast<std::uint64_t>(r)),
            config);
        const double s1 = coupling_sums(ensemble, params).s1;
        mean += (s1 * s1 - mean) / (r + 1);
    }
    return mean;
}

double lorentzian_peak_model(double delta, const SystemParams& params, int n_atoms,
                             double n_eff, double eta, double beta, int sign, double g) {
    if (n_atoms < 1) throw std::invalid_argument("n_atoms must be >= 1");
    if (!(n_eff > 0.0)) throw std::invalid_argument("n_eff must be positive");
    if (sign != 1 && sign != -1) throw std::invalid_argument("sign must be +-1");
    if (g < 0.0) g = params.g_max;
    const double shifted = delta + sign * std::sqrt(n_eff) * g;
    const double half_width = (params.kappa + params.gamma) / 2.0;
    return eta * eta * std::pow(static_cast<double>(n_atoms), beta - 1.0) / 8.0 /
           (shifted * shifted + half_width * half_width);
}

double validate_lorentzian_regime(const SystemParams& params, double n_eff, double g) {
    if (!(n_eff > 0.0)) throw std::invalid_argument("n_eff must be positive");
    if (g < 0.0) g = params.g_max;
    return (params.kappa * params.kappa + params.gamma * params.gamma) / (n_eff * g * g);
}

double transmission_response(const SystemParams& params, double g, double s2,
                             double delta_A, double delta_C) {
    const std::complex<double> i(0.0, 1.0);
    const std::complex<double> denom =
        (i * delta_A - params.gamma) * (i * delta_C - params.kappa) + g * g * s2;
    return 1.0 / std::norm(denom);
}

std::vector<double> detuning_grid(double half_span, int n_points) {
    if (n_points < 2) throw std::invalid_argument("grid needs >= 2 points");
    std::vector<double> grid(static_cast<std::size_t>(n_points));
    for (int i = 0; i < n_points; ++i)
        grid[static_cast<std::size_t>(i)] =
            -half_span + 2.0 * half_span * i / (n_points - 1);
    return grid;
}

} // namespace subrad
