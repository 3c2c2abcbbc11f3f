#include "subrad/multilevel.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "subrad/rng.hpp"

namespace subrad {

double LevelScheme::cg(int m, int q) const {
    if (m < -2 || m > 2 || q < -1 || q > 1) return 0.0;
    if (m + q < -3 || m + q > 3) return 0.0;
    return table[static_cast<std::size_t>(m + 2)][static_cast<std::size_t>(q + 1)];
}

void PopulationDistribution::validate() const {
    double sum = 0.0;
    for (double v : p) {
        if (v < 0.0) throw std::invalid_argument("population probabilities must be >= 0");
        sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw std::invalid_argument("population probabilities must sum to 1");
}

LevelScheme clebsch_gordan_table(double gamma) {
    // Closed-form <j m; 1 q | j+1 m+q> for j = 2, normalized so that the
    // stretched coefficient is 1.
    LevelScheme scheme;
    scheme.gamma = gamma;
    const double j = 2.0;
    for (int m = -2; m <= 2; ++m) {
        const double dm = m;
        const double sq_plus =
            (j + dm + 1.0) * (j + dm + 2.0) / ((2.0 * j + 1.0) * (2.0 * j + 2.0));
        const double sq_pi =
            (j - dm + 1.0) * (j + dm + 1.0) / ((2.0 * j + 1.0) * (j + 1.0));
        const double sq_minus =
            (j - dm + 1.0) * (j - dm + 2.0) / ((2.0 * j + 1.0) * (2.0 * j + 2.0));
        auto& row = scheme.table[static_cast<std::size_t>(m + 2)];
        row[0] = std::sqrt(sq_minus);
        row[1] = std::sqrt(sq_pi);
        row[2] = std::sqrt(sq_plus);
    }
    return scheme;
}

std::array<std::array<double, 5>, 5>
pumping_transition_matrix(const LevelScheme& scheme, const std::set<Polarization>& drive) {
    if (drive.empty()) throw std::invalid_argument("drive polarization set is empty");

    // Absorb a driven polarization with weight ~ cg(m, q)^2, then decay from
    // the excited sublevel with branching cg(m'-q', q')^2 (these sum to 1).
    std::array<std::array<double, 5>, 5> transition{};
    for (int m = -2; m <= 2; ++m) {
        double absorb_total = 0.0;
        for (Polarization pol : drive) absorb_total += scheme.cg_sq(m, static_cast<int>(pol));
        if (absorb_total <= 0.0) {
            // Dark ground state under this drive; the event leaves it in place.
            transition[static_cast<std::size_t>(m + 2)][static_cast<std::size_t>(m + 2)] = 1.0;
            continue;
        }
        for (Polarization pol : drive) {
            const int q = static_cast<int>(pol);
            const double p_absorb = scheme.cg_sq(m, q) / absorb_total;
            if (p_absorb == 0.0) continue;
            const int m_excited = m + q;
            for (int q_decay = -1; q_decay <= 1; ++q_decay) {
                const int m_final = m_excited - q_decay;
                if (m_final < -2 || m_final > 2) continue;
                transition[static_cast<std::size_t>(m_final + 2)]
                          [static_cast<std::size_t>(m + 2)] +=
                    p_absorb * scheme.cg_sq(m_final, q_decay);
            }
        }
    }
    return transition;
}

PopulationDistribution pumping_steady_state(const LevelScheme& scheme,
                                            const std::set<Polarization>& drive) {
    const auto transition = pumping_transition_matrix(scheme, drive);
    std::array<double, 5> p = {0.2, 0.2, 0.2, 0.2, 0.2};
    const int max_iterations = 100000;
    for (int it = 0; it < max_iterations; ++it) {
        std::array<double, 5> next{};
        for (int row = 0; row < 5; ++row)
            for (int col = 0; col < 5; ++col)
                next[static_cast<std::size_t>(row)] +=
                    transition[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)] *
                    p[static_cast<std::size_t>(col)];
        double norm = 0.0, residual = 0.0;
        for (double v : next) norm += v;
        for (int i = 0; i < 5; ++i) {
            next[static_cast<std::size_t>(i)] /= norm;
            residual = std::max(residual, std::abs(next[static_cast<std::size_t>(i)] -
                                                   p[static_cast<std::size_t>(i)]));
        }
        p = next;
        if (residual < 1e-13) {
            PopulationDistribution result;
            result.p = p;
            return result;
        }
    }
    throw std::runtime_error("pumping_steady_state: power iteration did not converge "
                             "(reducible chain?)");
}

double effective_coupling(const LevelScheme& scheme, const PopulationDistribution& pop,
                          double g_max) {
    pop.validate();
    double sum = 0.0;
    for (int m = -2; m <= 2; ++m)
        sum += pop(m) * (scheme.cg_sq(m, +1) + scheme.cg_sq(m, -1)) / 2.0;
    return g_max * std::sqrt(sum);
}

double raman_branching_sq(const LevelScheme& scheme, int m) {
    double sum = 0.0;
    for (int q : {-1, +1}) {
        const int m_excited = m + q;
        if (m_excited < -2 || m_excited > 2) continue; // no pi decay channel back to F=2
        sum += scheme.cg_sq(m, q) * scheme.cg_sq(m_excited, 0);
    }
    return sum;
}

SpectrumResult raman_spectrum(const AtomEnsemble& ensemble, const SystemParams& params,
                              const DriveParams& drive, const LevelScheme& scheme,
                              const PopulationDistribution& pop,
                              const std::vector<double>& grid) {
    if (grid.empty()) throw std::invalid_argument("detuning grid must be nonempty");
    const double g = effective_coupling(scheme, pop, params.g_max);
    const double k = params.probe_k();
    const double s2 = coupling_sums(ensemble, params).s2;

    // Per-atom incoherent strengths sum_a |g w_a cos(k x_a) B_a|^2; the
    // z positions never enter.
    double strength = 0.0;
    for (int a = 0; a < ensemble.n(); ++a) {
        const auto i = static_cast<std::size_t>(a);
        const double cx = std::cos(k * ensemble.positions_x[i]);
        const double ga = g * ensemble.radial_weight[i] * cx;
        strength += ga * ga * raman_branching_sq(scheme, ensemble.mf_state[i]);
    }

    SpectrumResult result;
    result.detunings = grid;
    result.n_realizations = 1;
    result.mean_intensity.reserve(grid.size());
    for (double delta : grid) {
        const std::complex<double> i(0.0, 1.0);
        const std::complex<double> denom =
            (i * delta - params.gamma) * (i * delta - params.kappa) + g * g * s2;
        result.mean_intensity.push_back(drive.eta * drive.eta * strength /
                                        std::norm(denom));
    }
    result.var_intensity.assign(grid.size(), 0.0);
    result.mean_amplitude.assign(grid.size(), {0.0, 0.0});
    result.sem_amplitude.assign(grid.size(), 0.0);
    return result;
}

SpectrumResult raman_sweep(const SystemParams& params, const DriveParams& drive_template,
                           int n_atoms, const std::vector<double>& grid,
                           int n_realizations, std::uint64_t seed,
                           const LevelScheme& scheme, const PopulationDistribution& pop,
                           const SweepOptions& options) {
    if (n_realizations < 1) throw std::invalid_argument("n_realizations must be >= 1");
    if (grid.empty()) throw std::invalid_argument("detuning grid must be nonempty");

    SpectrumResult result;
    result.detunings = grid;
    result.n_realizations = n_realizations;
    result.mean_intensity.assign(grid.size(), 0.0);
    result.var_intensity.assign(grid.size(), 0.0);
    result.mean_amplitude.assign(grid.size(), {0.0, 0.0});
    result.sem_amplitude.assign(grid.size(), 0.0);

    std::vector<double> m2(grid.size(), 0.0);
    for (int r = 0; r < n_realizations; ++r) {
        const AtomEnsemble ensemble = sample_ensemble(
            options.sampler, params, n_atoms, derive_seed(seed, static_cast<std::uint64_t>(r)),
            options.config);
        const SpectrumResult single =
            raman_spectrum(ensemble, params, drive_template, scheme, pop, grid);
        for (std::size_t d = 0; d < grid.size(); ++d) {
            const double value = single.mean_intensity[d];
            const double delta = value - result.mean_intensity[d];
            result.mean_intensity[d] += delta / (r + 1);
            m2[d] += delta * (value - result.mean_intensity[d]);
        }
    }
    if (n_realizations > 1)
        for (std::size_t d = 0; d < grid.size(); ++d)
            result.var_intensity[d] = m2[d] / (n_realizations - 1);
    return result;
}

std::string cg_table_csv(const LevelScheme& scheme) {
    std::string csv = "m_F,q,coefficient\n";
    char line[64];
    for (int m = -2; m <= 2; ++m)
        for (int q = -1; q <= 1; ++q) {
            std::snprintf(line, sizeof line, "%d,%d,%.15g\n", m, q, scheme.cg(m, q));
            csv += line;
        }
    return csv;
}

} // namespace subrad
