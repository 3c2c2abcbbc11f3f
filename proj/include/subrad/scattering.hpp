#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "subrad/ensemble.hpp"
#include "subrad/params.hpp"

namespace subrad {

// Detuning grid with ensemble statistics of the intracavity intensity.
struct SpectrumResult {
    std::vector<double> detunings;                    // rad/s
    std::vector<double> mean_intensity;               // <|alpha|^2>
    std::vector<double> var_intensity;                // unbiased sample variance
    std::vector<std::complex<double>> mean_amplitude; // <alpha>
    std::vector<double> sem_amplitude;                // standard error of the mean amplitude
    int n_realizations = 0;

    std::size_t size() const { return detunings.size(); }
};

// Collective sums entering the field amplitude.  They do not depend on the
// detuning, so one ensemble can be swept over a grid cheaply.
struct CouplingSums {
    double s1 = 0.0; // sum_a w_a cos(k x_a) cos(k z_a)
    double s2 = 0.0; // sum_a w_a^2 cos^2(k x_a)
};

CouplingSums coupling_sums(const AtomEnsemble& ensemble, const SystemParams& params);

// alpha_y = eta g S1 / [(i dA - gamma)(i dC - kappa) + g^2 S2].
// Throws std::domain_error if |denominator|^2 falls below denominator_floor
// (cannot happen for gamma, kappa > 0; the guard documents intent).
std::complex<double> field_amplitude_y(const CouplingSums& sums,
                                       const SystemParams& params,
                                       const DriveParams& drive, double g,
                                       double denominator_floor = 1e-30);

std::complex<double> field_amplitude_y(const AtomEnsemble& ensemble,
                                       const SystemParams& params,
                                       const DriveParams& drive, double g,
                                       double denominator_floor = 1e-30);

struct SweepOptions {
    SamplerKind sampler = SamplerKind::lattice;
    SamplerConfig config = {};
    double g = -1.0;   // coupling entering Eq.-of-motion sums; < 0 -> params.g_max
    int threads = 1;
};

// For each detuning in `grid`, draws n_realizations fresh ensembles at
// Delta_A = Delta_C = Delta and records mean/variance of |alpha_y|^2 and the
// mean amplitude.  Deterministic given (seed); independent of thread count.
SpectrumResult sweep_spectrum(const SystemParams& params, const DriveParams& drive_template,
                              int n_atoms, const std::vector<double>& grid,
                              int n_realizations, std::uint64_t seed,
                              const SweepOptions& options = {});

// Monte Carlo estimate of <|sum_a w_a cos(k x_a) cos(k z_a)|^2>.
double fluctuation_scaling_oracle(const SystemParams& params, int n_atoms,
                                  int n_realizations, std::uint64_t seed,
                                  SamplerKind sampler, const SamplerConfig& config = {});

// Lorentzian peak approximation of the mean intensity:
// (eta^2 N^(beta-1) / 8) / [(Delta + sign sqrt(N_eff) g)^2 + ((kappa+gamma)/2)^2].
// The peak sits at Delta = -sign sqrt(N_eff) g.  g < 0 selects params.g_max.
double lorentzian_peak_model(double delta, const SystemParams& params, int n_atoms,
                             double n_eff, double eta, double beta, int sign,
                             double g = -1.0);

// Small parameter (kappa^2 + gamma^2) / (N_eff g^2) of the peak
// approximation; callers should warn when it is not << 1.
double validate_lorentzian_regime(const SystemParams& params, double n_eff,
                                  double g = -1.0);

// Bare cavity response 1/|D|^2 at fixed atom detuning; used for the
// dispersive atom-number calibration.
double transmission_response(const SystemParams& params, double g, double s2,
                             double delta_A, double delta_C);

// Symmetric grid of n_points detunings over [-half_span, +half_span] (rad/s).
std::vector<double> detuning_grid(double half_span, int n_points);

} // namespace subrad
