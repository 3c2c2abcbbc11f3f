#pragma once

#include <cstdint>
#include <vector>

#include "subrad/params.hpp"

namespace subrad {

// Detector and integration-window constants.  Efficiency presets 0.07
// (nanowire path) and 0.5 (photon-counter path); exposures 100 us and 1 ms.
struct DetectionChain {
    double xi = 0.5;              // overall detection efficiency, (0,1]
    double exposure = 1e-3;       // s
    double time_resolution = 1e-6;
    double background_rate = 50.0; // counts/s, ambient
    double dark_rate = 1.0;        // counts/s

    void validate() const;
};

// Maximum-likelihood log-normal fit of a count sample.
struct LognormalFit {
    double location = 0.0;   // mu of log-rate
    double scale = 0.0;      // sigma of log-rate
    double mean_rate = 0.0;  // counts/s, distribution mean exp(mu + sigma^2/2)
    double rate_error = 0.0; // standard error of mean_rate
};

// Photo-counts of one detuning point and polarization channel.
struct CountRecord {
    std::vector<long long> counts;  // per realization/shot
    double mean_rate = 0.0;         // counts/s
    LognormalFit lognormal;
    char channel = 'y';
};

// Detected flux xi * 2 kappa_T * <photon number> plus background and dark
// rates.  The factor 2 kappa_T converts the HWHM-type field decay rate to a
// photon flux.
double photon_rate_from_intensity(double intensity, const SystemParams& params,
                                  const DetectionChain& chain);

// Peak photo-count rate per drive power:
// xi kappa_T (1/8) (3 lambda^2 / (2 pi A_dr)) gamma / ((kappa+gamma)/2)^2 / (hbar omega),
// in counts/(s uW).  A_dr = pi w_dr^2 (see README on the convention).
double predicted_peak_rate_per_power(const SystemParams& params, const DetectionChain& chain);

// Poisson photo-counts over the exposure window at a fixed rate.
CountRecord sample_counts(double rate, const DetectionChain& chain, int n_shots,
                          std::uint64_t seed);

// Compound version: the rate itself fluctuates shot to shot (chaotic light
// across realizations); one Poisson draw per supplied rate.
CountRecord sample_counts(const std::vector<double>& rates_per_shot,
                          const DetectionChain& chain, std::uint64_t seed);

// MLE log-normal fit on positive rates; zero counts are replaced by
// zero_offset counts before the log transform.  Throws std::domain_error on
// all-zero input.
LognormalFit lognormal_estimate(const std::vector<long long>& counts, double exposure,
                                double zero_offset = 0.5);

// Shot-to-shot atom-number-noise correction of the on-resonance peak:
// S_max = (4 eta^2 N^(beta-1) / (kappa+gamma)^2) (1 - 4 g^2/(kappa+gamma)^2 * var/mean).
// Throws std::domain_error when the correction factor is <= 0 (perturbative
// formula invalid).
double atom_noise_corrected_peak(double eta, double n_mean, double n_var, double beta,
                                 const SystemParams& params, double g = -1.0);

} // namespace subrad
