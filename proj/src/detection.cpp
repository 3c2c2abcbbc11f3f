#include "subrad/detection.hpp"

#include <cmath>
#include <stdexcept>

#include "subrad/rng.hpp"

namespace subrad {

void DetectionChain::validate() const {
    if (!(xi > 0.0) || xi > 1.0)
        throw std::invalid_argument("xi must lie in (0, 1]");
    if (exposure < 0.0 || time_resolution < 0.0 || background_rate < 0.0 || dark_rate < 0.0)
        throw std::invalid_argument("detection chain fields must be nonnegative");
    if (time_resolution > exposure)
        throw std::invalid_argument("time_resolution must not exceed exposure");
}

double photon_rate_from_intensity(double intensity, const SystemParams& params,
                                  const DetectionChain& chain) {
    if (intensity < 0.0) throw std::invalid_argument("intensity must be >= 0");
    return chain.xi * 2.0 * params.kappa_T * intensity + chain.background_rate +
           chain.dark_rate;
}

double predicted_peak_rate_per_power(const SystemParams& params, const DetectionChain& chain) {
    params.validate();
    chain.validate();
    // Effective drive cross section A_dr = pi w_dr^2 (see README).
    const double area = std::numbers::pi * params.drive_waist * params.drive_waist;
    const double half_width = (params.kappa + params.gamma) / 2.0;
    const double omega = two_pi * speed_of_light / params.lambda_probe;
    const double per_watt = chain.xi * params.kappa_T * (1.0 / 8.0) *
                            (3.0 * params.lambda_probe * params.lambda_probe /
                             (two_pi * area)) *
                            params.gamma / (half_width * half_width) / (hbar * omega);
    return per_watt * 1e-6; // counts/(s uW)
}

CountRecord sample_counts(double rate, const DetectionChain& chain, int n_shots,
                          std::uint64_t seed) {
    if (rate < 0.0) throw std::invalid_argument("rate must be >= 0");
    if (n_shots < 1) throw std::invalid_argument("n_shots must be >= 1");
    return sample_counts(std::vector<double>(static_cast<std::size_t>(n_shots), rate),
                         chain, seed);
}

CountRecord sample_counts(const std::vector<double>& rates_per_shot,
                          const DetectionChain& chain, std::uint64_t seed) {
    if (rates_per_shot.empty()) throw std::invalid_argument("need at least one shot");
    chain.validate();
    auto rng = make_rng(seed);
    CountRecord record;
    record.counts.reserve(rates_per_shot.size());
    double total = 0.0;
    for (double rate : rates_per_shot) {
        if (rate < 0.0) throw std::invalid_argument("rate must be >= 0");
        const double mean = rate * chain.exposure;
        long long c = 0;
        if (mean > 0.0) {
            std::poisson_distribution<long long> poisson(mean);
            c = poisson(rng);
        }
        record.counts.push_back(c);
        total += static_cast<double>(c);
    }
    record.mean_rate = total / (static_cast<double>(rates_per_shot.size()) * chain.exposure);
    return record;
}

LognormalFit lognormal_estimate(const std::vector<long long>& counts, double exposure,
                                double zero_offset) {
    if (counts.empty()) throw std::invalid_argument("counts must be nonempty");
    if (!(exposure > 0.0)) throw std::invalid_argument("exposure must be positive");
    bool any_positive = false;
    for (long long c : counts) {
        if (c < 0) throw std::invalid_argument("counts must be >= 0");
        if (c > 0) any_positive = true;
    }
    if (!any_positive)
        throw std::domain_error("lognormal_estimate: all counts are zero (degenerate data)");

    const auto n = static_cast<double>(counts.size());
    double mu = 0.0;
    std::vector<double> logs;
    logs.reserve(counts.size());
    for (long long c : counts) {
        const double effective = c == 0 ? zero_offset : static_cast<double>(c);
        logs.push_back(std::log(effective / exposure));
        mu += logs.back();
    }
    mu /= n;
    double var = 0.0;
    for (double v : logs) var += (v - mu) * (v - mu);
    var /= n; // MLE variance

    LognormalFit fit;
    fit.location = mu;
    fit.scale = std::sqrt(var);
    fit.mean_rate = std::exp(mu + var / 2.0);
    // Delta-method standard error of the log-normal mean.
    fit.rate_error = fit.mean_rate * std::sqrt(var / n + var * var / (2.0 * n));
    return fit;
}

double atom_noise_corrected_peak(double eta, double n_mean, double n_var, double beta,
                                 const SystemParams& params, double g) {
    if (!(n_mean > 0.0)) throw std::invalid_argument("n_mean must be positive");
    if (n_var < 0.0) throw std::invalid_argument("n_var must be >= 0");
    if (g < 0.0) g = params.g_max;
    const double width_sq =
        (params.kappa + params.gamma) * (params.kappa + params.gamma);
    const double correction = 1.0 - 4.0 * g * g / width_sq * (n_var / n_mean);
    if (correction <= 0.0)
        throw std::domain_error("atom_noise_corrected_peak: correction factor <= 0, "
                                "perturbative formula out of regime");
    return 4.0 * eta * eta * std::pow(n_mean, beta - 1.0) / width_sq * correction;
}

} // namespace subrad
