#include "subrad/ensemble.hpp"

#include <cmath>
#include <stdexcept>

#include "subrad/rng.hpp"

namespace subrad {

void AtomEnsemble::validate() const {
    const std::size_t n_atoms = positions_x.size();
    if (positions_z.size() != n_atoms || radial_weight.size() != n_atoms ||
        mf_state.size() != n_atoms)
        throw std::invalid_argument("ensemble lists must share one length");
    for (double w : radial_weight)
        if (!(w > 0.0) || w > 1.0)
            throw std::invalid_argument("radial_weight must lie in (0, 1]");
    for (int m : mf_state)
        if (m < -2 || m > 2)
            throw std::invalid_argument("mF must lie in -2..2");
}

SamplerKind sampler_kind_from_string(const std::string& name) {
    if (name == "lattice") return SamplerKind::lattice;
    if (name == "commensurate") return SamplerKind::commensurate;
    if (name == "uniform" || name == "uniform_random") return SamplerKind::uniform_random;
    throw std::invalid_argument("unknown sampler kind: " + name);
}

std::string to_string(SamplerKind kind) {
    switch (kind) {
        case SamplerKind::lattice: return "lattice";
        case SamplerKind::commensurate: return "commensurate";
        case SamplerKind::uniform_random: return "uniform";
    }
    return "?";
}

double thermal_site_rms(const SystemParams& params) {
    return params.lambda_trap / two_pi *
           std::sqrt(params.temperature / (2.0 * params.trap_depth));
}

namespace {

void check_count(int n_atoms) {
    if (n_atoms < 0) throw std::invalid_argument("atom count must be nonnegative");
}

AtomEnsemble reserve(int n_atoms) {
    AtomEnsemble e;
    e.positions_x.reserve(static_cast<std::size_t>(n_atoms));
    e.positions_z.reserve(static_cast<std::size_t>(n_atoms));
    e.radial_weight.reserve(static_cast<std::size_t>(n_atoms));
    e.mf_state.reserve(static_cast<std::size_t>(n_atoms));
    return e;
}

int sample_mf(const std::array<double, 5>& p, double u) {
    double acc = 0.0, total = 0.0;
    for (double v : p) total += v;
    for (int i = 0; i < 5; ++i) {
        acc += p[static_cast<std::size_t>(i)] / total;
        if (u < acc) return i - 2;
    }
    return 2;
}

} // namespace

AtomEnsemble sample_lattice_ensemble(const SystemParams& params, int n_atoms,
                                     std::uint64_t seed, const SamplerConfig& config) {
    check_count(n_atoms);
    params.validate();

    const double cloud_rms = config.axial_cloud_rms < 0.0 ? params.mode_waist
                                                          : config.axial_cloud_rms;
    const double z_extent = config.z_extent < 0.0 ? params.drive_waist : config.z_extent;
    const double radial_rms = config.radial_cloud_rms < 0.0 ? params.mode_waist / 2.0
                                                            : config.radial_cloud_rms;
    const double spacing = params.site_spacing();
    const double site_rms = cloud_rms / spacing; // envelope RMS in units of sites
    const double sigma_x = thermal_site_rms(params);
    const double waist_sq = params.mode_waist * params.mode_waist;

    auto rng = make_rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    AtomEnsemble e = reserve(n_atoms);
    for (int a = 0; a < n_atoms; ++a) {
        const double site = std::round(site_rms * normal(rng));
        const double x = site * spacing + sigma_x * normal(rng);
        const double z = (unit(rng) - 0.5) * z_extent;
        double w = 1.0;
        if (radial_rms > 0.0) {
            const double ry = radial_rms * normal(rng);
            const double rz = radial_rms * normal(rng);
            w = std::exp(-(ry * ry + rz * rz) / waist_sq);
        }
        e.positions_x.push_back(x);
        e.positions_z.push_back(z);
        e.radial_weight.push_back(w);
        e.mf_state.push_back(sample_mf(config.mf_probabilities, unit(rng)));
    }
    return e;
}

AtomEnsemble sample_commensurate_ensemble(const SystemParams& params, int n_atoms,
                                          std::uint64_t seed, const SamplerConfig& config) {
    check_count(n_atoms);
    params.validate();
    const double period = params.lambda_probe; // antinode spacing of cos(kx) with cos = +1

    auto rng = make_rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    AtomEnsemble e = reserve(n_atoms);
    for (int a = 0; a < n_atoms; ++a) {
        e.positions_x.push_back(static_cast<double>(a) * period);
        e.positions_z.push_back(static_cast<double>(a) * period);
        e.radial_weight.push_back(1.0);
        e.mf_state.push_back(sample_mf(config.mf_probabilities, unit(rng)));
    }
    return e;
}

AtomEnsemble sample_uniform_ensemble(const SystemParams& params, int n_atoms,
                                     std::uint64_t seed, const SamplerConfig& config) {
    check_count(n_atoms);
    params.validate();
    const double period = params.lambda_probe;

    auto rng = make_rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    AtomEnsemble e = reserve(n_atoms);
    for (int a = 0; a < n_atoms; ++a) {
        e.positions_x.push_back(unit(rng) * period);
        e.positions_z.push_back(unit(rng) * period);
        e.radial_weight.push_back(1.0);
        e.mf_state.push_back(sample_mf(config.mf_probabilities, unit(rng)));
    }
    return e;
}

AtomEnsemble sample_ensemble(SamplerKind kind, const SystemParams& params, int n_atoms,
                             std::uint64_t seed, const SamplerConfig& config) {
    switch (kind) {
        case SamplerKind::lattice:
            return sample_lattice_ensemble(params, n_atoms, seed, config);
        case SamplerKind::commensurate:
            return sample_commensurate_ensemble(params, n_atoms, seed, config);
        case SamplerKind::uniform_random:
            return sample_uniform_ensemble(params, n_atoms, seed, config);
    }
    throw std::invalid_argument("unknown sampler kind");
}

double effective_atom_number(const AtomEnsemble& ensemble, const SystemParams& params) {
    const double k = params.probe_k();
    double sum = 0.0;
    for (int a = 0; a < ensemble.n(); ++a) {
        const auto i = static_cast<std::size_t>(a);
        const double c = std::cos(k * ensemble.positions_x[i]);
        const double w = ensemble.radial_weight[i];
        sum += w * w * c * c;
    }
    return sum;
}

} // namespace subrad
