#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "subrad/params.hpp"

namespace subrad {

// Positions, Zeeman states and coupling weights of N trapped atoms.
struct AtomEnsemble {
    std::vector<double> positions_x;   // along the cavity axis
    std::vector<double> positions_z;   // along the drive axis
    std::vector<double> radial_weight; // transverse mode-profile attenuation, (0,1]
    std::vector<int> mf_state;         // ground Zeeman sublevel, -2..2

    int n() const { return static_cast<int>(positions_x.size()); }

    // Throws std::invalid_argument if list lengths disagree or entries are
    // out of range.
    void validate() const;
};

enum class SamplerKind { lattice, commensurate, uniform_random };

SamplerKind sampler_kind_from_string(const std::string& name);
std::string to_string(SamplerKind kind);

// Geometry knobs of the stochastic sampler.  Negative values mean "derive
// the default from SystemParams" as noted per field.
struct SamplerConfig {
    double axial_cloud_rms = -1.0;   // RMS extent of the site envelope; default mode_waist
    double z_extent = -1.0;          // illuminated length along z; default drive_waist
    double radial_cloud_rms = -1.0;  // per-axis RMS of the transverse cloud; default mode_waist/2
                                     // 0 puts every atom on axis (radial_weight = 1)
    // Ground-sublevel probabilities for m_F = -2..+2.  Default uniform; the
    // CLI wires in the optical-pumping steady state from the multilevel
    // module.
    std::array<double, 5> mf_probabilities = {0.2, 0.2, 0.2, 0.2, 0.2};
};

// Thermal RMS of the position about a lattice site centre, harmonic
// approximation of the well: sigma_x = (lambda_trap / 2 pi) sqrt(T / 2 U0).
double thermal_site_rms(const SystemParams& params);

// Atoms on an incommensurate (805 nm) lattice: site index from a Gaussian
// envelope, Gaussian thermal jitter within the well, uniform z over the
// illuminated extent, radial weight exp(-r^2/w^2) from a 2D Gaussian cloud.
AtomEnsemble sample_lattice_ensemble(const SystemParams& params, int n_atoms,
                                     std::uint64_t seed,
                                     const SamplerConfig& config = {});

// Control case for beta = 2: every atom exactly at an antinode of the probe
// mode in both x and z, radial weight 1.
AtomEnsemble sample_commensurate_ensemble(const SystemParams& params, int n_atoms,
                                          std::uint64_t seed,
                                          const SamplerConfig& config = {});

// Positions with uniformly random probe phases (the analytic beta = 1 case).
AtomEnsemble sample_uniform_ensemble(const SystemParams& params, int n_atoms,
                                     std::uint64_t seed,
                                     const SamplerConfig& config = {});

AtomEnsemble sample_ensemble(SamplerKind kind, const SystemParams& params,
                             int n_atoms, std::uint64_t seed,
                             const SamplerConfig& config = {});

// N_eff = sum_a w_a^2 cos^2(k x_a).
double effective_atom_number(const AtomEnsemble& ensemble, const SystemParams& params);

} // namespace subrad
