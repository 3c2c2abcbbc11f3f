#pragma once

#include <numbers>

namespace subrad {

inline constexpr double two_pi = 2.0 * std::numbers::pi;
inline constexpr double hbar = 1.054571817e-34;     // J s
inline constexpr double speed_of_light = 2.99792458e8; // m/s

// Cavity, atom, trap and drive constants.  All frequencies are angular
// (rad/s) and all linewidths are HWHM.  Lengths in metres, temperatures in
// kelvin.
struct SystemParams {
    double kappa = two_pi * 4.0e6;        // cavity linewidth
    double kappa_T = two_pi * 1.15e6;     // decay through mirror transmission
    double gamma = two_pi * 3.0e6;        // atomic linewidth
    double g_max = two_pi * 0.33e6;       // maximum single-atom coupling
    double lambda_probe = 780e-9;         // probe/cavity wavelength
    double lambda_trap = 805e-9;          // trap lattice wavelength
    double cavity_length = 15e-3;
    double mode_waist = 127e-6;
    double trap_depth = 140e-6;           // K
    double temperature = 25e-6;           // K (20-50 uK in the experiment)
    double drive_waist = 1e-3;

    // Probe wavenumber k = 2 pi / lambda_probe.
    double probe_k() const { return two_pi / lambda_probe; }
    // Lattice site spacing lambda_trap / 2.
    double site_spacing() const { return lambda_trap / 2.0; }

    // Throws std::invalid_argument on violated invariants.  temperature == 0
    // is accepted as the degenerate zero-thermal-spread limit.
    void validate() const;
};

// Transverse drive parameters.  eta is the effective drive amplitude in
// angular frequency units; its absolute calibration is free (the detection
// module fixes absolute rates independently).
struct DriveParams {
    double eta = two_pi * 1.0e6;
    double delta_A = 0.0;   // omega - omega_A
    double delta_C = 0.0;   // omega - omega_C
    double power = 16e-6;   // W, transverse drive optical power

    // The paper's resonant setting Delta = Delta_A = Delta_C.
    static DriveParams resonant(double eta, double delta, double power = 16e-6) {
        return DriveParams{eta, delta, delta, power};
    }
    DriveParams at_detuning(double delta) const {
        return DriveParams{eta, delta, delta, power};
    }

    void validate() const;
};

} // namespace subrad
