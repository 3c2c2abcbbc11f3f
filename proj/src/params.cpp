#include "subrad/params.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace subrad {

namespace {
void require_positive(double value, const char* name) {
    if (!(value > 0.0) || !std::isfinite(value))
        throw std::invalid_argument(std::string(name) + " must be strictly positive");
}
} // namespace

void SystemParams::validate() const {
    require_positive(kappa, "kappa");
    require_positive(kappa_T, "kappa_T");
    require_positive(gamma, "gamma");
    require_positive(g_max, "g_max");
    require_positive(lambda_probe, "lambda_probe");
    require_positive(lambda_trap, "lambda_trap");
    require_positive(cavity_length, "cavity_length");
    require_positive(mode_waist, "mode_waist");
    require_positive(trap_depth, "trap_depth");
    require_positive(drive_waist, "drive_waist");
    if (lambda_trap == lambda_probe)
        throw std::invalid_argument("lambda_trap must differ from lambda_probe "
                                    "(incommensurability premise)");
    // temperature == 0 is the degenerate zero-spread limit, kept legal.
    if (temperature < 0.0 || !std::isfinite(temperature))
        throw std::invalid_argument("temperature must be nonnegative");
    if (temperature >= trap_depth)
        throw std::invalid_argument("temperature must be below trap_depth (bound atoms)");
}

void DriveParams::validate() const {
    if (power < 0.0 || !std::isfinite(power))
        throw std::invalid_argument("drive power must be nonnegative");
    if (!std::isfinite(eta) || !std::isfinite(delta_A) || !std::isfinite(delta_C))
        throw std::invalid_argument("drive parameters must be finite");
}

} // namespace subrad
