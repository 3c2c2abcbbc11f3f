#pragma once

#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "subrad/params.hpp"

namespace subrad {

// Outcome of a nonlinear or linear least-squares fit.
struct FitResult {
    Eigen::VectorXd parameters;
    Eigen::MatrixXd covariance;
    double residual_norm = 0.0;
    bool converged = false;
    bool at_bound = false; // amplitude or width pinned at its physical bound
    int iterations = 0;
};

struct Lorentzian {
    double amplitude = 0.0; // peak height
    double center = 0.0;
    double hwhm = 0.0;
};

// offset + sum_j A_j h_j^2 / ((x - c_j)^2 + h_j^2)
struct LorentzianSum {
    std::vector<Lorentzian> components;
    double offset = 0.0;

    double evaluate(double x) const;
    // Parameter layout [offset, (A, c, h) per component].
    Eigen::VectorXd pack() const;
    static LorentzianSum unpack(const Eigen::VectorXd& p);
};

struct LorentzianFitOptions {
    int max_iterations = 300;
    double tolerance = 1e-12;      // relative cost decrease
    double width_hint = two_pi * 7.0e6; // kappa + gamma; drives auto-initialization
};

// Deterministic starting point: offset at the 10th percentile, outer
// components on the two highest local maxima beyond |x| > width_hint (one
// per sign of x when possible), inner components at +-width_hint/2 with 10%
// of the outer amplitude.
LorentzianSum auto_initialize(const std::vector<double>& x, const std::vector<double>& y,
                              int n_components, double width_hint);

// Weighted Levenberg-Marquardt fit of a sum of n_components Lorentzians plus
// a constant offset.  sigma (per-point standard deviations) may be empty for
// uniform weights.  Covariance from the Jacobian at the optimum.
FitResult fit_lorentzian_sum(const std::vector<double>& x, const std::vector<double>& y,
                             const std::vector<double>& sigma, int n_components,
                             const std::optional<LorentzianSum>& init = std::nullopt,
                             const LorentzianFitOptions& options = {});

struct RabiPeaks {
    double delta_minus = 0.0;
    double delta_plus = 0.0;
    double width_minus = 0.0;
    double width_plus = 0.0;
    double height_minus = 0.0;
    double height_plus = 0.0;
};

// The two fit components with extreme centers.  Throws std::runtime_error if
// fewer than two components are present or the splitting is unresolved.
RabiPeaks extract_rabi_peaks(const FitResult& fit);

struct ParabolaFit {
    double g_eff = 0.0;
    double uncertainty = 0.0;
};

// Least squares of N_eff = Delta^2 / g_eff^2 on (N_eff, Delta_peak) points.
// Requires >= 3 points spanning a factor >= 2 in N_eff.
ParabolaFit fit_parabola_geff(const std::vector<std::pair<double, double>>& points);

struct PowerLawFit {
    double beta = 0.0;
    double uncertainty = 0.0;
};

// Weighted linear regression in log-log space on (N, value) points; returns
// the slope and its standard error.  Optional per-point standard deviations
// of `value`.
PowerLawFit fit_power_law_beta(const std::vector<std::pair<double, double>>& points,
                               const std::vector<double>& sigma = {});

// Dispersive atom-number calibration N_eff = shift * Delta_A / g^2.
// Requires |Delta_A| >= 10 gamma.  g < 0 selects params.g_max.
double calibrate_atom_number(double shift, const SystemParams& params, double delta_A,
                             double g = -1.0);

// Quadratic (three-point) interpolation of an extremum location around the
// argmax sample of y.
double refine_peak_quadratic(const std::vector<double>& x, const std::vector<double>& y);

} // namespace subrad
