#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "subrad/analysis.hpp"
#include "subrad/rng.hpp"
#include "subrad/scattering.hpp"

using namespace subrad;

namespace {

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> x(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        x[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
    return x;
}

std::vector<double> evaluate_all(const LorentzianSum& model, const std::vector<double>& x) {
    std::vector<double> y;
    y.reserve(x.size());
    for (double v : x) y.push_back(model.evaluate(v));
    return y;
}

} // namespace

TEST_CASE("LorentzianSum evaluate / pack / unpack") {
    LorentzianSum model;
    model.offset = 1.5;
    model.components = {{4.0, -3.0, 2.0}, {6.0, 5.0, 1.0}};
    CHECK(model.evaluate(-3.0) ==
          doctest::Approx(1.5 + 4.0 + 6.0 * 1.0 / (64.0 + 1.0)).epsilon(1e-12));
    const LorentzianSum round = LorentzianSum::unpack(model.pack());
    CHECK(round.offset == model.offset);
    REQUIRE(round.components.size() == 2);
    CHECK(round.components[1].center == 5.0);
    CHECK(round.components[1].hwhm == 1.0);
}

TEST_CASE("single-Lorentzian fit recovers parameters within 3 sigma") {
    LorentzianSum truth;
    truth.offset = 2.0;
    truth.components = {{10.0, 8.0, 7.0}};
    const auto x = linspace(-50.0, 50.0, 201);
    auto y = evaluate_all(truth, x);
    auto rng = make_rng(12);
    std::normal_distribution<double> noise(0.0, 0.05);
    for (double& v : y) v += noise(rng);
    const std::vector<double> sigma(x.size(), 0.05);

    LorentzianFitOptions options;
    options.width_hint = 7.0;
    const FitResult fit = fit_lorentzian_sum(x, y, sigma, 1, std::nullopt, options);
    REQUIRE(fit.converged);
    const Eigen::VectorXd truth_p = truth.pack();
    for (long i = 0; i < 4; ++i) {
        const double se = std::sqrt(fit.covariance(i, i));
        CHECK(std::abs(fit.parameters(i) - truth_p(i)) < 3.0 * se);
    }
    // chi^2 per dof near one for correctly weighted noise.
    const double chi2 = fit.residual_norm * fit.residual_norm;
    CHECK(chi2 / (201.0 - 4.0) == doctest::Approx(1.0).epsilon(0.3));
}

TEST_CASE("noise-free double peak is reproduced to machine-level residuals") {
    LorentzianSum truth;
    truth.offset = 0.3;
    truth.components = {{5.0, -18.0, 3.5}, {6.0, 18.0, 3.5}};
    const auto x = linspace(-50.0, 50.0, 151);
    const auto y = evaluate_all(truth, x);
    LorentzianFitOptions options;
    options.width_hint = 7.0;
    const FitResult fit = fit_lorentzian_sum(x, y, {}, 2, std::nullopt, options);
    REQUIRE(fit.converged);
    double y_norm = 0.0;
    for (double v : y) y_norm += v * v;
    CHECK(fit.residual_norm < 1e-8 * std::sqrt(y_norm));

    const RabiPeaks peaks = extract_rabi_peaks(fit);
    CHECK(peaks.delta_minus == doctest::Approx(-18.0).epsilon(1e-6));
    CHECK(peaks.delta_plus == doctest::Approx(18.0).epsilon(1e-6));
    CHECK(peaks.width_plus == doctest::Approx(3.5).epsilon(1e-6));
}

TEST_CASE("four-component fit still isolates the outer Rabi peaks") {
    LorentzianSum truth;
    truth.offset = 0.1;
    truth.components = {
        {5.0, -20.0, 3.5}, {5.5, 20.0, 3.5}, {0.8, -4.0, 3.0}, {0.7, 4.0, 3.0}};
    const auto x = linspace(-50.0, 50.0, 201);
    auto y = evaluate_all(truth, x);
    auto rng = make_rng(5);
    std::normal_distribution<double> noise(0.0, 0.02);
    for (double& v : y) v += noise(rng);
    LorentzianFitOptions options;
    options.width_hint = 7.0;
    const FitResult fit = fit_lorentzian_sum(x, y, {}, 4, std::nullopt, options);
    REQUIRE(fit.converged);
    const RabiPeaks peaks = extract_rabi_peaks(fit);
    CHECK(std::abs(peaks.delta_minus + 20.0) < 0.4); // within 2%
    CHECK(std::abs(peaks.delta_plus - 20.0) < 0.4);
}

TEST_CASE("fit input validation") {
    const auto x = linspace(-5.0, 5.0, 11);
    const std::vector<double> y(11, 1.0);
    CHECK_THROWS_AS(fit_lorentzian_sum(x, {1.0, 2.0}, {}, 1), std::invalid_argument);
    CHECK_THROWS_AS(fit_lorentzian_sum(x, y, {1.0}, 1), std::invalid_argument);
    CHECK_THROWS_AS(fit_lorentzian_sum(x, y, {}, 0), std::invalid_argument);
    CHECK_THROWS_AS(fit_lorentzian_sum(x, y, {}, 5), std::invalid_argument);
    CHECK_THROWS_AS(fit_lorentzian_sum({1.0, 2.0, 3.0}, {1.0, 2.0, 3.0}, {}, 1),
                    std::invalid_argument);
}

TEST_CASE("extract_rabi_peaks rejects unusable fits") {
    FitResult one;
    one.converged = true;
    one.parameters = Eigen::VectorXd::Zero(4);
    CHECK_THROWS_AS(extract_rabi_peaks(one), std::runtime_error);

    FitResult merged;
    merged.converged = true;
    merged.parameters = Eigen::VectorXd::Zero(7);
    // Two components whose separation is below the mean width: unresolved.
    merged.parameters << 0.0, 1.0, -1.0, 4.0, 1.0, 1.0, 4.0;
    CHECK_THROWS_AS(extract_rabi_peaks(merged), std::runtime_error);

    FitResult diverged;
    diverged.converged = false;
    diverged.parameters = Eigen::VectorXd::Zero(7);
    CHECK_THROWS_AS(extract_rabi_peaks(diverged), std::runtime_error);
}

TEST_CASE("parabola fit of the collective coupling") {
    const double g = two_pi * 0.26e6;
    std::vector<std::pair<double, double>> points;
    for (double n_eff : {750.0, 1500.0, 3000.0, 5000.0}) {
        points.emplace_back(n_eff, -std::sqrt(n_eff) * g);
        points.emplace_back(n_eff, std::sqrt(n_eff) * g);
    }
    const ParabolaFit fit = fit_parabola_geff(points);
    CHECK(fit.g_eff == doctest::Approx(g).epsilon(1e-9));
    CHECK(fit.uncertainty == doctest::Approx(0.0).scale(g).epsilon(1e-6));

    CHECK_THROWS_AS(fit_parabola_geff({{100.0, 1.0}, {200.0, 2.0}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        fit_parabola_geff({{100.0, 1.0}, {120.0, 1.1}, {150.0, 1.2}}),
        std::invalid_argument); // span < factor 2
    CHECK_THROWS_AS(
        fit_parabola_geff({{-1.0, 1.0}, {100.0, 1.0}, {300.0, 2.0}}),
        std::invalid_argument);
}

TEST_CASE("power-law exponent regression") {
    std::vector<std::pair<double, double>> points;
    for (double n : {100.0, 300.0, 1000.0, 3000.0, 10000.0})
        points.emplace_back(n, 0.37 * std::pow(n, 1.7));
    const PowerLawFit exact = fit_power_law_beta(points);
    CHECK(exact.beta == doctest::Approx(1.7).epsilon(1e-9));
    CHECK(exact.uncertainty < 1e-6);

    std::vector<double> sigma;
    for (auto& [n, v] : points) sigma.push_back(0.05 * v);
    const PowerLawFit weighted = fit_power_law_beta(points, sigma);
    CHECK(weighted.beta == doctest::Approx(1.7).epsilon(1e-9));
    CHECK(weighted.uncertainty > 0.0);

    CHECK_THROWS_AS(fit_power_law_beta({{1.0, 1.0}, {2.0, 2.0}, {3.0, 3.0}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        fit_power_law_beta({{1.0, 1.0}, {2.0, -2.0}, {3.0, 3.0}, {4.0, 4.0}}),
        std::invalid_argument);
}

TEST_CASE("dispersive atom-number calibration") {
    const SystemParams params;
    const double g = params.g_max;
    const double n_eff = 2500.0;
    const double delta_A = -two_pi * 90e6;

    // Exact inversion of the defining relation.
    const double shift = g * g * n_eff / delta_A;
    CHECK(calibrate_atom_number(shift, params, delta_A) ==
          doctest::Approx(n_eff).epsilon(1e-12));
    CHECK(calibrate_atom_number(0.0, params, delta_A) == 0.0);
    CHECK_THROWS_AS(calibrate_atom_number(shift, params, -5.0 * params.gamma),
                    std::domain_error);

    // End to end: locate the shifted transmission peak, then invert.  The
    // residual gamma^2/Delta_A^2 bias is ~0.1%, well within 3%.
    const double expected_peak =
        g * g * n_eff * delta_A / (delta_A * delta_A + params.gamma * params.gamma);
    const auto offsets = detuning_grid(two_pi * 3e6, 601);
    std::vector<double> xs(offsets.size()), ys(offsets.size());
    for (std::size_t i = 0; i < offsets.size(); ++i) {
        xs[i] = expected_peak + offsets[i];
        ys[i] = transmission_response(params, g, n_eff, delta_A, xs[i]);
    }
    const double found = refine_peak_quadratic(xs, ys);
    const double recovered = calibrate_atom_number(found, params, delta_A);
    CHECK(recovered == doctest::Approx(n_eff).epsilon(0.03));
    CHECK(recovered == doctest::Approx(n_eff).epsilon(0.005)); // actually ~0.1%
}

TEST_CASE("quadratic peak refinement") {
    // Exact parabola: vertex recovered exactly up to rounding.
    std::vector<double> x, y;
    for (int i = 0; i <= 20; ++i) {
        const double v = -5.0 + 0.5 * i;
        x.push_back(v);
        y.push_back(10.0 - (v - 1.3) * (v - 1.3));
    }
    CHECK(refine_peak_quadratic(x, y) == doctest::Approx(1.3).epsilon(1e-9));

    // Monotone data: the edge sample is returned unrefined.
    std::vector<double> ramp_y;
    for (double v : x) ramp_y.push_back(v);
    CHECK(refine_peak_quadratic(x, ramp_y) == x.back());

    CHECK_THROWS_AS(refine_peak_quadratic({1.0, 2.0}, {1.0, 2.0}),
                    std::invalid_argument);
}
