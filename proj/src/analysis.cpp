#include "subrad/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace subrad {

double LorentzianSum::evaluate(double x) const {
    double value = offset;
    for (const Lorentzian& c : components) {
        const double dx = x - c.center;
        value += c.amplitude * c.hwhm * c.hwhm / (dx * dx + c.hwhm * c.hwhm);
    }
    return value;
}

Eigen::VectorXd LorentzianSum::pack() const {
    Eigen::VectorXd p(1 + 3 * static_cast<long>(components.size()));
    p(0) = offset;
    for (std::size_t j = 0; j < components.size(); ++j) {
        p(1 + 3 * static_cast<long>(j)) = components[j].amplitude;
        p(2 + 3 * static_cast<long>(j)) = components[j].center;
        p(3 + 3 * static_cast<long>(j)) = components[j].hwhm;
    }
    return p;
}

LorentzianSum LorentzianSum::unpack(const Eigen::VectorXd& p) {
    LorentzianSum sum;
    sum.offset = p(0);
    const long n = (p.size() - 1) / 3;
    for (long j = 0; j < n; ++j)
        sum.components.push_back({p(1 + 3 * j), p(2 + 3 * j), std::abs(p(3 + 3 * j))});
    return sum;
}

LorentzianSum auto_initialize(const std::vector<double>& x, const std::vector<double>& y,
                              int n_components, double width_hint) {
    const std::size_t n = x.size();
    std::vector<double> sorted_y = y;
    std::sort(sorted_y.begin(), sorted_y.end());
    const double offset = sorted_y[static_cast<std::size_t>(0.1 * (n - 1))];

    // Interior local maxima, ranked by height.
    std::vector<std::size_t> maxima;
    for (std::size_t i = 1; i + 1 < n; ++i)
        if (y[i] >= y[i - 1] && y[i] >= y[i + 1]) maxima.push_back(i);
    std::sort(maxima.begin(), maxima.end(),
              [&](std::size_t a, std::size_t b) { return y[a] > y[b]; });

    // A single component belongs on the global maximum, not on a side peak.
    if (n_components == 1) {
        std::size_t i_max = 0;
        for (std::size_t i = 1; i < n; ++i)
            if (y[i] > y[i_max]) i_max = i;
        LorentzianSum init;
        init.offset = offset;
        init.components.push_back(
            {std::max(y[i_max] - offset, 1e-12), x[i_max], width_hint / 2.0});
        return init;
    }

    auto best_beyond = [&](int sign) -> std::optional<std::size_t> {
        for (std::size_t i : maxima)
            if (sign * x[i] > width_hint) return i;
        return std::nullopt;
    };
    auto outer_neg = best_beyond(-1);
    auto outer_pos = best_beyond(+1);
    // Fallback: the two highest maxima overall, then the grid extremes.
    if (!outer_neg || !outer_pos) {
        std::vector<std::size_t> picked;
        for (std::size_t i : maxima) {
            if (picked.size() == 2) break;
            picked.push_back(i);
        }
        while (picked.size() < 2) picked.push_back(picked.empty() ? n / 4 : 3 * n / 4);
        std::sort(picked.begin(), picked.end(), [&](auto a, auto b) { return x[a] < x[b]; });
        outer_neg = picked[0];
        outer_pos = picked[1];
    }

    LorentzianSum init;
    init.offset = offset;
    const double w0 = width_hint / 2.0;
    const double amp_neg = std::max(y[*outer_neg] - offset, 1e-12);
    const double amp_pos = std::max(y[*outer_pos] - offset, 1e-12);
    init.components.push_back({amp_neg, x[*outer_neg], w0});
    if (n_components >= 2) init.components.push_back({amp_pos, x[*outer_pos], w0});
    if (n_components >= 3)
        init.components.push_back({0.1 * amp_neg, -width_hint / 2.0, w0});
    if (n_components >= 4)
        init.components.push_back({0.1 * amp_pos, +width_hint / 2.0, w0});
    init.components.resize(static_cast<std::size_t>(n_components),
                           {0.05 * amp_pos, 0.0, w0});
    return init;
}

namespace {

void fill_model(const Eigen::VectorXd& p, const std::vector<double>& x,
                Eigen::VectorXd& f, Eigen::MatrixXd& jacobian) {
    const long n_comp = (p.size() - 1) / 3;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const long row = static_cast<long>(i);
        double value = p(0);
        jacobian(row, 0) = 1.0;
        for (long j = 0; j < n_comp; ++j) {
            const double amp = p(1 + 3 * j);
            const double center = p(2 + 3 * j);
            const double hwhm = p(3 + 3 * j);
            const double dx = x[i] - center;
            const double denom = dx * dx + hwhm * hwhm;
            const double shape = hwhm * hwhm / denom;
            value += amp * shape;
            jacobian(row, 1 + 3 * j) = shape;
            jacobian(row, 2 + 3 * j) = amp * hwhm * hwhm * 2.0 * dx / (denom * denom);
            jacobian(row, 3 + 3 * j) =
                amp * 2.0 * hwhm * dx * dx / (denom * denom);
        }
        f(row) = value;
    }
}

} // namespace

FitResult fit_lorentzian_sum(const std::vector<double>& x, const std::vector<double>& y,
                             const std::vector<double>& sigma, int n_components,
                             const std::optional<LorentzianSum>& init,
                             const LorentzianFitOptions& options) {
    if (n_components < 1 || n_components > 4)
        throw std::invalid_argument("n_components must be in 1..4");
    if (x.size() != y.size()) throw std::invalid_argument("x and y size mismatch");
    if (x.size() < static_cast<std::size_t>(3 * n_components + 1))
        throw std::invalid_argument("need at least 3*n_components + 1 grid points");
    if (!sigma.empty() && sigma.size() != x.size())
        throw std::invalid_argument("sigma size mismatch");

    const long n_points = static_cast<long>(x.size());
    const long n_params = 1 + 3 * n_components;

    Eigen::VectorXd weight_sqrt(n_points);
    for (long i = 0; i < n_points; ++i) {
        double s = sigma.empty() ? 1.0 : sigma[static_cast<std::size_t>(i)];
        if (!(s > 0.0)) s = 1.0; // zero-variance points get unit weight
        weight_sqrt(i) = 1.0 / s;
    }
    Eigen::VectorXd yv(n_points);
    for (long i = 0; i < n_points; ++i) yv(i) = y[static_cast<std::size_t>(i)];

    LorentzianSum start =
        init ? *init : auto_initialize(x, y, n_components, options.width_hint);
    Eigen::VectorXd p = start.pack();

    Eigen::VectorXd f(n_points);
    Eigen::MatrixXd jacobian(n_points, n_params);
    fill_model(p, x, f, jacobian);
    Eigen::VectorXd residual = (yv - f).cwiseProduct(weight_sqrt);
    double cost = residual.squaredNorm();

    double lambda = 1e-3;
    bool converged = false;
    int iterations = 0;
    for (; iterations < options.max_iterations && !converged; ++iterations) {
        const Eigen::MatrixXd jw = weight_sqrt.asDiagonal() * jacobian;
        const Eigen::MatrixXd jtj = jw.transpose() * jw;
        const Eigen::VectorXd jtr = jw.transpose() * residual;

        bool stepped = false;
        for (int attempt = 0; attempt < 40; ++attempt) {
            Eigen::MatrixXd damped = jtj;
            for (long d = 0; d < n_params; ++d)
                damped(d, d) += lambda * std::max(jtj(d, d), 1e-300);
            const Eigen::VectorXd step = damped.ldlt().solve(jtr);
            const Eigen::VectorXd p_trial = p + step;
            fill_model(p_trial, x, f, jacobian);
            const Eigen::VectorXd r_trial = (yv - f).cwiseProduct(weight_sqrt);
            const double cost_trial = r_trial.squaredNorm();
            if (cost_trial <= cost) {
                const double decrease = cost - cost_trial;
                p = p_trial;
                residual = r_trial;
                cost = cost_trial;
                lambda = std::max(lambda / 3.0, 1e-14);
                stepped = true;
                if (decrease <= options.tolerance * std::max(cost, 1e-300) ||
                    step.norm() <= 1e-14 * std::max(p.norm(), 1e-300))
                    converged = true;
                break;
            }
            lambda *= 10.0;
        }
        if (!stepped) {
            converged = true; // no improving step found; at a (local) optimum
            fill_model(p, x, f, jacobian);
        }
    }

    FitResult result;
    // Fold widths to positive; flag amplitudes pinned nonphysical.
    for (int j = 0; j < n_components; ++j) {
        p(3 + 3 * j) = std::abs(p(3 + 3 * j));
        if (p(1 + 3 * j) < 0.0 || p(3 + 3 * j) == 0.0) result.at_bound = true;
    }
    fill_model(p, x, f, jacobian);
    result.parameters = p;
    result.converged = converged;
    result.iterations = iterations;
    result.residual_norm = std::sqrt(((yv - f).cwiseProduct(weight_sqrt)).squaredNorm());

    const Eigen::MatrixXd jw = weight_sqrt.asDiagonal() * jacobian;
    Eigen::MatrixXd jtj = jw.transpose() * jw;
    Eigen::MatrixXd cov = jtj.completeOrthogonalDecomposition().pseudoInverse();
    if (sigma.empty() && n_points > n_params) {
        const double s2 = cost / static_cast<double>(n_points - n_params);
        cov *= s2;
    }
    result.covariance = 0.5 * (cov + cov.transpose());
    return result;
}

RabiPeaks extract_rabi_peaks(const FitResult& fit) {
    const long n_comp = (fit.parameters.size() - 1) / 3;
    if (n_comp < 2)
        throw std::runtime_error("extract_rabi_peaks: need at least two components");
    if (!fit.converged)
        throw std::runtime_error("extract_rabi_peaks: fit did not converge");

    long j_min = 0, j_max = 0;
    for (long j = 1; j < n_comp; ++j) {
        if (fit.parameters(2 + 3 * j) < fit.parameters(2 + 3 * j_min)) j_min = j;
        if (fit.parameters(2 + 3 * j) > fit.parameters(2 + 3 * j_max)) j_max = j;
    }
    RabiPeaks peaks;
    peaks.delta_minus = fit.parameters(2 + 3 * j_min);
    peaks.delta_plus = fit.parameters(2 + 3 * j_max);
    peaks.width_minus = fit.parameters(3 + 3 * j_min);
    peaks.width_plus = fit.parameters(3 + 3 * j_max);
    peaks.height_minus = fit.parameters(1 + 3 * j_min);
    peaks.height_plus = fit.parameters(1 + 3 * j_max);
    if (peaks.delta_plus - peaks.delta_minus <
        0.5 * (peaks.width_minus + peaks.width_plus))
        throw std::runtime_error("extract_rabi_peaks: splitting unresolved");
    return peaks;
}

ParabolaFit fit_parabola_geff(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 3)
        throw std::invalid_argument("fit_parabola_geff: need >= 3 points");
    double n_min = points[0].first, n_max = points[0].first;
    for (const auto& [n_eff, delta] : points) {
        if (!(n_eff > 0.0)) throw std::invalid_argument("N_eff must be positive");
        n_min = std::min(n_min, n_eff);
        n_max = std::max(n_max, n_eff);
    }
    if (n_max < 2.0 * n_min)
        throw std::invalid_argument("fit_parabola_geff: N_eff span must cover a factor >= 2");

    // N_eff = u Delta^2 with u = 1/g^2; linear least squares through the origin.
    double sum_nd = 0.0, sum_d4 = 0.0;
    for (const auto& [n_eff, delta] : points) {
        const double d2 = delta * delta;
        sum_nd += n_eff * d2;
        sum_d4 += d2 * d2;
    }
    if (!(sum_d4 > 0.0)) throw std::invalid_argument("degenerate detunings");
    const double u = sum_nd / sum_d4;
    if (!(u > 0.0)) throw std::invalid_argument("fit_parabola_geff: nonpositive curvature");

    double rss = 0.0;
    for (const auto& [n_eff, delta] : points) {
        const double r = n_eff - u * delta * delta;
        rss += r * r;
    }
    const double dof = static_cast<double>(points.size()) - 1.0;
    const double var_u = (dof > 0.0 ? rss / dof : 0.0) / sum_d4;

    ParabolaFit fit;
    fit.g_eff = 1.0 / std::sqrt(u);
    fit.uncertainty = 0.5 * std::sqrt(var_u) / (u * std::sqrt(u));
    return fit;
}

PowerLawFit fit_power_law_beta(const std::vector<std::pair<double, double>>& points,
                               const std::vector<double>& sigma) {
    if (points.size() < 4)
        throw std::invalid_argument("fit_power_law_beta: need >= 4 points");
    if (!sigma.empty() && sigma.size() != points.size())
        throw std::invalid_argument("sigma size mismatch");

    // Weighted OLS of log(value) on log(N).
    double sw = 0.0, sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::vector<double> lx(points.size()), ly(points.size()), w(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto& [n, value] = points[i];
        if (!(n > 0.0) || !(value > 0.0))
            throw std::invalid_argument("fit_power_law_beta: nonpositive data");
        lx[i] = std::log(n);
        ly[i] = std::log(value);
        // sigma of value -> sigma of log(value) ~ sigma/value
        w[i] = sigma.empty() ? 1.0 : 1.0 / std::pow(sigma[i] / value, 2);
        sw += w[i];
        sx += w[i] * lx[i];
        sy += w[i] * ly[i];
        sxx += w[i] * lx[i] * lx[i];
        sxy += w[i] * lx[i] * ly[i];
    }
    const double denom = sw * sxx - sx * sx;
    if (!(denom > 0.0)) throw std::invalid_argument("degenerate abscissae");
    const double slope = (sw * sxy - sx * sy) / denom;
    const double intercept = (sy - slope * sx) / sw;

    double chi2 = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const double r = ly[i] - intercept - slope * lx[i];
        chi2 += w[i] * r * r;
    }
    const double dof = static_cast<double>(points.size()) - 2.0;
    // Residual-scaled error when weights are uniform, chi-square error otherwise.
    const double scale = sigma.empty() ? (dof > 0.0 ? chi2 / dof : 0.0) : 1.0;

    PowerLawFit fit;
    fit.beta = slope;
    fit.uncertainty = std::sqrt(scale * sw / denom);
    return fit;
}

double calibrate_atom_number(double shift, const SystemParams& params, double delta_A,
                             double g) {
    if (std::abs(delta_A) < 10.0 * params.gamma)
        throw std::domain_error("calibrate_atom_number: |Delta_A| must be >= 10 gamma "
                                "(dispersive regime)");
    if (g < 0.0) g = params.g_max;
    return shift * delta_A / (g * g);
}

double refine_peak_quadratic(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 3)
        throw std::invalid_argument("refine_peak_quadratic: need >= 3 points");
    std::size_t i_max = 0;
    for (std::size_t i = 1; i < y.size(); ++i)
        if (y[i] > y[i_max]) i_max = i;
    if (i_max == 0 || i_max + 1 == y.size()) return x[i_max];
    const double y0 = y[i_max - 1], y1 = y[i_max], y2 = y[i_max + 1];
    const double denom = y0 - 2.0 * y1 + y2;
    if (denom == 0.0) return x[i_max];
    const double h = x[i_max + 1] - x[i_max];
    return x[i_max] + 0.5 * h * (y0 - y2) / denom;
}

} // namespace subrad
