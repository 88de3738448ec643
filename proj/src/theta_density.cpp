#include "betalike/theta_density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "betalike/errors.hpp"
#include "betalike/parallel.hpp"
#include "betalike/quadrature.hpp"

namespace betalike {

namespace {

constexpr double kThetaClip = 1e-12;
constexpr double kMarginalRelTol = 1e-8;

// Normalizes exp-shifted log-integrals into a ThetaDensity. log_values may
// contain -inf where the density underflowed.
ThetaDensity assemble(std::vector<double> points, const std::vector<double>& log_values,
                      ThetaModel model) {
    double mx = -std::numeric_limits<double>::infinity();
    for (double v : log_values) mx = std::max(mx, v);
    if (!std::isfinite(mx))
        throw NumericalError("theta density vanished on the whole grid", mx, 0.0);
    Grid1D g;
    g.points = std::move(points);
    g.values.resize(log_values.size());
    for (std::size_t i = 0; i < log_values.size(); ++i)
        g.values[i] = std::exp(log_values[i] - mx);
    Normalized1D norm = normalize_grid(g);
    ThetaDensity out;
    out.grid = std::move(norm.grid);
    out.normalizer = norm.constant;
    out.model = model;
    return out;
}

}  // namespace

const char* theta_model_name(ThetaModel m) {
    switch (m) {
        case ThetaModel::logistic: return "logistic";
        case ThetaModel::exponential: return "exponential";
        case ThetaModel::weibull: return "weibull";
        case ThetaModel::maxent_approx: return "maxent_approx";
        case ThetaModel::grid_mixture: return "grid_mixture";
    }
    return "unknown";
}

std::vector<double> chebyshev_theta_points(std::size_t n) {
    if (n < 3) throw ValidationError("theta grid needs at least 3 points");
    std::vector<double> pts(n);
    const double pi = std::acos(-1.0);
    for (std::size_t i = 0; i < n; ++i)
        pts[i] = 0.5 * (1.0 - std::cos(pi * static_cast<double>(i) / static_cast<double>(n - 1)));
    pts.front() = kThetaClip;
    pts.back() = 1.0 - kThetaClip;
    return pts;
}

std::vector<double> uniform_theta_points(std::size_t n) {
    if (n < 3) throw ValidationError("theta grid needs at least 3 points");
    auto pts = linspace(0.0, 1.0, n);
    pts.front() = kThetaClip;
    pts.back() = 1.0 - kThetaClip;
    return pts;
}

ThetaDensity logistic_theta_density(const LogisticPosterior& p, double z, std::size_t grid_n) {
    if (!std::isfinite(z)) throw ValidationError("z must be finite");
    const double b1_lo = p.grid.axis2.front(), b1_hi = p.grid.axis2.back();
    const double shift = p.log_scale;

    auto points = chebyshev_theta_points(grid_n);
    std::vector<double> logI(points.size());
    par::run(points.size(), [&](std::size_t i) {
        const double theta = points[i];
        const double logit = std::log(theta) - std::log1p(-theta);
        // Peak of the integrand over b1, scanned on the posterior axis, keeps
        // the exponential well-conditioned before the adaptive pass.
        double m = -std::numeric_limits<double>::infinity();
        for (double b1 : p.grid.axis2) m = std::max(m, p.log_density(logit - b1 * z, b1) - shift);
        if (!std::isfinite(m)) {
            logI[i] = -std::numeric_limits<double>::infinity();
            return;
        }
        QuadResult r = integrate_adaptive(
            [&](double b1) { return std::exp(p.log_density(logit - b1 * z, b1) - shift - m); },
            b1_lo, b1_hi, kMarginalRelTol);
        if (!r.converged)
            throw NumericalError("logistic theta density: marginal integral over b1 did not "
                                 "converge at theta=" + std::to_string(theta),
                                 r.value, r.error);
        // Jacobian of (beta0, beta1) -> (theta, b1)
        logI[i] = m + std::log(r.value) - std::log(theta) - std::log1p(-theta);
    });

    ThetaDensity out = assemble(std::move(points), logI, ThetaModel::logistic);
    out.query.z = z;
    std::ostringstream notes;
    notes << "b1 integrated over [" << b1_lo << ", " << b1_hi << "] from the posterior grid";
    out.support_notes = notes.str();
    out.warnings = p.warnings;
    return out;
}

double exponential_theta_pdf(const ExponentialPosterior& p, double tau, double theta) {
    if (!(tau > 0.0)) throw ValidationError("tau must be > 0");
    if (!(theta > 0.0 && theta < 1.0)) return 0.0;
    const double rho = p.lambda_power;
    const double T = p.total_time;
    const double logth = std::log(theta);
    // [T/tau]^{rho+1} (-log th)^rho / (Gamma(rho+1) th) * th^{T/tau}
    const double log_pdf = (rho + 1.0) * std::log(T / tau) + rho * std::log(-logth) -
                           std::lgamma(rho + 1.0) - logth + (T / tau) * logth;
    return std::exp(log_pdf);
}

ThetaDensity exponential_theta_density(const ExponentialPosterior& p, double tau,
                                       std::size_t grid_n) {
    if (!(tau > 0.0)) throw ValidationError("tau must be > 0");
    auto points = chebyshev_theta_points(grid_n);
    Grid1D g;
    g.points = points;
    g.values.resize(points.size());
    for (std::size_t i = 0; i < points.size(); ++i)
        g.values[i] = exponential_theta_pdf(p, tau, points[i]);
    // The closed form integrates to one exactly; the tabulated values are
    // rescaled by the grid's own trapezoid mass (a ppm-level factor) so the
    // emitted table satisfies the grid normalization contract too.
    const double mass = trapezoid(g);
    for (double& v : g.values) v /= mass;

    ThetaDensity out;
    out.grid = std::move(g);
    // analytically normalized: (T/tau)^{rho+1} / Gamma(rho+1)
    out.normalizer =
        std::exp((p.lambda_power + 1.0) * std::log(p.total_time / tau) -
                 std::lgamma(p.lambda_power + 1.0));
    out.model = ThetaModel::exponential;
    out.query.tau = tau;
    out.support_notes = "closed-form density, analytic normalization";
    return out;
}

double exponential_theta_mean(const ExponentialPosterior& p, double tau) {
    if (!(tau > 0.0)) throw ValidationError("tau must be > 0");
    const double T = p.total_time;
    return std::pow(T / (T + tau), p.lambda_power + 1.0);
}

ThetaDensity weibull_theta_density(const WeibullPosterior& p, double tau, std::size_t grid_n) {
    if (!(tau > 0.0)) throw ValidationError("tau must be > 0");
    const double k_lo = p.grid.axis1.front(), k_hi = p.grid.axis1.back();
    const double shift = p.log_scale;
    const double log_tau = std::log(tau);

    auto points = chebyshev_theta_points(grid_n);
    std::vector<double> logI(points.size());
    par::run(points.size(), [&](std::size_t i) {
        const double theta = points[i];
        const double log_neglog = std::log(-std::log(theta));
        // integrand over kappa: posterior at (kappa, lambda(theta,kappa))
        // times |d lambda / d theta| = (-log th)^{1/kappa - 1} / (tau kappa theta);
        // lambda is handled in log form, it overflows doubles at small kappa
        auto log_integrand = [&](double kappa) {
            const double log_lambda = log_neglog / kappa - log_tau;
            const double log_jac =
                (1.0 / kappa - 1.0) * log_neglog - log_tau - std::log(kappa) - std::log(theta);
            return p.log_density_log_lambda(kappa, log_lambda) - shift + log_jac;
        };
        double m = -std::numeric_limits<double>::infinity();
        for (double kappa : p.grid.axis1) m = std::max(m, log_integrand(kappa));
        if (!std::isfinite(m)) {
            logI[i] = -std::numeric_limits<double>::infinity();
            return;
        }
        QuadResult r = integrate_adaptive(
            [&](double kappa) { return std::exp(log_integrand(kappa) - m); }, k_lo, k_hi,
            kMarginalRelTol);
        if (!r.converged)
            throw NumericalError("weibull theta density: marginal integral over kappa did not "
                                 "converge at theta=" + std::to_string(theta),
                                 r.value, r.error);
        logI[i] = m + std::log(r.value);
    });

    ThetaDensity out = assemble(std::move(points), logI, ThetaModel::weibull);
    out.query.tau = tau;
    std::ostringstream notes;
    notes << "kappa integrated over [" << k_lo << ", " << k_hi << "] from the posterior grid";
    out.support_notes = notes.str();
    out.warnings = p.warnings;
    return out;
}

}  // namespace betalike
