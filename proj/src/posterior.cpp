#include "betalike/posterior.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include "betalike/errors.hpp"
#include "betalike/parallel.hpp"

namespace betalike {

namespace {

// log(1 + e^u) without overflow.
double log1p_exp(double u) {
    if (u > 0.0) return u + std::log1p(std::exp(-u));
    return std::log1p(std::exp(u));
}

using LogDensity2D = std::function<double(double, double)>;

struct ModeResult {
    double x = 0.0, y = 0.0;
    double sigma_x = 0.0, sigma_y = 0.0;  // curvature-based; 0 when undefined
    bool on_search_edge = false;
};

// Maximizes a smooth log-density over a search box: coarse scan followed by
// Newton steps with central-difference derivatives and step halving.
ModeResult find_mode(const LogDensity2D& f, double lo_x, double hi_x, double lo_y, double hi_y) {
    const int scan_n = 41;
    const double cx = 0.5 * (lo_x + hi_x), cy = 0.5 * (lo_y + hi_y);
    double best = -std::numeric_limits<double>::infinity();
    double bx = cx, by = cy, best_dist = 0.0;
    for (int i = 0; i < scan_n; ++i) {
        const double x = lo_x + (hi_x - lo_x) * i / (scan_n - 1);
        for (int j = 0; j < scan_n; ++j) {
            const double y = lo_y + (hi_y - lo_y) * j / (scan_n - 1);
            const double v = f(x, y);
            if (!std::isfinite(v)) continue;
            const double dist = std::hypot((x - cx) / (hi_x - lo_x), (y - cy) / (hi_y - lo_y));
            // Ties (flat directions) resolve toward the box center.
            const bool better = v > best + 1e-12 * (std::fabs(best) + 1.0) ||
                                (v >= best - 1e-12 * (std::fabs(best) + 1.0) && dist < best_dist);
            if (best == -std::numeric_limits<double>::infinity() || better) {
                best = std::max(best, v);
                bx = x;
                by = y;
                best_dist = dist;
            }
        }
    }

    const double hx = 1e-5 * std::max(1.0, std::fabs(hi_x - lo_x) / 60.0);
    const double hy = 1e-5 * std::max(1.0, std::fabs(hi_y - lo_y) / 60.0);
    auto clampx = [&](double v) { return std::clamp(v, lo_x, hi_x); };
    auto clampy = [&](double v) { return std::clamp(v, lo_y, hi_y); };

    double fx = best;
    for (int iter = 0; iter < 80; ++iter) {
        const double gpx = f(clampx(bx + hx), by), gmx = f(clampx(bx - hx), by);
        const double gpy = f(bx, clampy(by + hy)), gmy = f(bx, clampy(by - hy));
        const double gx = (gpx - gmx) / (2 * hx);
        const double gy = (gpy - gmy) / (2 * hy);
        const double hxx = (gpx - 2 * fx + gmx) / (hx * hx);
        const double hyy = (gpy - 2 * fx + gmy) / (hy * hy);
        const double fpp = f(clampx(bx + hx), clampy(by + hy));
        const double fpm = f(clampx(bx + hx), clampy(by - hy));
        const double fmp = f(clampx(bx - hx), clampy(by + hy));
        const double fmm = f(clampx(bx - hx), clampy(by - hy));
        const double hxy = (fpp - fpm - fmp + fmm) / (4 * hx * hy);

        double sx, sy;
        const double det = hxx * hyy - hxy * hxy;
        if (std::isfinite(det) && std::fabs(det) > 1e-14 * (std::fabs(hxx * hyy) + 1e-300)) {
            sx = (hyy * gx - hxy * gy) / det;
            sy = (hxx * gy - hxy * gx) / det;
            // Newton step for a maximum solves H s = g with H negative definite.
            sx = -sx;
            sy = -sy;
        } else {
            const double gn = std::hypot(gx, gy);
            if (gn < 1e-12) break;
            sx = gx / gn;
            sy = gy / gn;
        }
        const double slen = std::hypot(sx, sy);
        if (slen > 0.25 * std::hypot(hi_x - lo_x, hi_y - lo_y)) {
            const double scale = 0.25 * std::hypot(hi_x - lo_x, hi_y - lo_y) / slen;
            sx *= scale;
            sy *= scale;
        }
        double t = 1.0;
        bool improved = false;
        for (int ls = 0; ls < 40; ++ls) {
            const double cx = clampx(bx + t * sx), cy = clampy(by + t * sy);
            const double fc = f(cx, cy);
            if (std::isfinite(fc) && fc > fx) {
                bx = cx;
                by = cy;
                fx = fc;
                improved = true;
                break;
            }
            t *= 0.5;
        }
        if (!improved) break;
        if (t * std::hypot(sx, sy) < 1e-11) break;
    }

    ModeResult out;
    out.x = bx;
    out.y = by;
    const double edge_x = 1e-6 * (hi_x - lo_x);
    const double edge_y = 1e-6 * (hi_y - lo_y);
    out.on_search_edge = (bx - lo_x < edge_x) || (hi_x - bx < edge_x) || (by - lo_y < edge_y) ||
                         (hi_y - by < edge_y);

    // Laplace widths from the negated Hessian inverse diagonal.
    const double f0 = f(bx, by);
    const double hxx = (f(clampx(bx + hx), by) - 2 * f0 + f(clampx(bx - hx), by)) / (hx * hx);
    const double hyy = (f(bx, clampy(by + hy)) - 2 * f0 + f(bx, clampy(by - hy))) / (hy * hy);
    const double hxy = (f(clampx(bx + hx), clampy(by + hy)) - f(clampx(bx + hx), clampy(by - hy)) -
                        f(clampx(bx - hx), clampy(by + hy)) + f(clampx(bx - hx), clampy(by - hy))) /
                       (4 * hx * hy);
    const double det = hxx * hyy - hxy * hxy;
    if (std::isfinite(det) && det > 0.0 && hxx < 0.0) {
        // covariance = (-H)^{-1}
        const double var_x = -hyy / det, var_y = -hxx / det;
        if (var_x > 0.0) out.sigma_x = std::sqrt(var_x);
        if (var_y > 0.0) out.sigma_y = std::sqrt(var_y);
    }
    if (!std::isfinite(out.sigma_x) || out.sigma_x <= 0.0) out.sigma_x = 0.0;
    if (!std::isfinite(out.sigma_y) || out.sigma_y <= 0.0) out.sigma_y = 0.0;
    return out;
}

// Fills the grid with exp(log-density - grid max); the peak cell is exactly 1.
template <typename LogF>
void fill_grid(Grid2D& grid, double& log_scale, bool& boundary_warning, const LogF& logf) {
    const std::size_t n1 = grid.axis1.size(), n2 = grid.axis2.size();
    grid.values.assign(n1 * n2, 0.0);
    std::vector<double> logs(n1 * n2);
    par::run(n1, [&](std::size_t i) {
        const double a = grid.axis1[i];
        for (std::size_t j = 0; j < n2; ++j) logs[i * n2 + j] = logf(a, grid.axis2[j]);
    });
    double mx = -std::numeric_limits<double>::infinity();
    for (double v : logs) {
        if (std::isnan(v) || v == std::numeric_limits<double>::infinity())
            throw NumericalError("posterior log-density is +inf/NaN on the grid", v, 0.0);
        mx = std::max(mx, v);
    }
    if (!std::isfinite(mx))
        throw NumericalError("posterior vanished everywhere on the grid", mx, 0.0);
    log_scale = mx;
    par::run(n1, [&](std::size_t i) {
        for (std::size_t j = 0; j < n2; ++j)
            grid.values[i * n2 + j] = std::exp(logs[i * n2 + j] - mx);
    });

    // Warn when a non-negligible fraction of the mass sits on the border
    // (mode escaping the grid, flat directions, improper posteriors).
    const auto w1 = trapezoid_weights(grid.axis1);
    const auto w2 = trapezoid_weights(grid.axis2);
    double total = 0.0, border = 0.0;
    for (std::size_t i = 0; i < n1; ++i)
        for (std::size_t j = 0; j < n2; ++j) {
            const double m = w1[i] * w2[j] * grid.values[i * n2 + j];
            total += m;
            if (i == 0 || i == n1 - 1 || j == 0 || j == n2 - 1) border += m;
        }
    if (border > 1e-3 * total) boundary_warning = true;
}

std::pair<double, double> bounds_or(const std::optional<std::pair<double, double>>& user,
                                    double center, double sigma, double fallback_width,
                                    double positive_floor) {
    double lo, hi;
    if (user) {
        lo = user->first;
        hi = user->second;
    } else {
        const double w = sigma > 0.0 ? 6.0 * sigma : fallback_width;
        lo = center - w;
        hi = center + w;
    }
    if (positive_floor > 0.0) lo = std::max(lo, positive_floor);
    if (!(lo < hi)) throw ValidationError("posterior grid bounds are empty");
    return {lo, hi};
}

}  // namespace

double LogisticPosterior::log_density(double b0, double b1) const {
    double s = 0.0;
    for (double x : data.success_predictors) {
        const double u = b0 + b1 * x;
        s += u - log1p_exp(u);
    }
    for (double y : data.failure_predictors) s -= log1p_exp(b0 + b1 * y);
    return s;
}

LogisticPosterior build_logistic(const BinaryOutcomeData& data, const GridSpec& spec) {
    validate(data);
    LogisticPosterior post;
    post.data = data;

    const double box = 30.0;
    auto f = [&post](double b0, double b1) { return post.log_density(b0, b1); };
    const ModeResult mode = find_mode(f, -box, box, -box, box);
    if (mode.on_search_edge) {
        post.boundary_warning = true;
        post.warnings.push_back(
            "likelihood maximizer hit the search boundary (possible complete separation)");
    }

    const auto b0r = bounds_or(spec.bounds1, mode.x, mode.sigma_x, 20.0, 0.0);
    const auto b1r = bounds_or(spec.bounds2, mode.y, mode.sigma_y, 20.0, 0.0);
    post.grid.axis1 = linspace(b0r.first, b0r.second, spec.n1);
    post.grid.axis2 = linspace(b1r.first, b1r.second, spec.n2);
    fill_grid(post.grid, post.log_scale, post.boundary_warning, f);
    if (post.boundary_warning && post.warnings.empty())
        post.warnings.push_back("posterior mass touches the grid boundary");
    return post;
}

ExponentialPosterior build_exponential(const ReliabilityData& data) {
    validate(data);
    ExponentialPosterior post;
    post.r = data.r();
    const double sum_times = std::accumulate(data.failures.begin(), data.failures.end(), 0.0) +
                             std::accumulate(data.survivals.begin(), data.survivals.end(), 0.0);
    if (data.prior_guess_t) {
        post.jeffreys = false;
        post.total_time = *data.prior_guess_t + sum_times;
        post.lambda_power = static_cast<double>(post.r);
    } else {
        post.jeffreys = true;
        if (post.r == 0)
            throw ValidationError(
                "posterior improper: Jeffreys prior with no observed failures; "
                "provide a prior life-time guess");
        post.total_time = sum_times;
        post.lambda_power = static_cast<double>(post.r) - 1.0;
    }
    if (!(post.total_time > 0.0)) throw ValidationError("total observed time must be > 0");

    const double sd = std::sqrt(post.shape()) / post.rate();
    post.lambda_lo = std::max(post.mean() - 6.0 * sd, 1e-12 * post.mean());
    post.lambda_hi = post.mean() + 6.0 * sd;
    return post;
}

double weibull_power_time(const ReliabilityData& data, double t_guess, double kappa) {
    double s = t_guess > 0.0 ? std::pow(t_guess, kappa) : 0.0;
    for (double x : data.failures) s += std::pow(x, kappa);
    for (double y : data.survivals) s += std::pow(y, kappa);
    return s;
}

double WeibullPosterior::log_density(double k, double lambda) const {
    if (!(k > 0.0) || !(lambda > 0.0)) return -std::numeric_limits<double>::infinity();
    return log_density_log_lambda(k, std::log(lambda));
}

double WeibullPosterior::log_density_log_lambda(double k, double log_lambda) const {
    if (!(k > 0.0) || !std::isfinite(log_lambda))
        return -std::numeric_limits<double>::infinity();
    const double logk = std::log(k);
    // (lambda v)^k = exp(k (log lambda + log v)); an exponent beyond double
    // range means the survival factor is an exact zero.
    auto pow_term = [&](double v) {
        const double e = k * (log_lambda + std::log(v));
        if (e > 709.0) return std::numeric_limits<double>::infinity();
        return std::exp(e);
    };
    double s = 0.0;
    if (informative) {
        // prior from a life-time guess: (lambda t)^{k-1} exp(-(lambda t)^k)
        s += (k - 1.0) * (log_lambda + std::log(t_guess)) - pow_term(t_guess);
    } else {
        s += -logk - log_lambda;  // 1/(k lambda)
    }
    for (double x : data.failures)
        s += logk + log_lambda + (k - 1.0) * (log_lambda + std::log(x)) - pow_term(x);
    for (double y : data.survivals) s -= pow_term(y);
    if (std::isnan(s)) return -std::numeric_limits<double>::infinity();
    return s;
}

WeibullPosterior build_weibull(const ReliabilityData& data, const GridSpec& spec) {
    validate(data);
    WeibullPosterior post;
    post.data = data;
    post.informative = data.prior_guess_t.has_value();
    post.t_guess = post.informative ? *data.prior_guess_t : 0.0;

    double mean_time = 0.0;
    for (double x : data.failures) mean_time += x;
    for (double y : data.survivals) mean_time += y;
    if (post.informative) mean_time += post.t_guess;
    mean_time /= static_cast<double>(data.n() + (post.informative ? 1 : 0));
    const double lam_scale = 1.0 / mean_time;

    // Bounds come from the mode and curvature in (log k, log lambda), where
    // the density (with its Jacobian k*lambda) is free of the lambda -> 0
    // singularity the original coordinates have for small k.
    auto logf = [&post](double lk, double llam) {
        return post.log_density_log_lambda(std::exp(lk), llam) + lk + llam;
    };
    const double klo = std::log(0.05), khi = std::log(20.0);
    const double llo = std::log(lam_scale) - std::log(1e3), lhi = std::log(lam_scale) + std::log(1e3);
    const ModeResult mode = find_mode(logf, klo, khi, llo, lhi);
    if (mode.on_search_edge) {
        post.boundary_warning = true;
        post.warnings.push_back("posterior maximizer hit the search boundary");
    }

    // 6-sigma spans in log coordinates, capped at a factor-1000 range.
    const double span_cap = std::log(1e3);
    const double fallback = std::log(50.0);
    const double span_k = std::min(mode.sigma_x > 0 ? 6.0 * mode.sigma_x : fallback, span_cap);
    const double span_l = std::min(mode.sigma_y > 0 ? 6.0 * mode.sigma_y : fallback, span_cap);

    double k_lo, k_hi, l_lo, l_hi;
    if (spec.bounds1) {
        k_lo = spec.bounds1->first;
        k_hi = spec.bounds1->second;
    } else {
        k_lo = std::max(std::exp(mode.x - span_k), 1e-3);
        k_hi = std::exp(mode.x + span_k);
    }
    if (spec.bounds2) {
        l_lo = spec.bounds2->first;
        l_hi = spec.bounds2->second;
    } else {
        l_lo = std::exp(mode.y - span_l);
        l_hi = std::exp(mode.y + span_l);
    }
    if (!(k_lo > 0.0 && k_lo < k_hi) || !(l_lo > 0.0 && l_lo < l_hi))
        throw ValidationError("weibull posterior grid bounds are empty or nonpositive");

    post.grid.axis1 = linspace(k_lo, k_hi, spec.n1);
    post.grid.axis2 = linspace(l_lo, l_hi, spec.n2);
    auto f = [&post](double k, double lam) { return post.log_density(k, lam); };
    fill_grid(post.grid, post.log_scale, post.boundary_warning, f);
    if (post.boundary_warning && post.warnings.empty())
        post.warnings.push_back("posterior mass touches the grid boundary");
    return post;
}

PoissonPosterior build_poisson(const CountData& data) {
    validate(data);
    if (!data.total_time_T)
        throw ValidationError("total observation time T is required for the count model");
    PoissonPosterior post;
    post.n_events = std::accumulate(data.counts.begin(), data.counts.end(), 0LL);
    post.T_obs = *data.total_time_T;
    if (data.prior_guess_t) {
        post.jeffreys = false;
        post.t_guess = *data.prior_guess_t;
        post.lambda_power = static_cast<double>(post.n_events);
        post.rate = post.T_obs + post.t_guess;
    } else {
        post.jeffreys = true;
        if (post.n_events == 0)
            throw ValidationError(
                "posterior improper: Jeffreys prior with zero events; provide a prior guess");
        post.lambda_power = static_cast<double>(post.n_events) - 1.0;
        post.rate = post.T_obs;
    }
    const double sd = std::sqrt(post.shape()) / post.rate;
    post.lambda_lo = std::max(post.mean() - 6.0 * sd, 1e-12 * post.mean());
    post.lambda_hi = post.mean() + 6.0 * sd;
    return post;
}

PoissonPosterior merge(const PoissonPosterior& a, const PoissonPosterior& b) {
    if (a.jeffreys != b.jeffreys || a.t_guess != b.t_guess)
        throw ValidationError("merge: posteriors must share the same prior settings");
    CountData combined;
    combined.counts = {a.n_events, b.n_events};
    combined.window_tau = 1.0;
    combined.total_time_T = a.T_obs + b.T_obs;
    if (!a.jeffreys) combined.prior_guess_t = a.t_guess;
    return build_poisson(combined);
}

double PoissonRegPosterior::log_density(double b0, double b1) const {
    const auto& preds = *data.predictors;
    double s = 0.0;
    for (std::size_t i = 0; i < data.counts.size(); ++i) {
        const double u = b0 + b1 * preds[i];
        s += static_cast<double>(data.counts[i]) * u - data.window_tau * std::exp(u);
    }
    return s;
}

PoissonRegPosterior build_poisson_regression(const CountData& data, const GridSpec& spec) {
    validate(data);
    if (!data.predictors) throw ValidationError("predictors are required for the regression model");
    PoissonRegPosterior post;
    post.data = data;

    const double box = 30.0;
    auto f = [&post](double b0, double b1) { return post.log_density(b0, b1); };
    const ModeResult mode = find_mode(f, -box, box, -box, box);
    if (mode.on_search_edge) {
        post.boundary_warning = true;
        post.warnings.push_back("likelihood maximizer hit the search boundary");
    }

    const auto b0r = bounds_or(spec.bounds1, mode.x, mode.sigma_x, 20.0, 0.0);
    const auto b1r = bounds_or(spec.bounds2, mode.y, mode.sigma_y, 20.0, 0.0);
    post.grid.axis1 = linspace(b0r.first, b0r.second, spec.n1);
    post.grid.axis2 = linspace(b1r.first, b1r.second, spec.n2);
    fill_grid(post.grid, post.log_scale, post.boundary_warning, f);
    if (post.boundary_warning && post.warnings.empty())
        post.warnings.push_back("posterior mass touches the grid boundary");
    return post;
}

}  // namespace betalike
