#include "betalike/cumulants.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "betalike/errors.hpp"

namespace betalike {

CumulantSet moments_to_cumulants(const MomentSet& m) {
    for (double v : {m.m1, m.m2, m.m3, m.m4})
        if (!std::isfinite(v)) throw ValidationError("moments must be finite");
    const double var = m.m2 - m.m1 * m.m1;
    if (!(var > 0.0)) throw ValidationError("degenerate moment set: m2 <= m1^2");
    CumulantSet c;
    c.mu = m.m1;
    c.sigma = std::sqrt(var);
    c.gamma = (m.m3 - 3.0 * m.m2 * m.m1 + 2.0 * m.m1 * m.m1 * m.m1) / (c.sigma * c.sigma * c.sigma);
    c.kappa = (m.m4 - 4.0 * m.m3 * m.m1 + 6.0 * m.m2 * m.m1 * m.m1 - 3.0 * std::pow(m.m1, 4)) /
              (var * var);
    return c;
}

MomentSet grid_moments(const Grid1D& density) {
    const auto w = trapezoid_weights(density.points);
    MomentSet m;
    for (std::size_t i = 0; i < density.points.size(); ++i) {
        const double x = density.points[i];
        const double wd = w[i] * density.values[i];
        m.m1 += wd * x;
        m.m2 += wd * x * x;
        m.m3 += wd * x * x * x;
        m.m4 += wd * x * x * x * x;
    }
    return m;
}

namespace {

// E[lambda^s e^{-c lambda}] under Gamma(alpha, rate), alpha = power + 1:
// rate^alpha / Gamma(alpha) * Gamma(s + alpha) / (c + rate)^{s + alpha}
double log_gamma_exp_moment(double power, double rate, double s, double c) {
    const double alpha = power + 1.0;
    return alpha * std::log(rate) - std::lgamma(alpha) + std::lgamma(s + alpha) -
           (s + alpha) * std::log(c + rate);
}

}  // namespace

MomentSet poisson_theta_moments(const PoissonPosterior& p, double tau, long long m_events) {
    if (!(tau > 0.0)) throw ValidationError("tau must be > 0");
    if (m_events < 0) throw ValidationError("m must be >= 0");
    const double n = p.lambda_power;
    const double R = p.rate;
    const double m = static_cast<double>(m_events);
    double out[4];
    for (int j = 1; j <= 4; ++j) {
        // ((jm+n)! / (m!)^j n!) (tau/(j tau + R))^{jm} (R/(j tau + R))^{n+1}
        const double denom = static_cast<double>(j) * tau + R;
        const double logv = std::lgamma(j * m + n + 1.0) - j * std::lgamma(m + 1.0) -
                            std::lgamma(n + 1.0) +
                            j * m * (std::log(tau) - std::log(denom)) +
                            (n + 1.0) * (std::log(R) - std::log(denom));
        out[j - 1] = std::exp(logv);
    }
    return MomentSet{out[0], out[1], out[2], out[3]};
}

namespace detail {

MomentSet cumulative_poisson_moments_impl(double lambda_power, double rate, double tau,
                                          long long m_events) {
    // S(lambda) = sum_{i=0}^{m} (lambda tau)^i e^{-lambda tau} / i!
    // E[S^l] expands through the coefficients of (sum_i u^i/i!)^l.
    std::vector<double> base;
    for (long long i = 0; i <= m_events; ++i) base.push_back(std::exp(-std::lgamma(i + 1.0)));

    double ES[5];
    ES[0] = 1.0;
    std::vector<double> poly{1.0};
    for (int l = 1; l <= 4; ++l) {
        // poly <- poly * base (coefficient convolution)
        if (base.empty()) {
            ES[l] = 0.0;
            continue;
        }
        std::vector<double> next(poly.size() + base.size() - 1, 0.0);
        for (std::size_t i = 0; i < poly.size(); ++i)
            for (std::size_t j = 0; j < base.size(); ++j) next[i + j] += poly[i] * base[j];
        poly = std::move(next);
        double acc = 0.0;
        for (std::size_t s = 0; s < poly.size(); ++s) {
            if (poly[s] == 0.0) continue;
            acc += poly[s] * std::exp(static_cast<double>(s) * std::log(tau) +
                                      log_gamma_exp_moment(lambda_power, rate,
                                                           static_cast<double>(s),
                                                           static_cast<double>(l) * tau));
        }
        ES[l] = acc;
    }

    auto binom = [](int nn, int kk) {
        double v = 1.0;
        for (int i = 0; i < kk; ++i) v = v * (nn - i) / (i + 1);
        return v;
    };
    double m[4];
    for (int j = 1; j <= 4; ++j) {
        double acc = 0.0;
        for (int l = 0; l <= j; ++l) acc += binom(j, l) * (l % 2 ? -1.0 : 1.0) * ES[l];
        m[j - 1] = acc;
    }
    return MomentSet{m[0], m[1], m[2], m[3]};
}

}  // namespace detail

MomentSet cumulative_poisson_theta_moments(const PoissonPosterior& p, double tau,
                                           long long m_events) {
    if (!(tau > 0.0)) throw ValidationError("tau must be > 0");
    if (m_events < 0) throw ValidationError("m must be >= 0");
    return detail::cumulative_poisson_moments_impl(p.lambda_power, p.rate, tau, m_events);
}

RegressionMoments poisson_regression_theta_moments(const PoissonRegPosterior& p, double z,
                                                   double tau, long long m_events,
                                                   std::size_t quad_n) {
    if (!(tau > 0.0)) throw ValidationError("tau must be > 0");
    if (m_events < 0) throw ValidationError("m must be >= 0");
    if (!std::isfinite(z)) throw ValidationError("z must be finite");
    if (quad_n < 3) throw ValidationError("quadrature grid too small");
    if (quad_n % 2 == 0) ++quad_n;  // Simpson needs an odd point count

    const double lo0 = p.grid.axis1.front(), hi0 = p.grid.axis1.back();
    const double lo1 = p.grid.axis2.front(), hi1 = p.grid.axis2.back();
    const double h0 = (hi0 - lo0) / static_cast<double>(quad_n - 1);
    const double h1 = (hi1 - lo1) / static_cast<double>(quad_n - 1);

    auto simpson_w = [&](std::size_t i) {
        if (i == 0 || i == quad_n - 1) return 1.0;
        return (i % 2 == 1) ? 4.0 : 2.0;
    };

    const double log_m_fact = std::lgamma(static_cast<double>(m_events) + 1.0);
    const double mm = static_cast<double>(m_events);

    double total = 0.0, boundary = 0.0;
    double sums[4] = {0.0, 0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < quad_n; ++i) {
        const double b0 = lo0 + h0 * static_cast<double>(i);
        const double wi = simpson_w(i);
        for (std::size_t j = 0; j < quad_n; ++j) {
            const double b1 = lo1 + h1 * static_cast<double>(j);
            const double w = wi * simpson_w(j);
            const double dens = std::exp(p.log_density(b0, b1) - p.log_scale);
            const double u = b0 + b1 * z;
            const double log_theta = mm * (u + std::log(tau)) - std::exp(u) * tau - log_m_fact;
            const double theta = std::exp(log_theta);
            const double wd = w * dens;
            total += wd;
            if (i == 0 || i == quad_n - 1 || j == 0 || j == quad_n - 1) boundary += wd;
            double tp = 1.0;
            for (int q = 0; q < 4; ++q) {
                tp *= theta;
                sums[q] += wd * tp;
            }
        }
    }
    if (!(total > 0.0)) throw NumericalError("regression posterior mass vanished", total, 0.0);

    RegressionMoments out;
    out.moments = MomentSet{sums[0] / total, sums[1] / total, sums[2] / total, sums[3] / total};
    out.boundary_mass = boundary / total;
    out.boundary_warning = out.boundary_mass > 1e-3;
    return out;
}

CumulantSet weibull_waiting_cumulants(double k, double lambda) {
    if (!(k > 0.0) || !(lambda > 0.0)) throw ValidationError("k and lambda must be > 0");
    // Gamma(1 + 4/k) must stay inside double range.
    if (1.0 + 4.0 / k > 171.0)
        throw ValidationError("shape k=" + std::to_string(k) +
                              " too small: Gamma(1+4/k) overflows; need k >= " +
                              std::to_string(4.0 / 170.0));
    const double g1 = std::exp(std::lgamma(1.0 + 1.0 / k));
    const double g2 = std::exp(std::lgamma(1.0 + 2.0 / k));
    const double g3 = std::exp(std::lgamma(1.0 + 3.0 / k));
    const double g4 = std::exp(std::lgamma(1.0 + 4.0 / k));
    const double var = g2 - g1 * g1;
    if (!(var > 0.0)) throw NumericalError("weibull variance underflow", var, 0.0);

    CumulantSet c;
    c.mu = g1 / lambda;
    c.sigma = std::sqrt(var) / lambda;
    c.gamma = (g3 - 3.0 * g1 * g2 + 2.0 * g1 * g1 * g1) / std::pow(var, 1.5);
    c.kappa = (g4 - 4.0 * g1 * g3 + 6.0 * g1 * g1 * g2 - 3.0 * std::pow(g1, 4)) / (var * var);
    if (k == 1.0) {  // exact Exponential limit
        c.mu = 1.0 / lambda;
        c.sigma = 1.0 / lambda;
        c.gamma = 2.0;
        c.kappa = 9.0;
    }
    return c;
}

CumulantSet sum_cumulants(const CumulantSet& c, long long count) {
    if (count < 1) throw ValidationError("count must be >= 1");
    const double n = static_cast<double>(count);
    CumulantSet out;
    out.mu = n * c.mu;
    out.sigma = std::sqrt(n) * c.sigma;
    out.gamma = c.gamma / std::sqrt(n);
    out.kappa = 3.0 + (c.kappa - 3.0) / n;
    return out;
}

}  // namespace betalike
