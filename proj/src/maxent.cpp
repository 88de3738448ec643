#include "betalike/maxent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "betalike/errors.hpp"
#include "betalike/parallel.hpp"

namespace betalike {

namespace {

constexpr double kGradTol = 1e-8;
constexpr int kMaxIterations = 500;
constexpr double kResidualTol = 1e-6;
// Standardized supports wider than this carry no representable mass beyond
// the clamp for any solution with unit variance.
constexpr double kSupportClamp = 50.0;

// Fixed composite Gauss-Legendre rule (10 nodes per panel, panel width
// <= 0.25): deterministic, smooth in phi, accurate far beyond the solver
// tolerances for exp-quartic integrands.
constexpr double kGlX[5] = {0.148874338981631211, 0.433395394129247191, 0.679409568299024406,
                            0.865063366688984511, 0.973906528517171720};
constexpr double kGlW[5] = {0.295524224714752870, 0.269266719309996355, 0.219086362515982044,
                            0.149451349150580593, 0.066671344308688138};

struct Rule {
    std::vector<double> x, w;
};

Rule make_rule(double a, double b) {
    const int panels = std::max(8, static_cast<int>(std::ceil((b - a) / 0.25)));
    Rule r;
    r.x.reserve(static_cast<std::size_t>(panels) * 10);
    r.w.reserve(static_cast<std::size_t>(panels) * 10);
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double mid = a + (p + 0.5) * h;
        const double half = 0.5 * h;
        for (int i = 0; i < 5; ++i) {
            r.x.push_back(mid - half * kGlX[i]);
            r.w.push_back(half * kGlW[i]);
            r.x.push_back(mid + half * kGlX[i]);
            r.w.push_back(half * kGlW[i]);
        }
    }
    return r;
}

double exponent_of(const std::array<double, 4>& phi, double x, double gamma, double kappa) {
    const double x2 = x * x;
    return phi[0] * x + phi[1] * (x2 - 1.0) + phi[2] * (x2 * x - gamma) +
           phi[3] * (x2 * x2 - kappa);
}

// Solves the 4x4 system H s = g by Gaussian elimination with partial pivoting.
bool solve4(double H[4][4], const double g[4], double s[4]) {
    double a[4][5];
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) a[i][j] = H[i][j];
        a[i][4] = g[i];
    }
    for (int col = 0; col < 4; ++col) {
        int piv = col;
        for (int rowi = col + 1; rowi < 4; ++rowi)
            if (std::fabs(a[rowi][col]) > std::fabs(a[piv][col])) piv = rowi;
        if (std::fabs(a[piv][col]) < 1e-300) return false;
        if (piv != col)
            for (int j = col; j < 5; ++j) std::swap(a[piv][j], a[col][j]);
        for (int rowi = col + 1; rowi < 4; ++rowi) {
            const double f = a[rowi][col] / a[col][col];
            for (int j = col; j < 5; ++j) a[rowi][j] -= f * a[col][j];
        }
    }
    for (int i = 3; i >= 0; --i) {
        double v = a[i][4];
        for (int j = i + 1; j < 4; ++j) v -= a[i][j] * s[j];
        s[i] = v / a[i][i];
        if (!std::isfinite(s[i])) return false;
    }
    return true;
}

}  // namespace

double MaxEntDensity::pdf_std(double x) const {
    if (x < support_lo || x > support_hi) return 0.0;
    return std::exp(exponent_of(phi, x, cumulants.gamma, cumulants.kappa)) / normalizer;
}

double MaxEntDensity::cdf_std(double x) const {
    if (x <= support_lo) return 0.0;
    if (x >= support_hi) return 1.0;
    const Rule rule = make_rule(support_lo, x);
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.x.size(); ++i)
        acc += rule.w[i] * std::exp(exponent_of(phi, rule.x[i], cumulants.gamma, cumulants.kappa));
    return std::min(1.0, acc / normalizer);
}

double MaxEntDensity::pdf(double v) const {
    return pdf_std((v - cumulants.mu) / cumulants.sigma) / cumulants.sigma;
}

double MaxEntDensity::cdf(double v) const { return cdf_std((v - cumulants.mu) / cumulants.sigma); }

MaxEntDensity solve_maxent(const CumulantSet& c, double support_lo, double support_hi) {
    if (!(c.sigma > 0.0)) throw ValidationError("solve_maxent: sigma must be > 0");
    if (!(support_lo < 0.0 && 0.0 < support_hi))
        throw ValidationError("solve_maxent: standardized support must straddle zero");
    if (!(c.kappa > c.gamma * c.gamma + 1.0))
        throw ValidationError("moment problem infeasible: kappa <= gamma^2 + 1");
    // On [a,b] with unit variance, |x^3| <= M x^2 and x^4 <= M^2 x^2 pointwise
    // (M = max |endpoint|), so moments beyond these bounds cannot be matched.
    const double extent = std::max(std::fabs(support_lo), std::fabs(support_hi));
    if (std::fabs(c.gamma) > extent - 1e-9 || c.kappa > extent * extent - 1e-9)
        throw ValidationError(
            "moment problem infeasible on the given support: need |gamma| < " +
            std::to_string(extent) + " and kappa < " + std::to_string(extent * extent) +
            ", got gamma=" + std::to_string(c.gamma) + ", kappa=" + std::to_string(c.kappa));

    const double gam = c.gamma, kap = c.kappa;
    const Rule rule = make_rule(support_lo, support_hi);
    const std::size_t nq = rule.x.size();

    // Constraint functions g_j(x) = (x, x^2-1, x^3-gamma, x^4-kappa).
    std::vector<double> G(4 * nq);
    for (std::size_t i = 0; i < nq; ++i) {
        const double x = rule.x[i], x2 = x * x;
        G[0 * nq + i] = x;
        G[1 * nq + i] = x2 - 1.0;
        G[2 * nq + i] = x2 * x - gam;
        G[3 * nq + i] = x2 * x2 - kap;
    }

    std::array<double, 4> phi = {0.0, -0.5, 0.0, 0.0};  // Gaussian fixed point
    std::vector<double> work(nq);

    auto evaluate = [&](const std::array<double, 4>& p, double grad[4], double hess[4][4]) {
        double Q = 0.0;
        for (int j = 0; j < 4; ++j) grad[j] = 0.0;
        if (hess)
            for (int j = 0; j < 4; ++j)
                for (int l = 0; l < 4; ++l) hess[j][l] = 0.0;
        for (std::size_t i = 0; i < nq; ++i) {
            double e = p[0] * G[i] + p[1] * G[nq + i] + p[2] * G[2 * nq + i] + p[3] * G[3 * nq + i];
            // shift by the constraint constants' contribution is already in G
            if (e > 700.0) return std::numeric_limits<double>::infinity();
            const double w = rule.w[i] * std::exp(e);
            work[i] = w;
            Q += w;
            grad[0] += w * G[i];
            grad[1] += w * G[nq + i];
            grad[2] += w * G[2 * nq + i];
            grad[3] += w * G[3 * nq + i];
        }
        if (hess) {
            for (std::size_t i = 0; i < nq; ++i) {
                const double w = work[i];
                const double g0 = G[i], g1 = G[nq + i], g2 = G[2 * nq + i], g3 = G[3 * nq + i];
                hess[0][0] += w * g0 * g0;
                hess[0][1] += w * g0 * g1;
                hess[0][2] += w * g0 * g2;
                hess[0][3] += w * g0 * g3;
                hess[1][1] += w * g1 * g1;
                hess[1][2] += w * g1 * g2;
                hess[1][3] += w * g1 * g3;
                hess[2][2] += w * g2 * g2;
                hess[2][3] += w * g2 * g3;
                hess[3][3] += w * g3 * g3;
            }
            for (int j = 0; j < 4; ++j)
                for (int l = 0; l < j; ++l) hess[j][l] = hess[l][j];
        }
        return Q;
    };

    double grad[4];
    double hess[4][4];
    double Q = evaluate(phi, grad, hess);
    if (!std::isfinite(Q))
        throw NumericalError("solve_maxent: objective not finite at the Gaussian start", Q, 0.0);

    int iter = 0;
    for (; iter < kMaxIterations; ++iter) {
        double gnorm = 0.0;
        for (double g : grad) gnorm = std::max(gnorm, std::fabs(g));
        if (gnorm < kGradTol) break;

        double step[4];
        if (!solve4(hess, grad, step)) {
            const double tr = hess[0][0] + hess[1][1] + hess[2][2] + hess[3][3];
            for (int j = 0; j < 4; ++j) step[j] = grad[j] / (tr > 0 ? tr : 1.0);
        }
        double t = 1.0;
        bool improved = false;
        for (int ls = 0; ls < 60; ++ls) {
            std::array<double, 4> cand = phi;
            for (int j = 0; j < 4; ++j) cand[j] -= t * step[j];
            double cgrad[4];
            const double Qc = evaluate(cand, cgrad, nullptr);
            if (std::isfinite(Qc) && Qc < Q) {
                phi = cand;
                Q = evaluate(phi, grad, hess);
                improved = true;
                break;
            }
            t *= 0.5;
        }
        if (!improved) break;
    }

    // Contract check: the normalized density must reproduce the targets.
    double residual = 0.0;
    for (double g : grad) residual = std::max(residual, std::fabs(g) / Q);
    if (!(residual <= kResidualTol)) {
        std::ostringstream msg;
        msg << "solve_maxent did not converge: normalized moment residual " << residual
            << " after " << iter << " iterations (targets gamma=" << gam << ", kappa=" << kap
            << ", support [" << support_lo << ", " << support_hi << "])";
        throw NumericalError(msg.str(), residual, kResidualTol);
    }

    MaxEntDensity out;
    out.cumulants = c;
    out.phi = phi;
    out.support_lo = support_lo;
    out.support_hi = support_hi;
    out.normalizer = Q;
    out.iterations = iter;
    return out;
}

MaxEntThetaResult maxent_theta_density_full(const CumulantSet& c, std::size_t grid_n) {
    if (!(c.mu > 0.0 && c.mu < 1.0))
        throw ValidationError("maxent_theta_density: mean must lie strictly inside (0,1)");
    if (!(c.sigma > 0.0)) throw ValidationError("maxent_theta_density: sigma must be > 0");
    const double a = std::max(-c.mu / c.sigma, -kSupportClamp);
    const double b = std::min((1.0 - c.mu) / c.sigma, kSupportClamp);
    MaxEntThetaResult result;
    result.solution = solve_maxent(c, a, b);
    const MaxEntDensity& sol = result.solution;

    const double th_lo = std::max(1e-12, c.mu + c.sigma * a);
    const double th_hi = std::min(1.0 - 1e-12, c.mu + c.sigma * b);
    ThetaDensity& out = result.density;
    out.grid.points = linspace(th_lo, th_hi, grid_n);
    out.grid.values.resize(grid_n);
    for (std::size_t i = 0; i < grid_n; ++i) out.grid.values[i] = sol.pdf(out.grid.points[i]);
    out.normalizer = sol.normalizer;
    out.model = ThetaModel::maxent_approx;
    std::ostringstream notes;
    notes << "maxent support theta in [" << th_lo << ", " << th_hi << "], phi=(" << sol.phi[0]
          << ", " << sol.phi[1] << ", " << sol.phi[2] << ", " << sol.phi[3] << ")";
    out.support_notes = notes.str();
    return result;
}

ThetaDensity maxent_theta_density(const CumulantSet& c, std::size_t grid_n) {
    return maxent_theta_density_full(c, grid_n).density;
}

PositiveDensity maxent_positive_density(const CumulantSet& c, std::size_t grid_n) {
    if (!(c.mu > 0.0)) throw ValidationError("maxent_positive_density: mean must be > 0");
    if (!(c.sigma > 0.0)) throw ValidationError("maxent_positive_density: sigma must be > 0");
    // support [max(0, mu - 6 sigma), mu + 6 sigma], standardized
    const double a = std::max(-6.0, -c.mu / c.sigma);
    const double b = 6.0;
    PositiveDensity out;
    out.solution = solve_maxent(c, a, b);
    const double q_lo = c.mu + c.sigma * a, q_hi = c.mu + c.sigma * b;
    out.grid.points = linspace(q_lo, q_hi, grid_n);
    out.grid.values.resize(grid_n);
    for (std::size_t i = 0; i < grid_n; ++i)
        out.grid.values[i] = out.solution.pdf(out.grid.points[i]);
    return out;
}

namespace {

// Standardized sum-of-j approximation for one shape value; lambda only
// rescales (mu, sigma), so solutions are cached per (k, j) by the caller.
struct SumApprox {
    CumulantSet sum_c;   // at lambda = 1
    MaxEntDensity sol;   // standardized
};

SumApprox make_sum_approx(double k, long long j) {
    SumApprox s;
    s.sum_c = sum_cumulants(weibull_waiting_cumulants(k, 1.0), j);
    const double a = std::max(-6.0, -s.sum_c.mu / s.sum_c.sigma);
    s.sol = solve_maxent(s.sum_c, a, 6.0);
    return s;
}

double cdf_at(const SumApprox& s, double lambda, double tau) {
    // waiting times scale as 1/lambda: q_lambda = q_1 / lambda
    const double x = (tau * lambda - s.sum_c.mu) / s.sum_c.sigma;
    return s.sol.cdf_std(x);
}

}  // namespace

double poisson_like_pmf(double k, double lambda, double tau, long long m) {
    if (!(k > 0.0) || !(lambda > 0.0) || !(tau > 0.0))
        throw ValidationError("poisson_like_pmf: k, lambda, tau must be > 0");
    if (m < 0) throw ValidationError("poisson_like_pmf: m must be >= 0");
    if (m == 0) return std::exp(-std::pow(lambda * tau, k));
    const SumApprox lower = make_sum_approx(k, m);
    const SumApprox upper = make_sum_approx(k, m + 1);
    const double v = cdf_at(lower, lambda, tau) - cdf_at(upper, lambda, tau);
    return std::clamp(v, 0.0, 1.0);
}

MomentSet MixtureDensity::pushforward_moments() const {
    MomentSet m;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        const double w = weights[i], th = thetas[i];
        m.m1 += w * th;
        m.m2 += w * th * th;
        m.m3 += w * th * th * th;
        m.m4 += w * th * th * th * th;
    }
    return m;
}

PoissonLikeResult poisson_like_theta_distribution(const WeibullPosterior& p, double tau,
                                                  long long m, std::size_t grid_n) {
    if (!(tau > 0.0)) throw ValidationError("tau must be > 0");
    if (m < 0) throw ValidationError("m must be >= 0");
    if (grid_n < 2) throw ValidationError("grid_n must be >= 2");

    const double k_lo = p.grid.axis1.front(), k_hi = p.grid.axis1.back();
    const double l_lo = p.grid.axis2.front(), l_hi = p.grid.axis2.back();
    const double dk = (k_hi - k_lo) / static_cast<double>(grid_n);
    const double dl = (l_hi - l_lo) / static_cast<double>(grid_n);

    const std::size_t cells = grid_n * grid_n;
    std::vector<double> weights(cells, 0.0), thetas(cells, 0.0);
    std::vector<unsigned char> failed(cells, 0);
    std::vector<std::string> cell_errors(grid_n);

    // Rows share the shape value, so the two MaxEnt solves per row are reused
    // across all lambda cells in that row.
    par::run(grid_n, [&](std::size_t i) {
        const double k_c = k_lo + (static_cast<double>(i) + 0.5) * dk;
        bool row_solved = false;
        SumApprox lower, upper;
        std::string row_error;
        if (m > 0) {
            try {
                lower = make_sum_approx(k_c, m);
                upper = make_sum_approx(k_c, m + 1);
                row_solved = true;
            } catch (const std::exception& e) {
                row_error = e.what();
            }
        } else {
            row_solved = true;
        }
        for (std::size_t j = 0; j < grid_n; ++j) {
            const double l_c = l_lo + (static_cast<double>(j) + 0.5) * dl;
            const std::size_t idx = i * grid_n + j;
            weights[idx] = std::exp(p.log_density(k_c, l_c) - p.log_scale) * dk * dl;
            if (m == 0) {
                thetas[idx] = std::exp(-std::pow(l_c * tau, k_c));
            } else if (row_solved) {
                thetas[idx] =
                    std::clamp(cdf_at(lower, l_c, tau) - cdf_at(upper, l_c, tau), 0.0, 1.0);
            } else {
                failed[idx] = 1;
            }
        }
        if (!row_error.empty()) cell_errors[i] = row_error;
    });

    double total = 0.0;
    for (double w : weights) total += w;
    if (!(total > 0.0))
        throw NumericalError("poisson-like pushforward: posterior weights vanished", total, 0.0);

    PoissonLikeResult result;
    for (std::size_t idx = 0; idx < cells; ++idx) {
        const double w = weights[idx] / total;
        if (failed[idx]) {
            if (w < 1e-9) {
                continue;  // negligible cell dropped below
            }
            const std::size_t row = idx / grid_n;
            throw NumericalError("poisson-like cell solve failed with non-negligible weight " +
                                     std::to_string(w) + ": " + cell_errors[row],
                                 w, 1e-9);
        }
        result.mixture.weights.push_back(w);
        result.mixture.thetas.push_back(thetas[idx]);
    }
    bool dropped = false;
    for (std::size_t idx = 0; idx < cells; ++idx)
        if (failed[idx] && weights[idx] / total < 1e-9) dropped = true;
    if (dropped)
        result.warnings.push_back("dropped failed cells with total weight < 1e-9 each");

    // Renormalize exactly after any drops.
    double wsum = 0.0;
    for (double w : result.mixture.weights) wsum += w;
    for (double& w : result.mixture.weights) w /= wsum;
    result.mixture.kind = MixtureKind::theta_pushforward;

    const MomentSet mom = result.mixture.pushforward_moments();
    const double var = mom.m2 - mom.m1 * mom.m1;
    if (var > 1e-14) {
        result.density = maxent_theta_density(moments_to_cumulants(mom));
        result.density.model = ThetaModel::grid_mixture;
    } else {
        // Degenerate pushforward (posterior collapsed to one effective cell):
        // emit a narrow Gaussian spike at the common theta.
        CumulantSet spike;
        spike.mu = std::clamp(mom.m1, 1e-9, 1.0 - 1e-9);
        spike.sigma = 1e-7;
        spike.gamma = 0.0;
        spike.kappa = 3.0;
        result.density = maxent_theta_density(spike);
        result.density.model = ThetaModel::grid_mixture;
        result.warnings.push_back("pushforward is a point mass; density is a narrow spike");
    }
    result.density.query.tau = tau;
    result.density.query.m = m;
    return result;
}

}  // namespace betalike
