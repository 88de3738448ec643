#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "betalike/cumulants.hpp"
#include "betalike/grid.hpp"
#include "betalike/theta_density.hpp"

namespace betalike {

/// Fourth-order maximum-entropy density in standardized units: the density
/// on [support_lo, support_hi] proportional to
///   exp[phi1 x + phi2 (x^2-1) + phi3 (x^3-gamma) + phi4 (x^4-kappa)]
/// whose first four moments are (0, 1, gamma, kappa).
struct MaxEntDensity {
    CumulantSet cumulants;      // targets in original units (mu, sigma, gamma, kappa)
    std::array<double, 4> phi{};  // minimizer of the dual objective
    double support_lo = 0.0, support_hi = 0.0;  // standardized units
    double normalizer = 0.0;    // integral of the unnormalized kernel
    int iterations = 0;

    double pdf_std(double x) const;   // standardized density
    double cdf_std(double x) const;
    double pdf(double v) const;       // original units via x = (v - mu)/sigma
    double cdf(double v) const;
};

/// Minimizes Q(phi) = int_a^b exp[sum_j phi_j g_j(x)] dx by Newton descent
/// with the analytic gradient/Hessian; the stationary point matches the
/// standardized moments (0, 1, gamma, kappa) to within 1e-6.
MaxEntDensity solve_maxent(const CumulantSet& c, double support_lo, double support_hi);

struct MaxEntThetaResult {
    ThetaDensity density;
    MaxEntDensity solution;
};

/// MaxEnt approximation of a theta density on [0,1]: solves on
/// (-mu/sigma, (1-mu)/sigma) and maps back through theta = mu + sigma x.
MaxEntThetaResult maxent_theta_density_full(const CumulantSet& c, std::size_t grid_n = 1001);
ThetaDensity maxent_theta_density(const CumulantSet& c, std::size_t grid_n = 1001);

struct PositiveDensity {
    Grid1D grid;          // density over q >= 0
    MaxEntDensity solution;
};

/// MaxEnt density of a nonnegative waiting-time sum q, supported on
/// [max(0, mu - 6 sigma), mu + 6 sigma].
PositiveDensity maxent_positive_density(const CumulantSet& c, std::size_t grid_n = 1001);

/// P(exactly m events in window tau) for waiting times with survival
/// exp(-(lambda t)^k): the difference of the sum-of-m and sum-of-(m+1)
/// waiting-time CDFs at tau, each approximated by a MaxEnt fit. m = 0 is
/// exact: exp(-(lambda tau)^k).
double poisson_like_pmf(double k, double lambda, double tau, long long m);

enum class MixtureKind { density_mixture, theta_pushforward };

/// Weighted components over posterior cells: either scalar theta values
/// (pushforward) or MaxEnt densities. Weights are normalized to one.
struct MixtureDensity {
    MixtureKind kind = MixtureKind::theta_pushforward;
    std::vector<double> weights;
    std::vector<double> thetas;               // theta_pushforward
    std::vector<MaxEntDensity> densities;     // density_mixture

    MomentSet pushforward_moments() const;
};

struct PoissonLikeResult {
    ThetaDensity density;    // MaxEnt fit to the pushforward cumulants
    MixtureDensity mixture;  // the pushforward itself
    std::vector<std::string> warnings;
};

/// Partitions the posterior support into grid_n x grid_n cells, evaluates the
/// event probability at each cell center, and weights it by the cell's
/// posterior volume (midpoint rule). Returns the weighted pushforward and a
/// fourth-order MaxEnt density fitted to its first four cumulants.
PoissonLikeResult poisson_like_theta_distribution(const WeibullPosterior& p, double tau,
                                                  long long m, std::size_t grid_n = 32);

}  // namespace betalike
