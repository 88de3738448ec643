#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "betalike/grid.hpp"
#include "betalike/posterior.hpp"

namespace betalike {

enum class ThetaModel { logistic, exponential, weibull, maxent_approx, grid_mixture };

const char* theta_model_name(ThetaModel m);

/// Query metadata carried alongside a theta density.
struct ThetaQuery {
    std::optional<double> tau;
    std::optional<double> z;
    std::optional<long long> m;
};

/// Normalized density of a probability theta on (0,1), tabulated. The
/// abscissa is clipped to [1e-12, 1-1e-12]; values are never clipped.
struct ThetaDensity {
    Grid1D grid;
    double normalizer = 1.0;
    ThetaModel model = ThetaModel::exponential;
    ThetaQuery query;
    std::string support_notes;
    std::vector<std::string> warnings;
};

/// 1001-point abscissa clustered toward both endpoints (densities of theta
/// frequently diverge there); clipped to [1e-12, 1-1e-12].
std::vector<double> chebyshev_theta_points(std::size_t n = 1001);
std::vector<double> uniform_theta_points(std::size_t n = 1001);

/// Transformed posterior of theta = logistic(beta0 + beta1 z): substitutes
/// beta0 = log(theta/(1-theta)) - b1 z, applies the 1/(theta(1-theta))
/// Jacobian, and integrates b1 out numerically over the posterior support.
ThetaDensity logistic_theta_density(const LogisticPosterior& p, double z,
                                    std::size_t grid_n = 1001);

/// Closed-form density of theta = exp(-lambda tau) under the Gamma posterior.
double exponential_theta_pdf(const ExponentialPosterior& p, double tau, double theta);
ThetaDensity exponential_theta_density(const ExponentialPosterior& p, double tau,
                                       std::size_t grid_n = 1001);

/// Exact mean of the exponential theta density: [T/(T+tau)]^shape.
double exponential_theta_mean(const ExponentialPosterior& p, double tau);

/// Transformed posterior of theta = exp(-(lambda tau)^k): substitutes
/// lambda = (-log theta)^{1/kappa}/tau and integrates kappa out numerically
/// over the posterior support.
ThetaDensity weibull_theta_density(const WeibullPosterior& p, double tau,
                                   std::size_t grid_n = 1001);

}  // namespace betalike
