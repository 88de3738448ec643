#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "betalike/data.hpp"
#include "betalike/grid.hpp"

namespace betalike {

/// Grid resolution and optional explicit bounds for 2-D posterior builders.
/// When bounds are absent they are chosen as mode +/- 6 curvature-based
/// standard deviations, intersected with positivity where applicable.
struct GridSpec {
    std::size_t n1 = 201;
    std::size_t n2 = 201;
    std::optional<std::pair<double, double>> bounds1;
    std::optional<std::pair<double, double>> bounds2;
};

/// Posterior over (beta0, beta1) for the logistic model with a flat prior.
/// Grid values are exp(log-density - max log-density), peak exactly 1.
struct LogisticPosterior {
    BinaryOutcomeData data;
    Grid2D grid;  // axis1 = beta0, axis2 = beta1
    double log_scale = 0.0;  // max log-density over the grid
    bool boundary_warning = false;
    std::vector<std::string> warnings;

    double log_density(double b0, double b1) const;
};

/// Gamma-shaped posterior over the exponential rate: density ~
/// lambda^lambda_power * exp(-lambda * total_time), i.e. Gamma(shape, rate)
/// with shape = lambda_power + 1 and rate = total_time.
struct ExponentialPosterior {
    std::size_t r = 0;        // observed failures
    double total_time = 0.0;  // t + sum x + sum y (or sum x + sum y under Jeffreys)
    double lambda_power = 0.0;
    bool jeffreys = false;
    double lambda_lo = 0.0, lambda_hi = 0.0;

    double shape() const { return lambda_power + 1.0; }
    double rate() const { return total_time; }
    double mode() const { return lambda_power / total_time; }
    double mean() const { return shape() / total_time; }
};

struct WeibullPosterior {
    ReliabilityData data;
    double t_guess = 0.0;      // 0 when the uninformative 1/(k lambda) prior is used
    bool informative = false;
    Grid2D grid;  // axis1 = k (shape), axis2 = lambda (inverse scale)
    double log_scale = 0.0;
    bool boundary_warning = false;
    std::vector<std::string> warnings;

    double log_density(double k, double lambda) const;
    /// Same density evaluated from log(lambda); stays finite for rates far
    /// outside double range (needed by the theta transform at tiny kappa).
    double log_density_log_lambda(double k, double log_lambda) const;
};

/// Conjugate posterior for the event-count model: Gamma(shape, rate) with
/// shape = lambda_power + 1.
struct PoissonPosterior {
    long long n_events = 0;
    double T_obs = 0.0;
    double t_guess = 0.0;  // 0 under Jeffreys
    bool jeffreys = false;
    double lambda_power = 0.0;
    double rate = 0.0;  // T + t (or T under Jeffreys)
    double lambda_lo = 0.0, lambda_hi = 0.0;

    double shape() const { return lambda_power + 1.0; }
    double mean() const { return shape() / rate; }
};

struct PoissonRegPosterior {
    CountData data;
    Grid2D grid;  // axis1 = beta0, axis2 = beta1
    double log_scale = 0.0;
    bool boundary_warning = false;
    std::vector<std::string> warnings;

    double log_density(double b0, double b1) const;
};

LogisticPosterior build_logistic(const BinaryOutcomeData& data, const GridSpec& spec = {});
ExponentialPosterior build_exponential(const ReliabilityData& data);
WeibullPosterior build_weibull(const ReliabilityData& data, const GridSpec& spec = {});
PoissonPosterior build_poisson(const CountData& data);
PoissonRegPosterior build_poisson_regression(const CountData& data, const GridSpec& spec = {});

/// Combines two posteriors over the same phenomenon (same prior settings):
/// event counts and observation times add, the prior guess is counted once.
PoissonPosterior merge(const PoissonPosterior& a, const PoissonPosterior& b);

/// Total power-transformed time without failure: t^kappa + sum x^kappa + sum y^kappa.
double weibull_power_time(const ReliabilityData& data, double t_guess, double kappa);

}  // namespace betalike
