#pragma once

#include <cstddef>

#include "betalike/grid.hpp"
#include "betalike/posterior.hpp"

namespace betalike {

/// First four raw moments.
struct MomentSet {
    double m1 = 0.0, m2 = 0.0, m3 = 0.0, m4 = 0.0;
};

/// Mean, standard deviation, standardized skewness, and FULL kurtosis
/// (normal = 3) throughout this library.
struct CumulantSet {
    double mu = 0.0;
    double sigma = 0.0;
    double gamma = 0.0;
    double kappa = 3.0;
};

CumulantSet moments_to_cumulants(const MomentSet& m);

/// Raw trapezoid moments of a tabulated density.
MomentSet grid_moments(const Grid1D& density);

/// Closed-form moments of theta = (lambda tau)^m e^{-lambda tau} / m! under
/// the Gamma posterior, via log-gamma arithmetic.
MomentSet poisson_theta_moments(const PoissonPosterior& p, double tau, long long m_events);

/// Moments of theta = 1 - sum_{i<=m} (lambda tau)^i e^{-lambda tau} / i!
/// by binomial expansion into Gamma-integral terms.
MomentSet cumulative_poisson_theta_moments(const PoissonPosterior& p, double tau,
                                           long long m_events);

namespace detail {
// Accepts m_events = -1 (empty sum, theta identically 1); used as an
// internal identity check, rejected by the public operation.
MomentSet cumulative_poisson_moments_impl(double lambda_power, double rate, double tau,
                                          long long m_events);
}

struct RegressionMoments {
    MomentSet moments;
    double boundary_mass = 0.0;  // posterior weight on the grid border
    bool boundary_warning = false;
};

/// Moments of the regression-model theta at predictor z by 2-D quadrature
/// against the normalized posterior (internally refined Simpson grid).
RegressionMoments poisson_regression_theta_moments(const PoissonRegPosterior& p, double z,
                                                   double tau, long long m_events,
                                                   std::size_t quad_n = 1001);

/// Cumulants of a single Weibull waiting time with survival exp(-(lambda t)^k).
CumulantSet weibull_waiting_cumulants(double k, double lambda);

/// Cumulants of a sum of `count` iid variables. Excess kurtosis scales as
/// 1/count; the naive full-kurtosis/count rule fails already at count = 1.
CumulantSet sum_cumulants(const CumulantSet& c, long long count);

}  // namespace betalike
