#include <doctest.h>

#include <cmath>
#include <cstring>

#include "betalike/errors.hpp"
#include "betalike/maxent.hpp"
#include "betalike/quadrature.hpp"
#include "oracles.hpp"

using namespace betalike;

namespace {

CumulantSet std_cumulants(double gamma, double kappa) {
    return CumulantSet{0.0, 1.0, gamma, kappa};
}

// standardized moments of the solved density, via the library-independent
// boost integrator
void solved_moments(const MaxEntDensity& s, double out[4]) {
    for (int j = 1; j <= 4; ++j)
        out[j - 1] = oracles::boost_integrate(
            [&](double x) { return std::pow(x, j) * s.pdf_std(x); }, s.support_lo, s.support_hi,
            1e-12);
}

}  // namespace

TEST_CASE("gaussian targets recover the gaussian solution") {
    const auto s = solve_maxent(std_cumulants(0.0, 3.0), -6.0, 6.0);
    CHECK(std::fabs(s.phi[0] - 0.0) < 1e-4);
    CHECK(std::fabs(s.phi[1] + 0.5) < 1e-4);
    CHECK(std::fabs(s.phi[2] - 0.0) < 1e-4);
    CHECK(std::fabs(s.phi[3] - 0.0) < 1e-4);
    for (double x : {-2.0, -0.5, 0.0, 1.0, 3.0})
        CHECK(std::fabs(s.pdf_std(x) - oracles::normal_pdf(x)) < 1e-4);
}

TEST_CASE("symmetric targets give a symmetric solution") {
    const auto s = solve_maxent(std_cumulants(0.0, 1.8), -4.0, 4.0);
    CHECK(std::fabs(s.phi[0]) < 1e-8);
    CHECK(std::fabs(s.phi[2]) < 1e-8);
}

TEST_CASE("solved densities reproduce their target moments") {
    for (auto [g, k] : {std::pair{1.0, 4.5}, std::pair{0.5, 3.2}, std::pair{2.0, 9.0}}) {
        const double a = (g > 1.5) ? -1.0 : -5.0;
        const auto s = solve_maxent(std_cumulants(g, k), a, 6.0);
        double m[4];
        solved_moments(s, m);
        CHECK(std::fabs(m[0] - 0.0) < 1e-4);
        CHECK(std::fabs(m[1] - 1.0) < 1e-4);
        CHECK(std::fabs(m[2] - g) < 1e-4);
        CHECK(std::fabs(m[3] - k) < 1e-4);
    }
}

TEST_CASE("monte carlo check of the exponential-sum targets") {
    // 4 unit-exponential waiting times ~ Gamma(4,1); the (1, 4.5) targets used
    // above are its standardized skewness and kurtosis
    oracles::FixedRng rng(20260810u);
    const int N = 400000;
    double s1 = 0, s2 = 0, s3 = 0, s4 = 0;
    for (int i = 0; i < N; ++i) {
        double q = 0.0;
        for (int j = 0; j < 4; ++j) q += -std::log(1.0 - rng.uniform());
        s1 += q;
        s2 += q * q;
        s3 += q * q * q;
        s4 += q * q * q * q;
    }
    const double m1 = s1 / N, m2 = s2 / N, m3 = s3 / N, m4 = s4 / N;
    const double var = m2 - m1 * m1, sd = std::sqrt(var);
    CHECK(std::fabs(m1 - 4.0) < 0.02);
    CHECK(std::fabs(sd - 2.0) < 0.02);
    CHECK(std::fabs((m3 - 3 * m2 * m1 + 2 * m1 * m1 * m1) / (sd * sd * sd) - 1.0) < 0.03);
    CHECK(std::fabs((m4 - 4 * m3 * m1 + 6 * m2 * m1 * m1 - 3 * std::pow(m1, 4)) / (var * var) -
                    4.5) < 0.1);
}

TEST_CASE("infeasible moment sets are rejected") {
    CHECK_THROWS_AS(solve_maxent(std_cumulants(0.0, 0.9), -6.0, 6.0), ValidationError);
    CHECK_THROWS_AS(solve_maxent(std_cumulants(1.0, 1.5), -6.0, 6.0), ValidationError);
    // kurtosis beyond the support bound max(|a|,b)^2
    CHECK_THROWS_AS(solve_maxent(std_cumulants(2.0, 40.0), -6.0, 6.0), ValidationError);
}

TEST_CASE("solves are deterministic") {
    const auto a = solve_maxent(std_cumulants(0.7, 3.9), -5.0, 6.0);
    const auto b = solve_maxent(std_cumulants(0.7, 3.9), -5.0, 6.0);
    CHECK(std::memcmp(a.phi.data(), b.phi.data(), sizeof(double) * 4) == 0);
    CHECK(a.normalizer == b.normalizer);
}

TEST_CASE("maxent theta density approximates Beta(2,2)") {
    const CumulantSet c{0.5, std::sqrt(0.05), 0.0, 15.0 / 7.0};
    const auto d = maxent_theta_density(c);
    double sup = 0.0;
    for (std::size_t i = 0; i < d.grid.points.size(); ++i)
        sup = std::max(sup,
                       std::fabs(d.grid.values[i] - oracles::beta_pdf(2.0, 2.0, d.grid.points[i])));
    CHECK(sup < 2e-2);
    CHECK(std::fabs(trapezoid(d.grid) - 1.0) < 1e-6);
}

TEST_CASE("maxent theta density with a tiny sigma is a spike at the mean") {
    const CumulantSet c{0.5, 1e-5, 0.0, 3.0};
    const auto d = maxent_theta_density(c);
    const auto m = grid_moments(d.grid);
    CHECK(std::fabs(m.m1 - 0.5) < 1e-6);
}

TEST_CASE("maxent theta mean matches the moment input from the count model") {
    PoissonPosterior p;
    p.lambda_power = 3.0;
    p.rate = 5.0;
    const auto mom = poisson_theta_moments(p, 1.0, 1);
    const auto cum = moments_to_cumulants(mom);
    const auto d = maxent_theta_density(cum);
    CHECK(std::fabs(grid_moments(d.grid).m1 - mom.m1) < 1e-4);
}

TEST_CASE("positive-support maxent density approximates Gamma(4,1)") {
    const auto pd = maxent_positive_density(CumulantSet{4.0, 2.0, 1.0, 4.5});
    double sup = 0.0;
    for (double q = 0.5; q <= 10.0; q += 0.01)
        sup = std::max(sup, std::fabs(pd.solution.pdf(q) - oracles::gamma_pdf(4.0, 1.0, q)));
    CHECK(sup < 3e-2);

    // single exponential: CDF at 1 close to 1 - e^{-1}
    const auto e1 = maxent_positive_density(CumulantSet{1.0, 1.0, 2.0, 9.0});
    CHECK(std::fabs(e1.solution.cdf(1.0) - (1.0 - std::exp(-1.0))) < 3e-2);

    // symmetric input: density symmetric about the mean
    const auto sym = maxent_positive_density(CumulantSet{10.0, 1.0, 0.0, 3.0});
    for (double d : {0.5, 1.0, 2.5})
        CHECK(std::fabs(sym.solution.pdf(10.0 + d) - sym.solution.pdf(10.0 - d)) < 1e-8);
}

TEST_CASE("poisson-like pmf") {
    // m = 0 is exact
    for (double k : {0.7, 1.0, 2.5})
        CHECK(poisson_like_pmf(k, 2.0, 0.5, 0) ==
              doctest::Approx(std::exp(-std::pow(1.0, k))).epsilon(1e-14));

    // k = 1 reduces to the exact Poisson pmf within 3e-2
    for (double lt : {0.5, 1.0, 2.0})
        for (long long m = 0; m <= 3; ++m) {
            const double approx = poisson_like_pmf(1.0, lt, 1.0, m);
            CHECK(std::fabs(approx - oracles::poisson_pmf(m, lt)) < 3e-2);
        }

    // approximated pmf stays near-normalized
    double total = 0.0;
    for (long long m = 0; m <= 20; ++m) total += poisson_like_pmf(1.3, 1.0, 1.0, m);
    CHECK(total <= 1.0 + 5e-2);
    CHECK(total >= 0.9);
}

TEST_CASE("erlang/poisson equivalence (pipeline shape oracle)") {
    for (int n = 0; n <= 10; ++n)
        for (double lt : {0.1, 0.5, 1.0, 2.0, 5.0}) {
            double tail = 1.0;
            for (int i = 0; i <= n; ++i) tail -= oracles::poisson_pmf(i, lt);
            const double erlang_cdf = oracles::regularized_gamma_p(n + 1.0, lt);
            CHECK(std::fabs(tail - erlang_cdf) < 1e-12);
        }
}

TEST_CASE("simplex volume by recursive quadrature") {
    // V_m(tau) = int_0^tau V_{m-1}(tau - t) dt = tau^m / m!
    std::function<double(int, double)> volume = [&](int m, double tau) -> double {
        if (m == 0) return 1.0;
        return integrate_1d([&](double t) { return volume(m - 1, tau - t); }, 0.0, tau, 1e-11);
    };
    for (int m = 1; m <= 5; ++m) {
        const double tau = 1.7;
        const double expect = std::exp(m * std::log(tau) - std::lgamma(m + 1.0));
        CHECK(std::fabs(volume(m, tau) - expect) < 1e-9);
    }
}

namespace {

WeibullPosterior pinned_weibull(double k_center, double k_eps) {
    ReliabilityData rd;
    rd.failures = {1.0, 2.0};
    rd.survivals = {3.0};
    rd.prior_guess_t = 1.0;
    GridSpec spec;
    spec.bounds1 = {k_center - k_eps, k_center + k_eps};
    return build_weibull(rd, spec);
}

}  // namespace

TEST_CASE("poisson-like theta distribution") {
    const auto post = pinned_weibull(1.0, 1e-6);
    const auto result = poisson_like_theta_distribution(post, 1.0, 1, 16);

    double wsum = 0.0;
    for (double w : result.mixture.weights) wsum += w;
    CHECK(std::fabs(wsum - 1.0) < 1e-12);

    // with k pinned at 1 the lambda posterior is Gamma(r+1, T), so the exact
    // pushforward mean is the closed-form count-model moment
    PoissonPosterior equivalent;
    equivalent.lambda_power = 2.0;  // r = 2
    equivalent.rate = 7.0;          // t + sum x + sum y
    const double exact_mean = poisson_theta_moments(equivalent, 1.0, 1).m1;
    const auto push = result.mixture.pushforward_moments();
    CHECK(std::fabs(push.m1 - exact_mean) < 3e-2);
    CHECK(std::fabs(grid_moments(result.density.grid).m1 - push.m1) < 1e-3);
}

TEST_CASE("poisson-like theta distribution with a collapsed posterior") {
    ReliabilityData rd;
    rd.failures = {1.0, 2.0};
    rd.survivals = {3.0};
    rd.prior_guess_t = 1.0;
    GridSpec spec;
    spec.bounds1 = {1.0 - 1e-9, 1.0 + 1e-9};
    spec.bounds2 = {0.4 - 1e-9, 0.4 + 1e-9};
    const auto post = build_weibull(rd, spec);
    const auto result = poisson_like_theta_distribution(post, 1.0, 1, 4);
    const double theta_cell = poisson_like_pmf(1.0, 0.4, 1.0, 1);
    for (double th : result.mixture.thetas)
        CHECK(th == doctest::Approx(theta_cell).epsilon(1e-6));
    CHECK(std::fabs(grid_moments(result.density.grid).m1 - theta_cell) < 1e-4);
}
