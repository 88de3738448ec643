// The parallel kernels must be bitwise-identical to the serial reference.
#include <doctest.h>

#include <atomic>
#include <cmath>
#include <stdexcept>

#include "betalike/maxent.hpp"
#include "betalike/parallel.hpp"
#include "betalike/posterior.hpp"
#include "betalike/theta_density.hpp"

using namespace betalike;

namespace {

BinaryOutcomeData binary_fixture() {
    BinaryOutcomeData d;
    d.success_predictors = {0.3, 1.2, -0.5, 2.0};
    d.failure_predictors = {-1.1, 0.1, -2.0};
    return d;
}

ReliabilityData reliability_fixture() {
    ReliabilityData d;
    d.failures = {1.0, 2.0, 0.7};
    d.survivals = {3.0, 5.5};
    d.prior_guess_t = 1.5;
    return d;
}

}  // namespace

TEST_CASE("par::run matches run_serial element-for-element") {
    std::vector<double> a(1000), b(1000);
    auto body = [](std::size_t i) { return std::exp(std::sin(0.001 * double(i))) / (i + 1.0); };
    par::run_serial(a.size(), [&](std::size_t i) { a[i] = body(i); });
    par::run(b.size(), [&](std::size_t i) { b[i] = body(i); });
    CHECK(a == b);
}

TEST_CASE("par::run propagates exceptions") {
    CHECK_THROWS_AS(par::run(64, [](std::size_t i) {
                        if (i == 13) throw std::runtime_error("boom");
                    }),
                    std::runtime_error);
}

TEST_CASE("posterior grids are bitwise identical serial vs parallel") {
    Grid2D serial, parallel;
    {
        par::ScopedCap cap(1);
        serial = build_logistic(binary_fixture()).grid;
    }
    {
        par::ScopedCap cap(0);
        parallel = build_logistic(binary_fixture()).grid;
    }
    CHECK(serial.values == parallel.values);
    CHECK(serial.axis1 == parallel.axis1);
}

TEST_CASE("theta scans are bitwise identical serial vs parallel") {
    std::vector<double> serial, parallel;
    {
        par::ScopedCap cap(1);
        const auto post = build_weibull(reliability_fixture());
        serial = weibull_theta_density(post, 1.0).grid.values;
    }
    {
        par::ScopedCap cap(0);
        const auto post = build_weibull(reliability_fixture());
        parallel = weibull_theta_density(post, 1.0).grid.values;
    }
    CHECK(serial == parallel);
}

TEST_CASE("poisson-like cell scans are bitwise identical serial vs parallel") {
    GridSpec spec;
    spec.bounds1 = {0.9, 1.4};
    std::vector<double> serial_w, parallel_w, serial_t, parallel_t;
    {
        par::ScopedCap cap(1);
        const auto post = build_weibull(reliability_fixture(), spec);
        const auto r = poisson_like_theta_distribution(post, 1.0, 1, 12);
        serial_w = r.mixture.weights;
        serial_t = r.mixture.thetas;
    }
    {
        par::ScopedCap cap(0);
        const auto post = build_weibull(reliability_fixture(), spec);
        const auto r = poisson_like_theta_distribution(post, 1.0, 1, 12);
        parallel_w = r.mixture.weights;
        parallel_t = r.mixture.thetas;
    }
    CHECK(serial_w == parallel_w);
    CHECK(serial_t == parallel_t);
}
