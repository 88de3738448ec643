#include "betalike/evidence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "betalike/errors.hpp"
#include "betalike/quadrature.hpp"

namespace betalike {

bool PriorRange::proper() const {
    return std::isfinite(lo) && std::isfinite(hi) && lo > 0.0 && hi > lo;
}

double PriorRange::log_normalizer() const { return -std::log(std::log(hi) - std::log(lo)); }

namespace {

void require_proper(const PriorRange& k_range) {
    if (!k_range.proper())
        throw ValidationError(
            "improper shape-prior range: the log-uniform normalizer over (0, inf) vanishes, "
            "which would force the shape model's posterior probability to zero regardless of "
            "the data; supply finite bounds 0 < lo < hi");
}

double sum_all_times(const ReliabilityData& d) {
    double s = 0.0;
    for (double x : d.failures) s += x;
    for (double y : d.survivals) s += y;
    return s;
}

}  // namespace

double exponential_evidence_core(const ReliabilityData& data) {
    validate(data);
    const std::size_t r = data.r();
    if (r < 1)
        throw ValidationError(
            "evidence diverges under the scale-invariant prior with zero observed failures");
    return std::lgamma(static_cast<double>(r)) -
           static_cast<double>(r) * std::log(sum_all_times(data));
}

double weibull_evidence_core(const ReliabilityData& data, const PriorRange& k_range,
                             double rel_tol) {
    validate(data);
    require_proper(k_range);
    const std::size_t r = data.r();
    if (r < 1)
        throw ValidationError(
            "evidence diverges under the scale-invariant prior with zero observed failures");

    double sum_log_x = 0.0;
    for (double x : data.failures) sum_log_x += std::log(x);

    auto log_integrand = [&](double k) {
        double sk = 0.0;
        for (double x : data.failures) sk += std::pow(x, k);
        for (double y : data.survivals) sk += std::pow(y, k);
        return (static_cast<double>(r) - 2.0) * std::log(k) + (k - 1.0) * sum_log_x -
               static_cast<double>(r) * std::log(sk);
    };

    // Shift by the scanned maximum so the exponential never overflows.
    double shift = -std::numeric_limits<double>::infinity();
    const int scan_n = 201;
    for (int i = 0; i < scan_n; ++i) {
        const double k = k_range.lo + (k_range.hi - k_range.lo) * i / (scan_n - 1);
        shift = std::max(shift, log_integrand(k));
    }
    const double integral = integrate_1d(
        [&](double k) { return std::exp(log_integrand(k) - shift); }, k_range.lo, k_range.hi,
        rel_tol);
    return std::lgamma(static_cast<double>(r)) + k_range.log_normalizer() + shift +
           std::log(integral);
}

EvidenceReport model_posterior(const ReliabilityData& data, const PriorRange& k_range,
                               double prior_m1, double prior_m2) {
    if (!(prior_m1 >= 0.0 && prior_m2 >= 0.0))
        throw ValidationError("model priors must be nonnegative");
    if (std::fabs(prior_m1 + prior_m2 - 1.0) > 1e-12)
        throw ValidationError("model priors must sum to one");
    require_proper(k_range);

    const double neg_inf = -std::numeric_limits<double>::infinity();
    // A model with zero prior probability contributes nothing, so its core
    // need not be computable.
    double core1 = neg_inf, core2 = neg_inf;
    if (prior_m1 > 0.0) {
        core1 = exponential_evidence_core(data);
    } else {
        try {
            core1 = exponential_evidence_core(data);
        } catch (const std::exception&) {
        }
    }
    if (prior_m2 > 0.0) {
        core2 = weibull_evidence_core(data, k_range);
    } else {
        try {
            core2 = weibull_evidence_core(data, k_range);
        } catch (const std::exception&) {
        }
    }

    const double l1 = prior_m1 > 0.0 ? std::log(prior_m1) + core1 : neg_inf;
    const double l2 = prior_m2 > 0.0 ? std::log(prior_m2) + core2 : neg_inf;
    const double lm = std::max(l1, l2);
    const double u1 = std::exp(l1 - lm), u2 = std::exp(l2 - lm);
    const double p1 = u1 / (u1 + u2);

    EvidenceReport report;
    report.k_range = k_range;
    report.models.push_back({"exponential", core1, p1});
    report.models.push_back({"weibull", core2, 1.0 - p1});
    return report;
}

}  // namespace betalike
