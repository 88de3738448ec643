#pragma once

#include <optional>
#include <string>
#include <vector>

namespace betalike {

/// Failure times and right-censored (no-failure) times, plus an optional
/// prior life-time guess. Times are dimensionless reals; keeping the unit
/// consistent (e.g. hours) is the caller's responsibility.
struct ReliabilityData {
    std::vector<double> failures;   // r observed failure times
    std::vector<double> survivals;  // n - r times without failure
    std::optional<double> prior_guess_t;

    std::size_t r() const { return failures.size(); }
    std::size_t n() const { return failures.size() + survivals.size(); }
};

struct BinaryOutcomeData {
    std::vector<double> success_predictors;
    std::vector<double> failure_predictors;
};

struct CountData {
    std::vector<long long> counts;
    std::optional<std::vector<double>> predictors;  // same length as counts when present
    double window_tau = 0.0;
    std::optional<double> total_time_T;
    std::optional<double> prior_guess_t;
};

/// Query describing the probability of interest: m events within window tau,
/// optionally at predictor value z.
struct QueryTarget {
    double tau = 0.0;
    long long m = 0;
    std::optional<double> z;
};

void validate(const ReliabilityData& d);
void validate(const BinaryOutcomeData& d);
void validate(const CountData& d);
void validate(const QueryTarget& q);

// CSV ingestion. UTF-8, '.' decimal separator, '#' comment lines ignored.
// Headers: `kind,time` (kind in {failure, survival, prior_guess}),
// `outcome,predictor` (outcome in {success, failure}), `count[,predictor]`.
ReliabilityData load_reliability_csv(const std::string& path);
BinaryOutcomeData load_binary_csv(const std::string& path);
CountData load_count_csv(const std::string& path, double tau,
                         std::optional<double> total_time_T = std::nullopt);

// In-memory parsers backing the loaders (handy for tests).
ReliabilityData parse_reliability_csv(const std::string& text);
BinaryOutcomeData parse_binary_csv(const std::string& text);
CountData parse_count_csv(const std::string& text, double tau,
                          std::optional<double> total_time_T = std::nullopt);

// Round-trip serialization: 17 significant digits, numeric fields exact.
std::string serialize(const ReliabilityData& d);
std::string serialize(const BinaryOutcomeData& d);
std::string serialize(const CountData& d);

}  // namespace betalike
