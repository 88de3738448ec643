#pragma once

#include <string>
#include <vector>

#include "betalike/data.hpp"

namespace betalike {

/// Proper log-uniform prior range for a positive parameter; the normalizer
/// is 1/(log hi - log lo).
struct PriorRange {
    double lo = 0.0;
    double hi = 0.0;

    bool proper() const;
    double log_normalizer() const;  // log C = -log(log hi - log lo)
};

struct ModelEvidence {
    std::string name;
    double log_core = 0.0;  // evidence with the shared constants dropped
    double posterior = 0.0;
};

struct EvidenceReport {
    std::vector<ModelEvidence> models;
    PriorRange k_range;
    // Factors common to both evidences, cancelled in the posterior ratio and
    // never evaluated: the lambda-prior normalizer, (r-1)!, and the data
    // differentials. (r-1)! is kept inside each core so the cores are also
    // meaningful on their own.
    std::string shared_constants_note = "C_lambda,(r-1)!,prod dx_i";
};

/// log[(r-1)!] - r log(sum x + sum y): the exponential-model evidence with
/// the shared constants dropped. Requires r >= 1.
double exponential_evidence_core(const ReliabilityData& data);

/// log of (r-1)! C_k int_{a_k}^{b_k} k^{r-2} prod x_i^{k-1}
///        / (sum x^k + sum y^k)^r dk, evaluated in log space.
double weibull_evidence_core(const ReliabilityData& data, const PriorRange& k_range,
                             double rel_tol = 1e-8);

EvidenceReport model_posterior(const ReliabilityData& data, const PriorRange& k_range,
                               double prior_m1 = 0.5, double prior_m2 = 0.5);

}  // namespace betalike
