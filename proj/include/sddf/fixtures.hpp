#pragma once
// Synthetic hospital-like cost data: four right-skewed output columns and a
// convex increasing cost rule with multiplicative noise. Stands in for the
// non-redistributable survey data in the application pipelines; shape
// targets only, never value reproduction.

#include "sddf/data.hpp"

#include <cstdint>

namespace sddf {

struct HospitalFixtureSpec {
    std::size_t n = 500;
    std::uint64_t seed = 1;
    double noise_sd = 0.2;  // sd of the multiplicative log-normal cost noise
    // Per-output lognormal parameters; medians land near a few hundred to a
    // few thousand procedures with column skewness in the 2-5 range.
    Vec log_means = {4.3, 7.4, 6.8, 8.0};
    Vec log_sds = {0.80, 0.90, 0.85, 0.80};
    // Cost rule: base + sum_q coef_q * y_q^exp_q + coef_x * (w'y)^exp_x with
    // w_q = 1/median_q. All exponents exceed 1, so the rule is convex and
    // marginal costs increase with scale; the aggregate term carries
    // cross-output curvature that an additive quadratic cannot express.
    Vec exponents = {1.20, 1.15, 1.25, 1.10};
    double aggregate_exponent = 1.6;
    double base_cost = 5e6;
    double term_at_median = 1.2e7;      // each additive term's size at the median bundle
    double aggregate_at_median = 4.0e7; // the aggregate term's size at the median bundle

    void validate() const;
};

Dataset gen_hospital_fixture(const HospitalFixtureSpec& spec = {});

// Noiseless cost rule value for a given output bundle under the spec.
double hospital_cost_rule(const HospitalFixtureSpec& spec, const Vec& y);

double sample_skewness(const Vec& values);

} // namespace sddf
